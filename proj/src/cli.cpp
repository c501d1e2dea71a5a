#include "dance/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dance/batch.hpp"
#include "dance/config.hpp"
#include "dance/error.hpp"
#include "dance/metrics.hpp"

namespace fs = std::filesystem;

namespace dance {

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const fs::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw DataError("I/O error writing '" + path.string() + "'");
}

Point parse_pos(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) throw std::invalid_argument(text);
        std::size_t used = 0;
        const double x = std::stod(text.substr(0, comma), &used);
        const double y = std::stod(text.substr(comma + 1));
        return {x, y};
    } catch (const std::exception&) {
        throw UsageError("--pos expects x,y (got '" + text + "')");
    }
}

std::pair<int, int> parse_size(const std::string& text) {
    const auto x = text.find_first_of("xX");
    try {
        if (x == std::string::npos) throw std::invalid_argument(text);
        const int w = std::stoi(text.substr(0, x));
        const int h = std::stoi(text.substr(x + 1));
        if (w < 1 || h < 1) throw std::invalid_argument(text);
        return {w, h};
    } catch (const std::exception&) {
        throw UsageError("--size expects WxH (got '" + text + "')");
    }
}

// Options shared by subcommands that build a RunConfig.
struct ConfigFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> depth;
    std::optional<double> scale;
    std::optional<double> angle;
    std::string pos;
    std::string size;
    int jobs = 0;

    void add_render(CLI::App* cmd) {
        cmd->add_option("--depth", depth, "recursion depth");
        cmd->add_option("--scale", scale, "step length in world units");
        cmd->add_option("--angle", angle, "step direction in radians");
        cmd->add_option("--pos", pos, "initial anchor as x,y");
        cmd->add_option("--size", size, "image size as WxH");
    }
    void add_common(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "RunConfig JSON file");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--jobs", jobs, "worker threads (0: all cores)");
    }

    RunConfig build() const {
        RunConfig c = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (seed) {
            c.seed = *seed;
            c.split.seed = *seed;
        }
        if (depth) c.kaleidoscope.depth = *depth;
        if (scale) c.kaleidoscope.scale = *scale;
        if (angle) c.kaleidoscope.angle = *angle;
        if (!pos.empty()) c.kaleidoscope.pos = parse_pos(pos);
        if (!size.empty()) std::tie(c.raster.width, c.raster.height) = parse_size(size);
        try {
            c.kaleidoscope.validate();
        } catch (const DataError& ex) {
            throw UsageError(ex.what());
        }
        return c;
    }
};

std::vector<ProteinSequence> load_labeled_fasta(const std::string& fasta, const std::string& labels_path) {
    auto seqs = read_fasta_file(fasta);
    if (!labels_path.empty()) {
        const auto labels = parse_labels_csv(read_text(labels_path));
        for (auto& s : seqs) {
            const auto it = labels.find(s.id());
            if (it == labels.end()) throw DataError("no label for sequence '" + s.id() + "'");
            s.set_label(it->second);
        }
    }
    return seqs;
}

// ----------------------------------------------------------------------------

struct SynthCmd {
    SynthSpec spec;
    std::string out;

    int run(std::ostream& os) const {
        const SynthResult result = synth_dataset(spec);
        fs::create_directories(out);
        write_text(fs::path(out) / "sequences.fasta", format_fasta(result.sequences));
        write_text(fs::path(out) / "labels.csv", format_labels_csv(result.sequences));
        os << "wrote " << result.sequences.size() << " sequences to " << out << "\n";
        return kExitOk;
    }
};

struct RenderCmd {
    ConfigFlags flags;
    std::string fasta;
    std::string labels;
    std::string out;
    std::string manifest;
    std::string method = "dance";
    std::string format = "pgm";
    std::optional<int> ink;

    int run(std::ostream& os, std::ostream& es) const {
        if (format != "pgm" && format != "png") throw UsageError("--format must be pgm or png");
        RunConfig config = flags.build();
        if (ink) config.raster.ink = static_cast<std::uint8_t>(*ink);
        const RenderSettings settings = config.render_settings(parse_render_method(method));
        const auto seqs = load_labeled_fasta(fasta, labels);

        const fs::path out_dir(out);
        fs::create_directories(out_dir);
        const fs::path manifest_path = manifest.empty() ? out_dir / "manifest.json" : fs::path(manifest);
        const fs::path manifest_dir = manifest_path.has_parent_path() ? manifest_path.parent_path() : fs::path(".");

        DatasetManifest m = manifest_from_sequences(seqs, config.seed);
        const int jobs = resolve_jobs(flags.jobs);
        const Execution exec = jobs == 1 ? Execution::Serial : Execution::Parallel;

        std::vector<fs::path> written;
        std::size_t failures = 0;
        constexpr std::size_t kChunk = 256;
        for (std::size_t start = 0; start < seqs.size(); start += kChunk) {
            const std::size_t len = std::min(kChunk, seqs.size() - start);
            const auto outcomes = render_batch(std::span(seqs).subspan(start, len), settings, exec, jobs);
            for (std::size_t i = 0; i < len; ++i) {
                const auto& o = outcomes[i];
                if (!o.image) {
                    es << "error: " << o.error << "\n";
                    ++failures;
                    continue;
                }
                if (failures) continue;
                const fs::path file = out_dir / (seqs[start + i].id() + "." + format);
                save_image(*o.image, file.string());
                written.push_back(file);
                m.entries[start + i].path = fs::proximate(file, manifest_dir).generic_string();
            }
        }
        if (failures) {
            for (const auto& f : written) fs::remove(f);
            es << "render failed for " << failures << " sequence(s); no outputs kept\n";
            return kExitData;
        }
        write_manifest(m, manifest_path);
        os << manifest_path.string() << "\n";
        return kExitOk;
    }
};

struct SplitCmd {
    std::string manifest;
    std::string out;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
    bool no_stratify = false;

    int run(std::ostream& os) const {
        const DatasetManifest m = read_manifest(manifest);
        const DatasetManifest split = stratified_split(m, SplitSpec{test_fraction, seed, !no_stratify});
        const fs::path target = out.empty() ? fs::path(manifest) : fs::path(out);
        DatasetManifest to_write = split;
        if (target.parent_path() != fs::path(manifest).parent_path()) {
            // Keep image paths valid relative to the new manifest location.
            const fs::path src_dir = fs::path(manifest).has_parent_path() ? fs::path(manifest).parent_path() : ".";
            const fs::path dst_dir = target.has_parent_path() ? target.parent_path() : ".";
            for (auto& e : to_write.entries) {
                if (!e.path.empty() && fs::path(e.path).is_relative()) {
                    e.path = fs::proximate(src_dir / e.path, dst_dir).generic_string();
                }
            }
        }
        write_manifest(to_write, target);
        std::size_t n_test = 0;
        for (const auto& e : split.entries) n_test += e.split == Split::Test;
        os << "train " << split.entries.size() - n_test << ", test " << n_test << " -> " << target.string() << "\n";
        return kExitOk;
    }
};

struct FeaturizeCmd {
    ConfigFlags flags;
    std::string manifest;
    std::string fasta;
    std::string labels;
    std::string mode;
    std::string out;
    std::string split = "all";
    std::string method = "dance";
    std::optional<int> downsample;
    std::optional<std::size_t> max_len;
    std::optional<std::size_t> resolution;

    int run(std::ostream& os) const {
        if (manifest.empty() == fasta.empty()) throw UsageError("featurize needs exactly one of --manifest or --fasta");
        RunConfig config = flags.build();
        if (!mode.empty()) config.features.mode = parse_feature_mode(mode);
        if (downsample) config.features.downsample = *downsample;
        if (max_len) config.features.max_len = *max_len;
        if (resolution) config.fcgr_resolution = *resolution;
        if (split != "all" && split != "train" && split != "test") throw UsageError("--split must be all, train or test");

        DatasetManifest m;
        fs::path base = ".";
        if (!manifest.empty()) {
            m = read_manifest(manifest);
            if (fs::path(manifest).has_parent_path()) base = fs::path(manifest).parent_path();
        } else {
            m = manifest_from_sequences(load_labeled_fasta(fasta, labels), config.seed);
        }

        std::size_t ohe_len = config.features.max_len;
        if (ohe_len == 0) ohe_len = m.ohe_max_len.value_or(0);
        if (ohe_len == 0) {
            for (const auto& e : m.entries) ohe_len = std::max(ohe_len, e.sequence.size());
        }

        std::vector<const ManifestEntry*> selected;
        for (const auto& e : m.entries) {
            if (split == "all" || split_name(e.split) == split) selected.push_back(&e);
        }
        if (split != "all" && selected.empty()) throw DataError("no manifest entries in split '" + split + "'");

        const RenderSettings settings = config.render_settings(parse_render_method(method));
        FeatureMatrix fm;
        fm.class_names = m.class_names;
        fm.rows.resize(selected.size());
        std::vector<std::string> errors(selected.size());
        const int jobs = resolve_jobs(flags.jobs);
        const auto n = static_cast<std::ptrdiff_t>(selected.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const ManifestEntry& e = *selected[i];
            try {
                switch (config.features.mode) {
                    case FeatureMode::Ohe:
                        if (e.sequence.empty()) throw DataError("no sequence recorded");
                        fm.rows[i] = ohe_encode(e.id, e.sequence, ohe_len).values;
                        break;
                    case FeatureMode::Fcgr:
                        if (e.sequence.empty()) throw DataError("no sequence recorded");
                        fm.rows[i] = fcgr_features(e.id, fcgr_grid(cgr_walk(e.sequence, config.cgr), config.fcgr_resolution)).values;
                        break;
                    case FeatureMode::Pixels: {
                        const RasterImage img = e.path.empty()
                                                    ? render_sequence(e.sequence, settings)
                                                    : load_image((fs::path(e.path).is_absolute() ? fs::path(e.path) : base / e.path).string());
                        fm.rows[i] = pixels_features(e.id, img, config.features.downsample).values;
                        break;
                    }
                }
            } catch (const std::exception& ex) {
                errors[i] = e.id + ": " + ex.what();
            }
        }
        for (const auto& err : errors) {
            if (!err.empty()) throw DataError(err);
        }
        for (const auto* e : selected) {
            fm.ids.push_back(e->id);
            fm.labels.push_back(e->label.empty() ? -1 : static_cast<int>(m.class_index(e->label)));
        }
        save_feature_matrix(fm, out);
        os << fm.size() << " x " << fm.dim() << " " << feature_mode_name(config.features.mode) << " features -> " << out << "\n";
        return kExitOk;
    }
};

struct TrainCmd {
    ConfigFlags flags;
    std::string features;
    std::string model;
    std::string out;
    std::optional<int> k;
    std::string metric;
    std::optional<double> lr;
    std::optional<int> epochs;
    std::optional<int> batch_size;
    std::string feature_mode;

    int run(std::ostream& os) const {
        RunConfig config = flags.build();
        if (!model.empty()) {
            if (model == "knn") {
                config.classify.model = ModelKind::Knn;
            } else if (model == "logreg") {
                config.classify.model = ModelKind::LogReg;
            } else {
                throw UsageError("--model must be knn or logreg");
            }
        }
        if (k) config.classify.k = *k;
        if (!metric.empty()) config.classify.metric = parse_metric(metric);
        if (lr) config.classify.logreg.learning_rate = *lr;
        if (epochs) config.classify.logreg.epochs = *epochs;
        if (batch_size) config.classify.logreg.batch_size = *batch_size;
        config.classify.logreg.seed = config.seed;

        FeatureMatrix train = load_feature_matrix(features);
        TrainedModel trained;
        trained.feature_mode = feature_mode.empty() ? std::string(feature_mode_name(config.features.mode)) : feature_mode;
        const auto t0 = std::chrono::steady_clock::now();
        if (config.classify.model == ModelKind::Knn) {
            trained.impl = knn_fit(std::move(train), config.classify.k, config.classify.metric);
        } else {
            trained.impl = logreg_train(train, config.classify.logreg);
        }
        trained.train_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        save_model(trained, out);
        os << "trained " << (config.classify.model == ModelKind::Knn ? "knn" : "logreg") << " in "
           << trained.train_time_s << " s -> " << out << "\n";
        return kExitOk;
    }
};

struct PredictCmd {
    std::string model;
    std::string features;
    std::string out;
    int jobs = 0;

    int run(std::ostream& os) const {
        const TrainedModel trained = load_model(model);
        const FeatureMatrix queries = load_feature_matrix(features);
        const PredictionSet preds = predict(trained, queries, execution_for(jobs));
        write_text(out, predictions_to_json(preds));
        os << preds.items.size() << " predictions -> " << out << "\n";
        return kExitOk;
    }
};

struct EvalCmd {
    std::string predictions;
    std::string model;
    std::optional<double> train_time;
    std::string out;
    std::string name = "model";

    int run(std::ostream& os) const {
        const PredictionSet preds = predictions_from_json(read_text(predictions));
        double seconds = 0.0;
        if (train_time) {
            seconds = *train_time;
        } else if (!model.empty()) {
            seconds = load_model(model).train_time_s;
        }
        const EvalReport report = evaluate(preds, seconds);
        const std::string json = eval_report_to_json(report);
        if (out.empty()) {
            os << json;
        } else {
            write_text(out, json);
        }
        os << format_eval_table(report, name);
        return kExitOk;
    }
};

struct SegmentsCmd {
    ConfigFlags flags;
    std::string sequence;
    std::string out;

    int run(std::ostream& os) const {
        const RunConfig config = flags.build();
        const ProteinSequence seq("query", sequence);
        const SegmentSet segments = generate_kaleidoscope(seq.residues(), config.kaleidoscope);
        if (out.empty()) {
            os << format_segments(segments);
        } else {
            write_text(out, format_segments(segments));
        }
        return kExitOk;
    }
};

struct FcgrCmd {
    ConfigFlags flags;
    std::string fasta;
    std::string out;
    std::optional<std::size_t> resolution;

    int run(std::ostream& os) const {
        RunConfig config = flags.build();
        if (resolution) config.fcgr_resolution = *resolution;
        const auto seqs = read_fasta_file(fasta);
        fs::create_directories(out);
        for (const auto& s : seqs) {
            const FcgrGrid grid = fcgr_grid(cgr_walk(s.residues(), config.cgr), config.fcgr_resolution);
            write_text(fs::path(out) / (s.id() + ".csv"), format_fcgr_csv(grid));
        }
        os << seqs.size() << " grids -> " << out << "\n";
        return kExitOk;
    }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"DANCE kaleidoscope images and sequence classification pipeline", "dance"};
    app.require_subcommand(1);

    SynthCmd synth;
    auto* c_synth = app.add_subcommand("synth", "generate a labeled motif dataset");
    c_synth->add_option("--classes", synth.spec.n_classes)->capture_default_str();
    c_synth->add_option("--per-class", synth.spec.per_class)->capture_default_str();
    c_synth->add_option("--min-len", synth.spec.min_length)->capture_default_str();
    c_synth->add_option("--max-len", synth.spec.max_length)->capture_default_str();
    c_synth->add_option("--motif-len", synth.spec.motif_length)->capture_default_str();
    c_synth->add_option("--seed", synth.spec.seed)->capture_default_str();
    c_synth->add_option("--out", synth.out, "output directory")->required();

    RenderCmd render;
    auto* c_render = app.add_subcommand("render", "render one image per FASTA record");
    c_render->add_option("--fasta", render.fasta)->required();
    c_render->add_option("--labels", render.labels, "labels CSV (id,label)");
    c_render->add_option("--out", render.out, "image directory")->required();
    c_render->add_option("--manifest", render.manifest, "manifest path (default <out>/manifest.json)");
    c_render->add_option("--method", render.method, "dance or cgr")->capture_default_str();
    c_render->add_option("--format", render.format, "pgm or png")->capture_default_str();
    c_render->add_option("--ink", render.ink, "gray level of lines (0-254)")->check(CLI::Range(0, 254));
    render.flags.add_common(c_render);
    render.flags.add_render(c_render);

    SplitCmd split;
    auto* c_split = app.add_subcommand("split", "assign a seeded stratified train/test split");
    c_split->add_option("--manifest", split.manifest)->required();
    c_split->add_option("--out", split.out, "output manifest (default: overwrite)");
    c_split->add_option("--test-fraction", split.test_fraction)->capture_default_str();
    c_split->add_option("--seed", split.seed)->capture_default_str();
    c_split->add_flag("--no-stratify", split.no_stratify);

    FeaturizeCmd feat;
    auto* c_feat = app.add_subcommand("featurize", "build a feature matrix");
    c_feat->add_option("--manifest", feat.manifest);
    c_feat->add_option("--fasta", feat.fasta);
    c_feat->add_option("--labels", feat.labels);
    c_feat->add_option("--mode", feat.mode, "ohe, pixels or fcgr");
    c_feat->add_option("--out", feat.out, ".csv or binary feature file")->required();
    c_feat->add_option("--split", feat.split, "all, train or test")->capture_default_str();
    c_feat->add_option("--method", feat.method, "render method when images are built on the fly");
    c_feat->add_option("--downsample", feat.downsample);
    c_feat->add_option("--max-len", feat.max_len);
    c_feat->add_option("--resolution", feat.resolution);
    feat.flags.add_common(c_feat);
    feat.flags.add_render(c_feat);

    TrainCmd train;
    auto* c_train = app.add_subcommand("train", "fit a classifier");
    c_train->add_option("--features", train.features)->required();
    c_train->add_option("--model", train.model, "knn or logreg");
    c_train->add_option("--out", train.out)->required();
    c_train->add_option("--k", train.k);
    c_train->add_option("--metric", train.metric, "euclidean or manhattan");
    c_train->add_option("--lr", train.lr);
    c_train->add_option("--epochs", train.epochs);
    c_train->add_option("--batch-size", train.batch_size);
    c_train->add_option("--feature-mode", train.feature_mode, "recorded in the model metadata");
    train.flags.add_common(c_train);

    PredictCmd pred;
    auto* c_pred = app.add_subcommand("predict", "score a feature matrix");
    c_pred->add_option("--model", pred.model)->required();
    c_pred->add_option("--features", pred.features)->required();
    c_pred->add_option("--out", pred.out)->required();
    c_pred->add_option("--jobs", pred.jobs);

    EvalCmd eval;
    auto* c_eval = app.add_subcommand("eval", "metrics report from a prediction set");
    c_eval->add_option("--predictions", eval.predictions)->required();
    c_eval->add_option("--model", eval.model, "model file providing the training time");
    c_eval->add_option("--train-time", eval.train_time, "training time in seconds");
    c_eval->add_option("--out", eval.out, "report JSON path (default: stdout)");
    c_eval->add_option("--name", eval.name, "row label of the table")->capture_default_str();

    SegmentsCmd segs;
    auto* c_segs = app.add_subcommand("segments", "dump the kaleidoscope segments of one sequence");
    c_segs->add_option("--sequence", segs.sequence)->required();
    c_segs->add_option("--out", segs.out);
    segs.flags.add_common(c_segs);
    segs.flags.add_render(c_segs);

    FcgrCmd fcgr;
    auto* c_fcgr = app.add_subcommand("fcgr", "export frequency CGR grids as CSV");
    c_fcgr->add_option("--fasta", fcgr.fasta)->required();
    c_fcgr->add_option("--out", fcgr.out)->required();
    c_fcgr->add_option("--resolution", fcgr.resolution);
    fcgr.flags.add_common(c_fcgr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_synth->parsed()) return synth.run(out);
        if (c_render->parsed()) return render.run(out, err);
        if (c_split->parsed()) return split.run(out);
        if (c_feat->parsed()) return feat.run(out);
        if (c_train->parsed()) return train.run(out);
        if (c_pred->parsed()) return pred.run(out);
        if (c_eval->parsed()) return eval.run(out);
        if (c_segs->parsed()) return segs.run(out);
        if (c_fcgr->parsed()) return fcgr.run(out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

}  // namespace dance
