#include <bit>
#include <chrono>
#include <fstream>
#include <sstream>

#include "dance/classify.hpp"
#include "dance/error.hpp"

namespace dance {

namespace {

constexpr std::string_view kMagic = "DNCMODL1";
constexpr std::uint32_t kVersion = 1;

class Writer {
  public:
    void u(std::uint64_t v, int width) {
        for (int i = 0; i < width; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void f64(double v) { u(std::bit_cast<std::uint64_t>(v), 8); }
    void str(std::string_view s) {
        u(s.size(), 4);
        out_.append(s);
    }
    void raw(std::string_view s) { out_.append(s); }
    std::string take() { return std::move(out_); }

  private:
    std::string out_;
};

class Reader {
  public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}
    std::uint64_t u(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(width);
        return v;
    }
    double f64() { return std::bit_cast<double>(u(8)); }
    std::string str() {
        const auto n = static_cast<std::size_t>(u(4));
        need(n);
        std::string s(bytes_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == bytes_.size(); }

  private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw DataError("model file: truncated input");
    }
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

PredictionSet predict(const TrainedModel& model, const FeatureMatrix& queries, Execution exec) {
    if (const auto* knn = std::get_if<KnnModel>(&model.impl)) return knn_predict(*knn, queries, exec);
    return logreg_predict(std::get<LogRegModel>(model.impl), queries);
}

std::string encode_model(const TrainedModel& model) {
    Writer w;
    w.raw(kMagic);
    w.u(kVersion, 4);
    const bool is_knn = std::holds_alternative<KnnModel>(model.impl);
    w.u(is_knn ? 0 : 1, 1);
    w.str(model.feature_mode);
    w.f64(model.train_time_s);
    if (is_knn) {
        const auto& m = std::get<KnnModel>(model.impl);
        w.u(static_cast<std::uint32_t>(m.k), 4);
        w.u(m.metric == Metric::Euclidean ? 0 : 1, 1);
        w.u(m.train.class_names.size(), 4);
        for (const auto& c : m.train.class_names) w.str(c);
        w.u(m.train.size(), 8);
        w.u(m.train.dim(), 8);
        for (std::size_t i = 0; i < m.train.size(); ++i) {
            w.str(m.train.ids[i]);
            w.u(static_cast<std::uint32_t>(m.train.labels[i]), 4);
            for (double v : m.train.rows[i]) w.f64(v);
        }
    } else {
        const auto& m = std::get<LogRegModel>(model.impl);
        w.u(m.class_names.size(), 4);
        for (const auto& c : m.class_names) w.str(c);
        w.u(m.dim, 8);
        w.f64(m.config.learning_rate);
        w.u(static_cast<std::uint32_t>(m.config.epochs), 4);
        w.u(static_cast<std::uint32_t>(m.config.batch_size), 4);
        w.u(m.config.seed, 8);
        w.u(m.loss_history.size(), 4);
        for (double l : m.loss_history) w.f64(l);
        for (double v : m.weights) w.f64(v);
    }
    return w.take();
}

TrainedModel decode_model(std::string_view bytes) {
    if (bytes.substr(0, kMagic.size()) != kMagic) throw DataError("model file: bad magic");
    Reader r(bytes.substr(kMagic.size()));
    const auto version = r.u(4);
    if (version != kVersion) throw DataError("model file: unsupported version " + std::to_string(version));
    TrainedModel out;
    const auto kind = r.u(1);
    out.feature_mode = r.str();
    out.train_time_s = r.f64();
    if (kind == 0) {
        KnnModel m;
        m.k = static_cast<int>(r.u(4));
        m.metric = r.u(1) == 0 ? Metric::Euclidean : Metric::Manhattan;
        const auto n_classes = r.u(4);
        for (std::uint64_t c = 0; c < n_classes; ++c) m.train.class_names.push_back(r.str());
        const auto rows = r.u(8);
        const auto dim = r.u(8);
        for (std::uint64_t i = 0; i < rows; ++i) {
            m.train.ids.push_back(r.str());
            m.train.labels.push_back(static_cast<std::int32_t>(static_cast<std::uint32_t>(r.u(4))));
            std::vector<double> row(dim);
            for (auto& v : row) v = r.f64();
            m.train.rows.push_back(std::move(row));
        }
        m.train.validate();
        out.impl = std::move(m);
    } else if (kind == 1) {
        LogRegModel m;
        const auto n_classes = r.u(4);
        for (std::uint64_t c = 0; c < n_classes; ++c) m.class_names.push_back(r.str());
        m.dim = r.u(8);
        m.config.learning_rate = r.f64();
        m.config.epochs = static_cast<int>(r.u(4));
        m.config.batch_size = static_cast<int>(r.u(4));
        m.config.seed = r.u(8);
        const auto n_loss = r.u(4);
        for (std::uint64_t i = 0; i < n_loss; ++i) m.loss_history.push_back(r.f64());
        m.weights.resize(m.class_names.size() * (m.dim + 1));
        for (auto& v : m.weights) v = r.f64();
        out.impl = std::move(m);
    } else {
        throw DataError("model file: unknown model kind");
    }
    if (!r.done()) throw DataError("model file: trailing bytes");
    return out;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    const std::string bytes = encode_model(model);
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("I/O error writing '" + path.string() + "'");
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_model(buf.str());
}

}  // namespace dance
