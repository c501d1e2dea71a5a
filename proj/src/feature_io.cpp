#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "dance/error.hpp"
#include "dance/features.hpp"

namespace dance {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = line.find(',', start);
        if (end == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, end - start));
        start = end + 1;
    }
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

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
    std::string str(std::size_t n) {
        need(n);
        std::string s(bytes_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == bytes_.size(); }

  private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw DataError("feature binary: truncated input");
    }
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

constexpr std::string_view kMagic = "DNCFEAT1";

}  // namespace

std::string feature_matrix_to_csv(const FeatureMatrix& m) {
    m.validate();
    std::string out = "id,label";
    for (std::size_t j = 0; j < m.dim(); ++j) out += ",f" + std::to_string(j);
    out += '\n';
    char buf[64];
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += m.ids[i];
        out += ',';
        if (m.labels[i] >= 0) out += m.class_names[static_cast<std::size_t>(m.labels[i])];
        for (double v : m.rows[i]) {
            const int n = std::snprintf(buf, sizeof buf, ",%.17g", v);
            out.append(buf, static_cast<std::size_t>(n));
        }
        out += '\n';
    }
    return out;
}

FeatureMatrix feature_matrix_from_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        start = end + 1;
    }
    if (lines.empty()) throw DataError("feature CSV: missing header");
    const auto header = split_commas(lines[0]);
    if (header.size() < 2 || header[0] != "id" || header[1] != "label") {
        throw DataError("feature CSV: header must start with id,label");
    }
    const std::size_t dim = header.size() - 2;

    FeatureMatrix m;
    std::vector<std::string> raw_labels;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_commas(lines[i]);
        if (fields.size() != header.size()) {
            throw DataError("feature CSV line " + std::to_string(i + 1) + ": wrong number of fields");
        }
        m.ids.emplace_back(fields[0]);
        raw_labels.emplace_back(fields[1]);
        std::vector<double> row(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            const std::string_view f = fields[j + 2];
            const auto res = std::from_chars(f.data(), f.data() + f.size(), row[j]);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
                throw DataError("feature CSV line " + std::to_string(i + 1) + ": bad number '" +
                                std::string(f) + "'");
            }
        }
        m.rows.push_back(std::move(row));
    }
    std::set<std::string> classes;
    for (const auto& l : raw_labels) {
        if (!l.empty()) classes.insert(l);
    }
    m.class_names.assign(classes.begin(), classes.end());
    for (const auto& l : raw_labels) {
        if (l.empty()) {
            m.labels.push_back(-1);
        } else {
            const auto it = std::lower_bound(m.class_names.begin(), m.class_names.end(), l);
            m.labels.push_back(static_cast<int>(it - m.class_names.begin()));
        }
    }
    m.validate();
    return m;
}

std::string feature_matrix_to_binary(const FeatureMatrix& m) {
    m.validate();
    std::string out(kMagic);
    put_u64(out, m.size());
    put_u64(out, m.dim());
    put_u32(out, static_cast<std::uint32_t>(m.class_names.size()));
    for (const auto& name : m.class_names) {
        put_u32(out, static_cast<std::uint32_t>(name.size()));
        out += name;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
        put_u32(out, static_cast<std::uint32_t>(m.ids[i].size()));
        out += m.ids[i];
        put_u32(out, static_cast<std::uint32_t>(m.labels[i]));
        for (double v : m.rows[i]) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
    return out;
}

FeatureMatrix feature_matrix_from_binary(std::string_view bytes) {
    if (bytes.substr(0, kMagic.size()) != kMagic) throw DataError("feature binary: bad magic");
    Reader in(bytes.substr(kMagic.size()));
    const std::uint64_t rows = in.u(8);
    const std::uint64_t dim = in.u(8);
    FeatureMatrix m;
    const auto n_classes = static_cast<std::uint32_t>(in.u(4));
    for (std::uint32_t c = 0; c < n_classes; ++c) m.class_names.push_back(in.str(in.u(4)));
    for (std::uint64_t i = 0; i < rows; ++i) {
        m.ids.push_back(in.str(in.u(4)));
        m.labels.push_back(static_cast<std::int32_t>(static_cast<std::uint32_t>(in.u(4))));
        std::vector<double> row(dim);
        for (auto& v : row) v = std::bit_cast<float>(static_cast<std::uint32_t>(in.u(4)));
        m.rows.push_back(std::move(row));
    }
    if (!in.done()) throw DataError("feature binary: trailing bytes");
    m.validate();
    return m;
}

void save_feature_matrix(const FeatureMatrix& m, const std::filesystem::path& path) {
    const std::string bytes =
        path.extension() == ".csv" ? feature_matrix_to_csv(m) : feature_matrix_to_binary(m);
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("I/O error writing '" + path.string() + "'");
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open feature file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    if (bytes.starts_with(kMagic)) return feature_matrix_from_binary(bytes);
    return feature_matrix_from_csv(bytes);
}

}  // namespace dance
