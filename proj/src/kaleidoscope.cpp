#include "dance/kaleidoscope.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include "dance/error.hpp"

namespace dance {

namespace {

// Rank order: A C D E F G H I K L M N P Q R S T V W Y
constexpr std::array<Point, kAlphabetSize> kStandardPoints{{
    {0.5, 0.5},   {1.0, 0.5},   {0.5, 1.0},   {0.0, 0.5},   {1.0, 1.0},
    {0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}, {0.75, 0.0},
    {0.5, 0.0},   {0.25, 0.5},  {1.0, 0.0},   {0.0, 1.0},   {0.5, 0.25},
    {0.75, 0.5},  {0.5, 0.75},  {0.0, 0.0},   {1.0, 0.25},  {1.0, 0.75},
}};

using MemoKey = std::tuple<double, double, int>;

class Generator {
  public:
    Generator(std::string_view residues, const KaleidoscopeParams& params,
              const CoordinateTable& table, SegmentSet& out)
        : residues_(residues), params_(params), table_(table), out_(out),
          dx_(params.scale * std::cos(params.angle)),
          dy_(params.scale * std::sin(params.angle)) {}

    void run(int depth, Point pos) {
        if (depth <= 0) return;
        if (params_.memoize && !visited_.emplace(pos.x, pos.y, depth).second) return;
        double x = pos.x;
        double y = pos.y;
        for (char residue : residues_) {
            x = x + dx_;
            y = y + dy_;
            const Point c = table_.lookup(residue);
            out_.push_back({{x, y}, {c.x, c.y}});
            out_.push_back({{x, y}, {c.x, -c.y}});
            out_.push_back({{-x, -y}, {c.x, c.y}});
            out_.push_back({{-x, -y}, {c.x, -c.y}});
            run(depth - 1, {x, y});
            run(depth - 1, {x, -y});
            run(depth - 1, {-x, y});
            run(depth - 1, {-x, -y});
            depth = depth - 1;
        }
    }

    double dx() const { return dx_; }
    double dy() const { return dy_; }

  private:
    std::string_view residues_;
    const KaleidoscopeParams& params_;
    const CoordinateTable& table_;
    SegmentSet& out_;
    double dx_;
    double dy_;
    std::set<MemoKey> visited_;
};

}  // namespace

CoordinateTable::CoordinateTable(const std::array<Point, kAlphabetSize>& by_rank)
    : points_(by_rank) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const Point p = points_[i];
        if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
            throw DataError(std::string("coordinate table: point for '") + kAminoAcids[i] +
                            "' lies outside [0,1]^2");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (points_[j] == p) {
                throw DataError(std::string("coordinate table: '") + kAminoAcids[j] + "' and '" +
                                kAminoAcids[i] + "' share a point");
            }
        }
    }
}

const CoordinateTable& CoordinateTable::standard() {
    static const CoordinateTable table(kStandardPoints);
    return table;
}

Point CoordinateTable::lookup(char residue) const {
    const auto rank = residue_rank(residue);
    if (!rank) throw DataError(std::string("unknown residue '") + residue + "'");
    return points_[*rank];
}

CoordinateTable CoordinateTable::with_swapped(char a, char b) const {
    const auto ra = residue_rank(a);
    const auto rb = residue_rank(b);
    if (!ra || !rb) throw DataError("with_swapped: unknown residue");
    auto points = points_;
    std::swap(points[*ra], points[*rb]);
    return CoordinateTable(points);
}

void KaleidoscopeParams::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DataError("kaleidoscope: scale must be > 0");
    if (!std::isfinite(angle) || !std::isfinite(pos.x) || !std::isfinite(pos.y)) {
        throw DataError("kaleidoscope: angle and pos must be finite");
    }
    if (depth > kMaxDepth) {
        throw DataError("kaleidoscope: depth " + std::to_string(depth) + " exceeds the guard of " +
                        std::to_string(kMaxDepth));
    }
}

SegmentSet generate_kaleidoscope(std::string_view residues, const KaleidoscopeParams& params,
                                 const CoordinateTable& table) {
    params.validate();
    SegmentSet out;
    if (!params.memoize) {
        const std::uint64_t expected = segment_count_oracle(residues.size(), params.depth);
        out.reserve(static_cast<std::size_t>(expected));
    }
    Generator gen(residues, params, table, out);
    gen.run(params.depth, params.pos);
    return out;
}

SegmentSet generate_kaleidoscope_omp(std::string_view residues, const KaleidoscopeParams& params,
                                     const CoordinateTable& table) {
    if (params.memoize) return generate_kaleidoscope(residues, params, table);
    params.validate();
    if (params.depth <= 0 || residues.empty()) return {};

    for (char r : residues) table.lookup(r);

    const double dx = params.scale * std::cos(params.angle);
    const double dy = params.scale * std::sin(params.angle);
    const auto n = static_cast<std::ptrdiff_t>(residues.size());

    // Anchors follow the same accumulation sequence as the serial loop.
    std::vector<Point> anchors(residues.size());
    double x = params.pos.x;
    double y = params.pos.y;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        x = x + dx;
        y = y + dy;
        anchors[i] = {x, y};
    }

    std::vector<SegmentSet> parts(residues.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        SegmentSet& part = parts[i];
        const Point a = anchors[i];
        const Point c = table.lookup(residues[i]);
        const int child_depth = params.depth - 1 - static_cast<int>(i);
        part.reserve(4 + 4 * segment_count_oracle(residues.size(), child_depth));
        part.push_back({{a.x, a.y}, {c.x, c.y}});
        part.push_back({{a.x, a.y}, {c.x, -c.y}});
        part.push_back({{-a.x, -a.y}, {c.x, c.y}});
        part.push_back({{-a.x, -a.y}, {c.x, -c.y}});
        Generator gen(residues, params, table, part);
        gen.run(child_depth, {a.x, a.y});
        gen.run(child_depth, {a.x, -a.y});
        gen.run(child_depth, {-a.x, a.y});
        gen.run(child_depth, {-a.x, -a.y});
    }

    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    SegmentSet out;
    out.reserve(total);
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

std::uint64_t segment_count_oracle(std::uint64_t length, int depth) {
    if (depth <= 0 || length == 0) return 0;
    // calls[d] = number of active calls spawned by one call entered with depth d.
    std::vector<std::uint64_t> calls(static_cast<std::size_t>(depth) + 1, 0);
    for (int d = 1; d <= depth; ++d) {
        std::uint64_t total = 1;
        for (std::uint64_t i = 0; i < length; ++i) {
            const std::int64_t child = static_cast<std::int64_t>(d) - 1 - static_cast<std::int64_t>(i);
            if (child < 1) break;
            total += 4 * calls[static_cast<std::size_t>(child)];
        }
        calls[static_cast<std::size_t>(d)] = total;
    }
    return 4 * length * calls[static_cast<std::size_t>(depth)];
}

std::string format_segments(const SegmentSet& segments) {
    std::string out;
    char line[128];
    for (const auto& s : segments) {
        const int n = std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g\n", s.a.x, s.a.y,
                                    s.b.x, s.b.y);
        out.append(line, static_cast<std::size_t>(n));
    }
    return out;
}

}  // namespace dance
