#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dance/alphabet.hpp"

namespace dance {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Residue -> (cx, cy) lookup. The default table assigns each of the 20
/// residues a distinct point on the quarter-unit lattice of [0,1]^2.
class CoordinateTable {
  public:
    /// Entries indexed by residue rank (alphabetical one-letter order).
    /// Throws DataError when a coordinate leaves [0,1] or two residues share a point.
    explicit CoordinateTable(const std::array<Point, kAlphabetSize>& by_rank);

    static const CoordinateTable& standard();

    /// Throws DataError for a residue outside the 20-letter alphabet.
    Point lookup(char residue) const;
    Point at_rank(std::size_t rank) const { return points_[rank]; }

    /// Copy with the two residues' points exchanged.
    CoordinateTable with_swapped(char a, char b) const;

  private:
    std::array<Point, kAlphabetSize> points_;
};

inline Point coordinate_rule(char residue, const CoordinateTable& table = CoordinateTable::standard()) {
    return table.lookup(residue);
}

inline constexpr int kMaxDepth = 12;

struct KaleidoscopeParams {
    int depth = 4;
    Point pos{0.0, 0.0};
    double angle = 0.0;  // radians
    double scale = 10.0;
    /// Skip recursive calls whose (pos, depth) was already expanded. Their
    /// output would be an exact repeat, so the rasterized image is unchanged
    /// while the segment multiset loses duplicates.
    bool memoize = false;

    /// Throws DataError on scale <= 0, non-finite values, or depth > kMaxDepth.
    void validate() const;
};

struct Segment {
    Point a;  // anchor endpoint, (+-x, +-y)
    Point b;  // table endpoint, (cx, +-cy)

    friend bool operator==(const Segment&, const Segment&) = default;
};

using SegmentSet = std::vector<Segment>;

/// Recursive kaleidoscope construction over the full residue string.
///
/// A call with depth <= 0 emits nothing. Otherwise, starting from `pos`, each
/// residue advances the anchor by (scale cos angle, scale sin angle), looks up
/// (cx, cy), emits
///     (x, y)-(cx, cy), (x, y)-(cx, -cy), (-x, -y)-(cx, cy), (-x, -y)-(cx, -cy)
/// and recurses with depth-1 at (x, y), (x, -y), (-x, y), (-x, -y). The local
/// depth is then decremented, so iteration i recurses with depth - 1 - i.
///
/// Residues are not re-validated here beyond the table lookup.
SegmentSet generate_kaleidoscope(std::string_view residues, const KaleidoscopeParams& params,
                                 const CoordinateTable& table = CoordinateTable::standard());

/// Same output, bit for bit, computed with the top-level loop iterations
/// fanned out over OpenMP threads and concatenated in emission order.
/// Falls back to the serial path when params.memoize is set.
SegmentSet generate_kaleidoscope_omp(std::string_view residues, const KaleidoscopeParams& params,
                                     const CoordinateTable& table = CoordinateTable::standard());

/// Closed count of segments emitted for a sequence of `length` residues.
std::uint64_t segment_count_oracle(std::uint64_t length, int depth);

/// "x1 y1 x2 y2" per line with 17 significant digits.
std::string format_segments(const SegmentSet& segments);

}  // namespace dance
