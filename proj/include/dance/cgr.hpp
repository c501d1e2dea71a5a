#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dance/kaleidoscope.hpp"

namespace dance {

struct CgrParams {
    double ratio = 0.5;           // fraction of the way moved toward the residue's point, in (0,1)
    Point start{0.5, 0.5};

    void validate() const;
};

struct CgrWalk {
    Point start;
    std::vector<Point> points;  // one per residue, p_1..p_L
};

/// p_0 = start; p_i = p_{i-1} + ratio * (c(a_i) - p_{i-1}).
CgrWalk cgr_walk(std::string_view residues, const CgrParams& params = {},
                 const CoordinateTable& table = CoordinateTable::standard());

/// Frequency grid. counts is row-major by y: counts[iy * resolution + ix],
/// with cell (0,0) the low-x, low-y corner.
struct FcgrGrid {
    std::size_t resolution = 1;
    std::vector<std::uint64_t> counts;

    std::uint64_t cell(std::size_t ix, std::size_t iy) const { return counts[iy * resolution + ix]; }
    std::uint64_t total() const;
};

FcgrGrid fcgr_grid(const CgrWalk& walk, std::size_t resolution);

/// One line per grid row (iy = 0 first), comma separated.
std::string format_fcgr_csv(const FcgrGrid& grid);

}  // namespace dance
