#include "dance/cgr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dance/error.hpp"

namespace dance {

void CgrParams::validate() const {
    if (!(ratio > 0.0 && ratio < 1.0)) throw DataError("cgr: ratio must lie in (0,1)");
    if (!(start.x >= 0.0 && start.x <= 1.0 && start.y >= 0.0 && start.y <= 1.0)) {
        throw DataError("cgr: start must lie in the unit square");
    }
}

CgrWalk cgr_walk(std::string_view residues, const CgrParams& params, const CoordinateTable& table) {
    params.validate();
    CgrWalk walk;
    walk.start = params.start;
    walk.points.reserve(residues.size());
    Point p = params.start;
    for (char r : residues) {
        const Point c = table.lookup(r);
        if (params.ratio == 0.5) {
            p = {(p.x + c.x) * 0.5, (p.y + c.y) * 0.5};
        } else {
            p = {p.x + params.ratio * (c.x - p.x), p.y + params.ratio * (c.y - p.y)};
        }
        walk.points.push_back(p);
    }
    return walk;
}

std::uint64_t FcgrGrid::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

FcgrGrid fcgr_grid(const CgrWalk& walk, std::size_t resolution) {
    if (resolution < 1) throw DataError("fcgr: resolution must be at least 1");
    FcgrGrid grid;
    grid.resolution = resolution;
    grid.counts.assign(resolution * resolution, 0);
    const double r = static_cast<double>(resolution);
    auto bin = [&](double v) {
        const double f = std::floor(v * r);
        if (f < 0.0) return std::size_t{0};
        return std::min(static_cast<std::size_t>(f), resolution - 1);
    };
    for (const Point& p : walk.points) ++grid.counts[bin(p.y) * resolution + bin(p.x)];
    return grid;
}

std::string format_fcgr_csv(const FcgrGrid& grid) {
    std::string out;
    for (std::size_t iy = 0; iy < grid.resolution; ++iy) {
        for (std::size_t ix = 0; ix < grid.resolution; ++ix) {
            if (ix) out += ',';
            out += std::to_string(grid.cell(ix, iy));
        }
        out += '\n';
    }
    return out;
}

}  // namespace dance
