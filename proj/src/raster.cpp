#include "dance/raster.hpp"

#include <algorithm>
#include <cmath>

#include "dance/error.hpp"

namespace dance {

namespace {

std::int64_t floor_div(std::int64_t n, std::int64_t d) {
    // d > 0
    std::int64_t q = n / d;
    if ((n % d != 0) && (n < 0)) --q;
    return q;
}

// n / d rounded half away from zero, d > 0.
std::int64_t round_half_away(std::int64_t n, std::int64_t d) {
    const std::int64_t mag = floor_div(2 * (n < 0 ? -n : n) + d, 2 * d);
    return n < 0 ? -mag : mag;
}

// n / d rounded half up, d > 0.
std::int64_t round_half_up(std::int64_t n, std::int64_t d) { return floor_div(2 * n + d, 2 * d); }

std::int64_t to_lattice(double v) {
    constexpr double kLimit = 1e15;
    return static_cast<std::int64_t>(std::clamp(v, -kLimit, kLimit));
}

void plot(RasterImage& image, std::int64_t col, std::int64_t k, std::uint8_t ink) {
    const int extent = image.viewport().axis_extent();
    if (col < 0 || col >= image.width() || k < -extent || k > extent) return;
    const int c = static_cast<int>(col);
    const int h = image.height();
    if (k >= 0) image.at(c, (h - 1) / 2 - static_cast<int>(k)) = ink;
    if (k <= 0) image.at(c, h / 2 - static_cast<int>(k)) = ink;
}

// Liang-Barsky against [u_lo,u_hi] x [-v_hi,v_hi]. Returns false when the
// segment misses the window entirely.
bool clip(Point& a, Point& b, double u_lo, double u_hi, double v_hi) {
    const double du = b.x - a.x;
    const double dv = b.y - a.y;
    double t0 = 0.0;
    double t1 = 1.0;
    const double p[4] = {-du, du, -dv, dv};
    const double q[4] = {a.x - u_lo, u_hi - a.x, a.y + v_hi, v_hi - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
            continue;
        }
        const double r = q[i] / p[i];
        if (p[i] < 0.0) {
            t0 = std::max(t0, r);
        } else {
            t1 = std::min(t1, r);
        }
    }
    if (t0 > t1) return false;
    const Point start = a;
    if (t0 > 0.0) a = {start.x + t0 * du, start.y + t0 * dv};
    if (t1 < 1.0) b = {start.x + t1 * du, start.y + t1 * dv};
    return true;
}

}  // namespace

void Viewport::validate() const {
    if (width < 1 || height < 1) throw DataError("viewport: pixel size must be positive");
    if (!(u_min < u_max) || !(v_min < v_max) || !std::isfinite(u_max - u_min) ||
        !std::isfinite(v_max - v_min)) {
        throw DataError("viewport: empty or non-finite window");
    }
    if (v_min != -v_max) throw DataError("viewport: window must be symmetric about v = 0");
}

std::int64_t Viewport::column_of(double u) const {
    return to_lattice(std::floor((u - u_min) * col_scale()));
}

std::int64_t Viewport::offset_of(double v) const {
    const double t = v * row_scale();
    const double mag = std::floor(std::fabs(t) + 0.5);
    return to_lattice(t < 0.0 ? -mag : mag);
}

RasterImage::RasterImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1) throw DataError("image size must be positive");
    viewport_.width = width;
    viewport_.height = height;
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

RasterImage::RasterImage(const Viewport& viewport, std::uint8_t fill)
    : RasterImage(viewport.width, viewport.height, fill) {
    set_viewport(viewport);
}

void RasterImage::set_viewport(const Viewport& vp) {
    vp.validate();
    if (vp.width != width_ || vp.height != height_) {
        throw DataError("viewport pixel size does not match the image");
    }
    viewport_ = vp;
}

std::size_t RasterImage::ink_count() const {
    return static_cast<std::size_t>(
        std::count_if(pixels_.begin(), pixels_.end(), [](std::uint8_t p) { return p != kBackground; }));
}

bool RasterImage::same_pixels(const RasterImage& other) const {
    return width_ == other.width_ && height_ == other.height_ && pixels_ == other.pixels_;
}

RasterImage flip_vertical(const RasterImage& image) {
    RasterImage out(image.width(), image.height());
    out.set_viewport(image.viewport());
    for (int r = 0; r < image.height(); ++r) {
        for (int c = 0; c < image.width(); ++c) out.at(c, image.height() - 1 - r) = image.at(c, r);
    }
    return out;
}

Viewport fit_viewport(std::span<const Segment> segments, int width, int height,
                      double pad_fraction) {
    if (segments.empty()) throw DataError("cannot fit a viewport to an empty segment set");
    if (!(pad_fraction >= 0.0)) throw DataError("pad_fraction must be nonnegative");
    if (width < 1 || height < 1) throw DataError("image size must be positive");

    double u_lo = segments.front().a.x, u_hi = u_lo;
    double v_lo = segments.front().a.y, v_hi = v_lo;
    for (const Segment& s : segments) {
        for (const Point& p : {s.a, s.b}) {
            u_lo = std::min(u_lo, p.x);
            u_hi = std::max(u_hi, p.x);
            v_lo = std::min(v_lo, p.y);
            v_hi = std::max(v_hi, p.y);
        }
    }

    double u_center = 0.5 * (u_lo + u_hi);
    double u_half;
    double v_half;
    if (u_lo == u_hi && v_lo == v_hi) {
        u_half = 0.5;
        v_half = std::fabs(v_lo) + 0.5;
    } else {
        u_half = 0.5 * (u_hi - u_lo) * (1.0 + pad_fraction);
        const double v_center = 0.5 * (v_lo + v_hi);
        const double v_pad_half = 0.5 * (v_hi - v_lo) * (1.0 + pad_fraction);
        v_half = std::max(std::fabs(v_center - v_pad_half), std::fabs(v_center + v_pad_half));
    }

    // Widen, never shrink, to the pixel aspect ratio.
    const double w = static_cast<double>(width);
    const double h = static_cast<double>(height);
    if (u_half * h < v_half * w) {
        u_half = v_half * w / h;
    } else if (u_half * h > v_half * w) {
        v_half = u_half * h / w;
    }

    Viewport vp;
    vp.u_min = u_center - u_half;
    vp.u_max = u_center + u_half;
    vp.v_max = v_half;
    vp.v_min = -v_half;
    vp.width = width;
    vp.height = height;
    vp.validate();
    return vp;
}

void draw_segment(RasterImage& image, Point a, Point b, std::uint8_t ink) {
    const Viewport& vp = image.viewport();
    const double margin_u = 2.0 / vp.col_scale();
    const double margin_v = 2.0 / vp.row_scale();
    const double u_lo = vp.u_min - margin_u;
    const double u_hi = vp.u_max + margin_u;
    const double v_hi = vp.v_max + margin_v;
    auto inside = [&](Point p) { return p.x >= u_lo && p.x <= u_hi && p.y >= -v_hi && p.y <= v_hi; };
    if (!inside(a) || !inside(b)) {
        if (!clip(a, b, u_lo, u_hi, v_hi)) return;
    }

    std::int64_t c0 = vp.column_of(a.x), k0 = vp.offset_of(a.y);
    std::int64_t c1 = vp.column_of(b.x), k1 = vp.offset_of(b.y);
    std::int64_t dc = c1 - c0;
    std::int64_t dk = k1 - k0;

    if (std::llabs(dc) >= std::llabs(dk)) {
        if (dc == 0) {
            plot(image, c0, k0, ink);
            return;
        }
        if (dc < 0) {
            std::swap(c0, c1);
            std::swap(k0, k1);
            dc = -dc;
            dk = -dk;
        }
        const std::int64_t first = std::max<std::int64_t>(c0, 0);
        const std::int64_t last = std::min<std::int64_t>(c1, image.width() - 1);
        for (std::int64_t c = first; c <= last; ++c) {
            plot(image, c, round_half_away(k0 * dc + (c - c0) * dk, dc), ink);
        }
    } else {
        if (dk < 0) {
            std::swap(c0, c1);
            std::swap(k0, k1);
            dc = -dc;
            dk = -dk;
        }
        const std::int64_t extent = vp.axis_extent();
        const std::int64_t first = std::max<std::int64_t>(k0, -extent);
        const std::int64_t last = std::min<std::int64_t>(k1, extent);
        for (std::int64_t k = first; k <= last; ++k) {
            plot(image, round_half_up(c0 * dk + (k - k0) * dc, dk), k, ink);
        }
    }
}

void draw_point(RasterImage& image, Point p, std::uint8_t ink) {
    const Viewport& vp = image.viewport();
    plot(image, vp.column_of(p.x), vp.offset_of(p.y), ink);
}

RasterImage rasterize(std::span<const Segment> segments, const RasterOptions& options) {
    const Viewport vp = fit_viewport(segments, options.width, options.height, options.pad_fraction);
    RasterImage image(vp);
    for (const Segment& s : segments) draw_segment(image, s.a, s.b, options.ink);
    return image;
}

RasterImage rasterize_walk(const CgrWalk& walk, const RasterOptions& options) {
    Viewport vp;
    vp.width = options.width;
    vp.height = options.height;
    const double w = static_cast<double>(options.width);
    const double h = static_cast<double>(options.height);
    // Unit square centered at the origin, padded, widened to the pixel aspect ratio.
    const double half = 0.5 * (1.0 + options.pad_fraction);
    vp.u_min = -half * std::max(1.0, w / h);
    vp.u_max = -vp.u_min;
    vp.v_max = half * std::max(1.0, h / w);
    vp.v_min = -vp.v_max;
    RasterImage image(vp);
    for (const Point& p : walk.points) draw_point(image, {p.x - 0.5, p.y - 0.5}, options.ink);
    return image;
}

}  // namespace dance
