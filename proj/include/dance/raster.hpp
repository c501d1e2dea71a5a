#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dance/cgr.hpp"
#include "dance/kaleidoscope.hpp"

namespace dance {

inline constexpr std::uint8_t kBackground = 255;
inline constexpr std::uint8_t kInk = 0;

/// World window mapped onto a width x height pixel grid.
///
/// Columns: u maps to column floor((u - u_min) * width / (u_max - u_min)).
///
/// Rows are addressed by a signed lattice offset k from the horizontal axis
/// v = 0: k = round_half_away(v * (2K+1) / (v_max - v_min)) with
/// K = (height-1)/2, valid for |k| <= K. Offset k >= 0 lands on row
/// (height-1)/2 - k and k <= 0 on row height/2 - k; for even heights the axis
/// sits between the two middle rows and k = 0 inks both. Either way the row
/// flip r -> height-1-r maps k to -k, which makes v -> -v exact at pixel level.
struct Viewport {
    double u_min = -0.5;
    double u_max = 0.5;
    double v_min = -0.5;
    double v_max = 0.5;
    int width = 380;
    int height = 380;

    /// Throws DataError when the window is empty, not vertically symmetric,
    /// or the pixel size is not positive.
    void validate() const;

    double col_scale() const { return static_cast<double>(width) / (u_max - u_min); }
    double row_scale() const { return static_cast<double>(2 * axis_extent() + 1) / (v_max - v_min); }
    int axis_extent() const { return (height - 1) / 2; }

    std::int64_t column_of(double u) const;
    std::int64_t offset_of(double v) const;

    friend bool operator==(const Viewport&, const Viewport&) = default;
};

class RasterImage {
  public:
    RasterImage(int width, int height, std::uint8_t fill = kBackground);
    RasterImage(const Viewport& viewport, std::uint8_t fill = kBackground);

    int width() const { return width_; }
    int height() const { return height_; }
    const Viewport& viewport() const { return viewport_; }
    void set_viewport(const Viewport& vp);

    std::uint8_t at(int col, int row) const { return pixels_[static_cast<std::size_t>(row) * width_ + col]; }
    std::uint8_t& at(int col, int row) { return pixels_[static_cast<std::size_t>(row) * width_ + col]; }

    std::span<const std::uint8_t> pixels() const { return pixels_; }
    std::span<std::uint8_t> pixels() { return pixels_; }

    std::size_t ink_count() const;

    /// Pixels only; the viewport is metadata.
    bool same_pixels(const RasterImage& other) const;

  private:
    int width_;
    int height_;
    Viewport viewport_;
    std::vector<std::uint8_t> pixels_;
};

/// Row flip r -> height-1-r.
RasterImage flip_vertical(const RasterImage& image);

/// Bounding box of all endpoints, scaled about its center by (1 + pad_fraction),
/// made symmetric in v, then widened on one axis to the pixel aspect ratio.
/// A bounding box collapsed to a single point becomes a unit window around it.
Viewport fit_viewport(std::span<const Segment> segments, int width, int height,
                      double pad_fraction);

/// Integer line over lattice cells between the snapped endpoints, after
/// clipping to the window. Along the major axis every cell gets one pixel; the
/// minor coordinate is the exact rational line value rounded half away from
/// zero (rows) or half up (columns), which keeps v -> -v mirror exact.
void draw_segment(RasterImage& image, Point a, Point b, std::uint8_t ink = kInk);
void draw_point(RasterImage& image, Point p, std::uint8_t ink = kInk);

struct RasterOptions {
    int width = 380;
    int height = 380;
    double pad_fraction = 0.05;
    std::uint8_t ink = kInk;
};

/// Throws DataError for an empty segment set.
RasterImage rasterize(std::span<const Segment> segments, const RasterOptions& options = {});

/// CGR walk as dots. The unit square is centered on the origin and framed by
/// a fixed window (half-width 0.5 * (1 + pad_fraction)), so every walk shares
/// one frame.
RasterImage rasterize_walk(const CgrWalk& walk, const RasterOptions& options = {});

// Image files.
std::string encode_pgm(const RasterImage& image);
std::size_t write_pgm(const RasterImage& image, std::ostream& sink);
RasterImage decode_pgm(std::string_view bytes);

std::string encode_png(const RasterImage& image);
std::size_t write_png(const RasterImage& image, std::ostream& sink);
RasterImage decode_png(std::string_view bytes);

/// Dispatches on the extension (.pgm or .png).
void save_image(const RasterImage& image, const std::string& path);
RasterImage load_image(const std::string& path);

}  // namespace dance
