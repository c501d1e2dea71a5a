#include <cctype>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <png.h>

#include "dance/error.hpp"
#include "dance/raster.hpp"

namespace dance {

std::string encode_pgm(const RasterImage& image) {
    std::string out = "P5\n" + std::to_string(image.width()) + " " +
                      std::to_string(image.height()) + "\n255\n";
    const auto px = image.pixels();
    out.append(reinterpret_cast<const char*>(px.data()), px.size());
    return out;
}

std::size_t write_pgm(const RasterImage& image, std::ostream& sink) {
    const std::string bytes = encode_pgm(image);
    sink.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!sink) throw DataError("I/O error writing PGM");
    return bytes.size();
}

RasterImage decode_pgm(std::string_view bytes) {
    std::size_t pos = 0;
    auto skip_space = [&]() {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() {
        skip_space();
        if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            throw DataError("PGM: malformed header");
        }
        long v = 0;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            v = v * 10 + (bytes[pos++] - '0');
            if (v > 1'000'000) throw DataError("PGM: dimension out of range");
        }
        return static_cast<int>(v);
    };

    if (bytes.substr(0, 2) != "P5") throw DataError("PGM: expected binary P5 magic");
    pos = 2;
    const int w = read_int();
    const int h = read_int();
    const int maxval = read_int();
    if (maxval != 255) throw DataError("PGM: only maxval 255 is supported");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw DataError("PGM: malformed header");
    }
    ++pos;
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() - pos != n) throw DataError("PGM: payload size does not match dimensions");
    RasterImage image(w, h);
    std::memcpy(image.pixels().data(), bytes.data() + pos, n);
    return image;
}

namespace {

void png_append(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), length);
}

void png_flush_noop(png_structp) {}

struct PngReadSource {
    std::string_view bytes;
    std::size_t pos = 0;
};

void png_consume(png_structp png, png_bytep data, png_size_t length) {
    auto* src = static_cast<PngReadSource*>(png_get_io_ptr(png));
    if (src->bytes.size() - src->pos < length) png_error(png, "truncated PNG");
    std::memcpy(data, src->bytes.data() + src->pos, length);
    src->pos += length;
}

}  // namespace

std::string encode_png(const RasterImage& image) {
    std::string out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("PNG: cannot create writer");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("PNG: encoding failed");
    }
    png_set_write_fn(png, &out, png_append, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
                 static_cast<png_uint_32>(image.height()), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const auto px = image.pixels();
    for (int r = 0; r < image.height(); ++r) {
        png_write_row(png, const_cast<png_bytep>(px.data() + static_cast<std::size_t>(r) * image.width()));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

std::size_t write_png(const RasterImage& image, std::ostream& sink) {
    const std::string bytes = encode_png(image);
    sink.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!sink) throw DataError("I/O error writing PNG");
    return bytes.size();
}

RasterImage decode_png(std::string_view bytes) {
    if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0) {
        throw DataError("PNG: bad signature");
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("PNG: cannot create reader");
    png_infop info = png_create_info_struct(png);
    PngReadSource src{bytes, 0};
    std::vector<std::uint8_t> pixels;
    png_uint_32 w = 0;
    png_uint_32 h = 0;
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("PNG: decoding failed");
    }
    png_set_read_fn(png, &src, png_consume);
    png_read_info(png, info);
    w = png_get_image_width(png, info);
    h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);
    if (png_get_rowbytes(png, info) != w) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("PNG: unsupported pixel layout");
    }
    pixels.resize(static_cast<std::size_t>(w) * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 r = 0; r < h; ++r) rows[r] = pixels.data() + static_cast<std::size_t>(r) * w;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    RasterImage image(static_cast<int>(w), static_cast<int>(h));
    std::memcpy(image.pixels().data(), pixels.data(), pixels.size());
    return image;
}

void save_image(const RasterImage& image, const std::string& path) {
    const auto ext = std::filesystem::path(path).extension().string();
    std::string bytes;
    if (ext == ".pgm") {
        bytes = encode_pgm(image);
    } else if (ext == ".png") {
        bytes = encode_png(image);
    } else {
        throw DataError("unsupported image extension '" + ext + "'");
    }
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("I/O error writing '" + path + "'");
}

RasterImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open image '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    const auto ext = std::filesystem::path(path).extension().string();
    if (ext == ".png") return decode_png(bytes);
    return decode_pgm(bytes);
}

}  // namespace dance
