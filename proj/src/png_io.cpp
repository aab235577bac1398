#include "seafarm/png_io.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include <png.h>

namespace seafarm {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::uint8_t quantize(double v) {
    v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

}  // namespace

PngImage read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open PNG: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("failed to decode PNG: " + path);
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte bit_depth = png_get_bit_depth(png, info);

    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int nch = png_get_channels(png, info);

    std::vector<std::uint8_t> raw(static_cast<std::size_t>(height) * width * nch);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = raw.data() + static_cast<std::size_t>(y) * width * nch;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    const bool has_alpha = (nch == 2 || nch == 4);
    const int color_ch = has_alpha ? nch - 1 : nch;
    if (color_ch != 1 && color_ch != 3)
        throw std::runtime_error("unsupported PNG channel layout in " + path);

    PngImage out;
    out.pixels = ImageBuffer(height, width, color_ch);
    if (has_alpha)
        out.alpha = std::vector<double>(static_cast<std::size_t>(height) * width);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::uint8_t* px = raw.data() + (static_cast<std::size_t>(y) * width + x) * nch;
            for (int c = 0; c < color_ch; ++c)
                out.pixels.at(y, x, c) = px[c] / 255.0;
            if (has_alpha)
                (*out.alpha)[static_cast<std::size_t>(y) * width + x] = px[color_ch] / 255.0;
        }
    }
    return out;
}

void write_png(const std::string& path, const ImageBuffer& image,
               const std::vector<double>* alpha) {
    if (image.empty()) throw std::invalid_argument("write_png: empty image");
    if (alpha && alpha->size() !=
                     static_cast<std::size_t>(image.height()) * image.width())
        throw std::invalid_argument("write_png: alpha dims mismatch");

    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("cannot create PNG: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("failed to encode PNG: " + path);
    }

    png_init_io(png, fp.get());
    // Fixed settings: byte-level reproducibility is part of the contract.
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_NONE);

    const int h = image.height(), w = image.width();
    const int color_ch = image.channels();
    const int nch = color_ch + (alpha ? 1 : 0);
    int color_type;
    if (color_ch == 1)
        color_type = alpha ? PNG_COLOR_TYPE_GRAY_ALPHA : PNG_COLOR_TYPE_GRAY;
    else
        color_type = alpha ? PNG_COLOR_TYPE_RGB_ALPHA : PNG_COLOR_TYPE_RGB;

    png_set_IHDR(png, info, w, h, 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * nch);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < color_ch; ++c)
                row[static_cast<std::size_t>(x) * nch + c] = quantize(image.at(y, x, c));
            if (alpha)
                row[static_cast<std::size_t>(x) * nch + color_ch] =
                    quantize((*alpha)[static_cast<std::size_t>(y) * w + x]);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace seafarm
