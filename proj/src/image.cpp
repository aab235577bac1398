#include "seafarm/image.hpp"

#include <algorithm>
#include <cmath>

namespace seafarm {

ImageBuffer ImageBuffer::crop_rect(int x, int y, int w, int h) const {
    if (x < 0 || y < 0 || w <= 0 || h <= 0 || x + w > width_ || y + h > height_)
        throw std::out_of_range("crop_rect: rectangle out of image bounds");
    ImageBuffer out(h, w, channels_);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            for (int ch = 0; ch < channels_; ++ch)
                out.at(r, c, ch) = at(y + r, x + c, ch);
    return out;
}

void ImageBuffer::paste_rect(const ImageBuffer& src, int x, int y) {
    if (src.channels_ != channels_ || x < 0 || y < 0 ||
        x + src.width_ > width_ || y + src.height_ > height_)
        throw std::out_of_range("paste_rect: rectangle out of image bounds");
    for (int r = 0; r < src.height_; ++r)
        for (int c = 0; c < src.width_; ++c)
            for (int ch = 0; ch < channels_; ++ch)
                at(y + r, x + c, ch) = src.at(r, c, ch);
}

void ImageBuffer::clamp01() {
    for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
}

std::vector<double> bilinear_resize_plane(const std::vector<double>& src, int h, int w,
                                          int out_h, int out_w) {
    if (h <= 0 || w <= 0 || out_h <= 0 || out_w <= 0)
        throw std::invalid_argument("bilinear_resize_plane: non-positive dims");
    std::vector<double> out(static_cast<std::size_t>(out_h) * out_w);
    const double sy = static_cast<double>(h) / out_h;
    const double sx = static_cast<double>(w) / out_w;
    for (int oy = 0; oy < out_h; ++oy) {
        // Pixel-center alignment: output center maps to input center.
        double fy = (oy + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(h - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, h - 1);
        const double ty = fy - y0;
        for (int ox = 0; ox < out_w; ++ox) {
            double fx = (ox + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(w - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, w - 1);
            const double tx = fx - x0;
            const double a = src[static_cast<std::size_t>(y0) * w + x0];
            const double b = src[static_cast<std::size_t>(y0) * w + x1];
            const double c = src[static_cast<std::size_t>(y1) * w + x0];
            const double d = src[static_cast<std::size_t>(y1) * w + x1];
            out[static_cast<std::size_t>(oy) * out_w + ox] =
                (1 - ty) * ((1 - tx) * a + tx * b) + ty * ((1 - tx) * c + tx * d);
        }
    }
    return out;
}

ImageBuffer bilinear_resize(const ImageBuffer& src, int out_h, int out_w) {
    ImageBuffer out(out_h, out_w, src.channels());
    const int ch = src.channels();
    // Resample per channel on extracted planes.
    std::vector<double> plane(static_cast<std::size_t>(src.height()) * src.width());
    for (int c = 0; c < ch; ++c) {
        for (int y = 0; y < src.height(); ++y)
            for (int x = 0; x < src.width(); ++x)
                plane[static_cast<std::size_t>(y) * src.width() + x] = src.at(y, x, c);
        std::vector<double> res = bilinear_resize_plane(plane, src.height(), src.width(),
                                                        out_h, out_w);
        for (int y = 0; y < out_h; ++y)
            for (int x = 0; x < out_w; ++x)
                out.at(y, x, c) = res[static_cast<std::size_t>(y) * out_w + x];
    }
    return out;
}

}  // namespace seafarm
