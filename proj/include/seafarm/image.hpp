#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace seafarm {

/// H×W×C row-major raster of double samples, nominally in [0, 1].
/// The universal pixel carrier for backgrounds, crops, and augment outputs.
/// Zero-mean normalization may legally push samples outside [0, 1]; file
/// round-trips re-establish the range.
class ImageBuffer {
public:
    ImageBuffer() = default;
    ImageBuffer(int height, int width, int channels, double fill = 0.0)
        : height_(height), width_(width), channels_(channels),
          data_(static_cast<std::size_t>(height) * width * channels, fill) {
        if (height <= 0 || width <= 0 || (channels != 1 && channels != 3))
            throw std::invalid_argument("ImageBuffer: dims must be positive, channels 1 or 3");
    }

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    bool empty() const { return data_.empty(); }

    double& at(int y, int x, int c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    double at(int y, int x, int c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const ImageBuffer& o) const {
        return height_ == o.height_ && width_ == o.width_ && channels_ == o.channels_;
    }

    /// Copy of the axis-aligned rectangle [x, x+w) × [y, y+h). Must be in bounds.
    ImageBuffer crop_rect(int x, int y, int w, int h) const;

    /// Write `src` back at (x, y). Dims must fit.
    void paste_rect(const ImageBuffer& src, int x, int y);

    void clamp01();

private:
    int height_ = 0, width_ = 0, channels_ = 0;
    std::vector<double> data_;
};

/// Bilinear resample to (out_h, out_w). Also used for single-channel masks.
ImageBuffer bilinear_resize(const ImageBuffer& src, int out_h, int out_w);

/// Bilinear resample of a bare H×W plane.
std::vector<double> bilinear_resize_plane(const std::vector<double>& src, int h, int w,
                                          int out_h, int out_w);

}  // namespace seafarm
