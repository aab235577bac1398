#pragma once

#include <algorithm>

namespace seafarm {

/// Axis-aligned box with continuous (sub-pixel) coordinates plus a category
/// index into the owning manifest's category list. Rasterization to integer
/// pixels happens only at compositing time.
struct BBox {
    double x = 0.0;  ///< top-left
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
    int category = -1;

    double area() const { return w * h; }
    double cx() const { return x + w / 2.0; }
    double cy() const { return y + h / 2.0; }
};

/// Intersection-over-union of two boxes, in [0, 1]. Degenerate boxes give 0.
inline double iou(const BBox& a, const BBox& b) {
    const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace seafarm
