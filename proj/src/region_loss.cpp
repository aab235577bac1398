#include "seafarm/region_loss.hpp"

#include <cmath>
#include <stdexcept>

namespace seafarm::loss {

RegionMask build_region_mask(const std::vector<BBox>& boxes, int height, int width) {
    if (height <= 0 || width <= 0)
        throw std::invalid_argument("build_region_mask: non-positive dims");
    RegionMask mask;
    mask.height = height;
    mask.width = width;
    mask.weights.assign(static_cast<std::size_t>(height) * width, 0.1);
    for (const BBox& b : boxes) {
        // Pixel (y, x) has center (x+0.5, y+0.5); covered when the center
        // falls in the half-open box.
        const int y0 = std::max(0, static_cast<int>(std::ceil(b.y - 0.5)));
        const int y1 = std::min(height - 1, static_cast<int>(std::ceil(b.y + b.h - 0.5)) - 1);
        const int x0 = std::max(0, static_cast<int>(std::ceil(b.x - 0.5)));
        const int x1 = std::min(width - 1, static_cast<int>(std::ceil(b.x + b.w - 0.5)) - 1);
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                mask.weights[static_cast<std::size_t>(y) * width + x] = 100.0;
    }
    return mask;
}

double region_loss(const ImageBuffer& pred, const ImageBuffer& target, const RegionMask& mask,
                   Norm norm) {
    if (!pred.same_shape(target))
        throw std::invalid_argument("region_loss: pred/target dims mismatch");
    if (mask.height != pred.height() || mask.width != pred.width())
        throw std::invalid_argument("region_loss: mask dims mismatch");

    const int h = pred.height(), w = pred.width(), nch = pred.channels();
    double acc = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double m = mask.at(y, x);
            for (int c = 0; c < nch; ++c) {
                const double d = std::abs(pred.at(y, x, c) - target.at(y, x, c));
                acc += (norm == Norm::L1 ? d : d * d) * m;
            }
        }
    return acc / (static_cast<double>(nch) * h * w);
}

LossBreakdown dr_total(double content, double adversarial, double region, double lambda1) {
    if (!std::isfinite(content) || !std::isfinite(adversarial) || !std::isfinite(region) ||
        !std::isfinite(lambda1))
        throw std::invalid_argument("dr_total: non-finite input");
    LossBreakdown b;
    b.content = content;
    b.adversarial = adversarial;
    b.region = region;
    b.lambda1 = lambda1;
    b.total = content + lambda1 * adversarial + region;
    return b;
}

}  // namespace seafarm::loss
