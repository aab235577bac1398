#pragma once

#include <vector>

#include "seafarm/bbox.hpp"
#include "seafarm/image.hpp"

namespace seafarm::loss {

/// Box-driven weight plane: 100 on every pixel covered by at least one box,
/// 0.1 elsewhere. Broadcast across channels when applied.
struct RegionMask {
    int height = 0, width = 0;
    std::vector<double> weights;  // H×W, values in {0.1, 100}

    double at(int y, int x) const {
        return weights[static_cast<std::size_t>(y) * width + x];
    }
};

enum class Norm { L1, L2 };

struct LossBreakdown {
    double content = 0.0;
    double adversarial = 0.0;
    double region = 0.0;
    double lambda1 = 1e-4;
    double total = 0.0;
};

/// Boxes are rasterized by pixel-center containment; an empty list gives an
/// all-0.1 mask.
RegionMask build_region_mask(const std::vector<BBox>& boxes, int height, int width);

/// (1 / (c·h·w)) · Σ |pred − target| · weight with the mask broadcast across
/// channels. Norm::L2 squares the differences instead.
double region_loss(const ImageBuffer& pred, const ImageBuffer& target, const RegionMask& mask,
                   Norm norm = Norm::L1);

/// total = content + λ₁ · adversarial + region. Throws on non-finite input.
LossBreakdown dr_total(double content, double adversarial, double region,
                       double lambda1 = 1e-4);

}  // namespace seafarm::loss
