#pragma once

#include <string>
#include <vector>

#include "seafarm/bbox.hpp"
#include "seafarm/image.hpp"

namespace seafarm {

/// An object patch cut out of a source image, with an alpha mask. Rectangle
/// crops carry an all-ones alpha; contour-labeled crops carry the supplied
/// mask.
struct ObjectCrop {
    ImageBuffer patch;          // H×W×C
    std::vector<double> alpha;  // H×W, [0,1]; at least one value > 0.5
    int category = -1;
    int source_image_id = -1;
    BBox source_box;

    bool alpha_matches_patch() const {
        return alpha.size() ==
               static_cast<std::size_t>(patch.height()) * patch.width();
    }
};

/// The pool of crops sampled during synthesis, one list per category index.
struct ObjectSet {
    std::vector<std::vector<ObjectCrop>> per_category;

    std::size_t total() const {
        std::size_t n = 0;
        for (const auto& v : per_category) n += v.size();
        return n;
    }
};

/// Crop rescaled (patch and alpha, bilinear) to the given integer size.
ObjectCrop rescale_crop(const ObjectCrop& crop, int out_h, int out_w);

}  // namespace seafarm
