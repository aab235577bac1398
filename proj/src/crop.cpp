#include "seafarm/crop.hpp"

namespace seafarm {

ObjectCrop rescale_crop(const ObjectCrop& crop, int out_h, int out_w) {
    ObjectCrop out;
    out.patch = bilinear_resize(crop.patch, out_h, out_w);
    out.alpha = bilinear_resize_plane(crop.alpha, crop.patch.height(), crop.patch.width(),
                                      out_h, out_w);
    out.category = crop.category;
    out.source_image_id = crop.source_image_id;
    out.source_box = crop.source_box;
    return out;
}

}  // namespace seafarm
