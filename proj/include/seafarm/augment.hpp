#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seafarm/image.hpp"
#include "seafarm/manifest.hpp"
#include "seafarm/rng.hpp"

namespace seafarm::augment {

/// Method selector plus every knob the comparison harness exposes. Defaults
/// follow each method's original publication and are all configurable.
struct AugmentSpec {
    enum class Method { Baseline, Cutout, RErase, GridMask, HaS, Mixup };
    Method method = Method::Baseline;

    // baseline
    double flip_prob = 0.5;
    double scale_lo = 0.6, scale_hi = 1.3;
    std::optional<std::pair<int, int>> crop_size;  // (h, w); absent = no crop
    std::vector<double> channel_means;             // zero-mean normalization
    double min_box_area_ratio = 0.25;              // survival rule under cropping

    // cutout: square side as a fraction of min(h, w); 0 = default 1/4
    double cutout_side_fraction = 0.25;

    // random erase
    double erase_area_lo = 0.02, erase_area_hi = 0.33;
    double erase_aspect_lo = 0.3, erase_aspect_hi = 3.3;

    // gridmask: unit length in pixels (0 = min(h, w)/4) and dropped ratio
    int grid_unit = 0;
    double grid_ratio = 0.4;

    // hide-and-seek
    int has_grid = 4;
    double has_hide_prob = 0.5;

    // mixup coefficient distribution Beta(alpha, alpha)
    double mixup_alpha = 1.5;

    RngConfig rng;
};

struct BaselineResult {
    ImageBuffer image;
    std::vector<Annotation> annotations;
    bool flipped = false;
    double scale = 1.0;
    int crop_x = 0, crop_y = 0;
};

/// Horizontal flip (probability spec.flip_prob), uniform scale in the spec
/// range, random crop to spec.crop_size (boxes clipped; a box is dropped
/// when its surviving area falls under min_box_area_ratio of the original),
/// then per-channel mean subtraction. Throws when the crop exceeds the
/// scaled image.
BaselineResult baseline_augment(const ImageBuffer& image,
                                const std::vector<Annotation>& annotations,
                                const AugmentSpec& spec, Rng& rng);

/// Zeroes one square region, clipped at the borders.
ImageBuffer cutout(const ImageBuffer& image, const AugmentSpec& spec, Rng& rng);

/// Fills one random-area, random-aspect rectangle with uniform noise.
ImageBuffer random_erase(const ImageBuffer& image, const AugmentSpec& spec, Rng& rng);

/// Zeroes the periodic grid pattern: within every unit d, pixels whose
/// in-unit coordinate (after the random offsets) falls below round(r·d) in
/// either axis are dropped, keeping a (d−round(r·d))² square per period.
ImageBuffer gridmask(const ImageBuffer& image, const AugmentSpec& spec, Rng& rng);

/// Partitions into has_grid × has_grid patches and zeroes each independently
/// with probability has_hide_prob.
ImageBuffer hide_and_seek(const ImageBuffer& image, const AugmentSpec& spec, Rng& rng);

struct MixupResult {
    ImageBuffer image;
    std::vector<Annotation> annotations;  // union, each tagged with its weight
};

/// pixels = λ·a + (1−λ)·b; annotations are the union of both lists with
/// weights λ and 1−λ respectively.
MixupResult mixup(const ImageBuffer& image_a, const std::vector<Annotation>& annotations_a,
                  const ImageBuffer& image_b, const std::vector<Annotation>& annotations_b,
                  double lambda);

/// Beta(alpha, alpha) draw for the mixup coefficient.
double sample_mixup_lambda(double alpha, Rng& rng);

}  // namespace seafarm::augment
