#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seafarm/crop.hpp"
#include "seafarm/image.hpp"
#include "seafarm/manifest.hpp"
#include "seafarm/poisson.hpp"
#include "seafarm/rng.hpp"

namespace seafarm::compositor {

/// Knobs for the same-category-vicinity placement rule.
struct PlacementPolicy {
    /// Placed center must lie within factor × (anchor box diagonal) of some
    /// same-category anchor center, when an anchor exists.
    double vicinity_factor = 1.5;
    double max_overlap_iou = 0.3;
    double scale_lo = 0.8;
    double scale_hi = 1.25;
    int max_attempts = 50;
};

/// Per-image embed-count distribution and dataset-level targets.
/// All vectors are indexed by category; empty per-image vectors mean
/// "0 min / unbounded max" for every category.
struct SynthesisSpec {
    std::vector<int> per_image_min;
    std::vector<int> per_image_max;
    std::vector<long long> targets;  ///< final per-category totals (generate_dataset)
    RngConfig rng;
};

struct Placement {
    int x = 0, y = 0, w = 0, h = 0;  // rasterized, image coordinates
    double scale = 1.0;
    bool anchored = false;            // vicinity rule applied
    double anchor_cx = 0.0, anchor_cy = 0.0, anchor_radius = 0.0;
};

struct PlacementOutcome {
    std::optional<Placement> placement;
    std::string failure;  // set when no placement was found
    int attempts = 0;
};

struct EmbedRecord {
    int category = -1;
    BBox box;
    double scale = 1.0;
    int attempts = 0;
    bool anchored = false;
    double anchor_cx = 0.0, anchor_cy = 0.0, anchor_radius = 0.0;
};

struct FailureRecord {
    int category = -1;
    std::string reason;
};

struct SynthesisResult {
    ImageBuffer image;
    std::vector<Annotation> annotations;  // input annotations + one per embed
    std::vector<EmbedRecord> embedded;
    std::vector<FailureRecord> failures;
};

/// Samples `per_category_counts[c]` crops per category without replacement.
/// Only annotations whose rasterized box is at least 3×3 are eligible (a
/// smaller patch has no clone interior). Throws when a category has fewer
/// eligible instances than requested, naming the category and both counts.
/// Contour masks referenced by `mask_file` are loaded relative to
/// `mask_root`; rectangle crops get an all-ones alpha.
ObjectSet build_object_set(const DatasetManifest& manifest,
                           const std::map<int, ImageBuffer>& images,
                           const std::vector<int>& per_category_counts, Rng& rng,
                           const std::string& mask_root = "");

/// One placement draw for `crop` against the current annotation set.
/// Scale is uniform in the policy jitter range; the placed center stays
/// within the vicinity radius of a same-category anchor when one exists,
/// otherwise position is uniform over the valid area. Every candidate keeps
/// IoU with all existing boxes at or below the policy cap. After
/// max_attempts without success the outcome reports a placement failure.
PlacementOutcome propose_placement(const std::vector<BBox>& existing, const ObjectCrop& crop,
                                   int image_width, int image_height,
                                   const PlacementPolicy& policy, Rng& rng);

/// Embeds exactly `embed_counts[c]` objects per category (minus any placement
/// failures, which are reported, never silently dropped). Each embed samples
/// a crop uniformly with replacement, rescales it bilinearly, and applies
/// the gradient-domain clone.
SynthesisResult synthesize_counts(const ImageBuffer& background,
                                  const std::vector<Annotation>& annotations,
                                  const ObjectSet& objects, const std::vector<int>& embed_counts,
                                  const PlacementPolicy& policy, Rng& rng,
                                  poisson::GuidanceMode mode = poisson::GuidanceMode::SourceGradients,
                                  const poisson::SolverParams& solver = {});

/// Draws per-category embed counts from the spec's per-image min/max, then
/// delegates to synthesize_counts.
SynthesisResult synthesize(const ImageBuffer& background,
                           const std::vector<Annotation>& annotations, const ObjectSet& objects,
                           const SynthesisSpec& spec, const PlacementPolicy& policy, Rng& rng,
                           poisson::GuidanceMode mode = poisson::GuidanceMode::SourceGradients,
                           const poisson::SolverParams& solver = {});

struct TrainingPair {
    ImageBuffer real;
    ImageBuffer fake;
    std::vector<int> covered;  // indices into the annotation list
};

/// GAN-style pair: `real` is the untouched input; `fake` overwrites each
/// covered annotation rect with a same-category crop rescaled to the exact
/// box (direct paste, no Poisson solve — the seam is the training signal).
/// A crop is compatible when its aspect ratio is within 2× of the box's.
/// Throws when a covered annotation has no compatible crop.
TrainingPair build_training_pair(const ImageBuffer& image,
                                 const std::vector<Annotation>& annotations,
                                 const ObjectSet& objects, Rng& rng, double cover_prob = 1.0);

struct GenerationReport {
    struct PerImage {
        int id = -1;
        std::string file;
        std::vector<EmbedRecord> embedded;
        std::vector<FailureRecord> failures;
    };
    std::uint64_t seed = 0;
    int waves = 0;
    std::vector<PerImage> images;
    std::map<std::string, long long> preexisting_counts;
    std::map<std::string, long long> embedded_counts;
    std::map<std::string, long long> final_counts;
};

struct GeneratedDataset {
    DatasetManifest manifest;              // image files relative to out_dir
    GenerationReport report;
};

/// Expands the background manifest into a synthesized dataset whose final
/// per-category totals (pre-existing + embedded) equal spec.targets exactly.
/// Embeds are scheduled round-robin over images, largest-deficit category
/// first, respecting per-image min/max; placement failures are re-assigned
/// in later waves until the targets are met or no progress is possible
/// (which raises an infeasibility error with the shortfall). Writes PNGs
/// under out_dir/images plus manifest.json and report.json.
/// Per-image RNG streams derive from (seed, image id, wave), so `jobs`
/// never changes the output.
GeneratedDataset generate_dataset(const DatasetManifest& backgrounds,
                                  const std::map<int, ImageBuffer>& images,
                                  const ObjectSet& objects, const SynthesisSpec& spec,
                                  const PlacementPolicy& policy, const std::string& out_dir,
                                  int jobs = 1,
                                  poisson::GuidanceMode mode = poisson::GuidanceMode::SourceGradients);

std::string report_to_json(const GenerationReport& report,
                           const std::vector<std::string>& categories);

}  // namespace seafarm::compositor
