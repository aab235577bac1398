#pragma once

#include <map>
#include <string>
#include <vector>

#include "seafarm/bbox.hpp"

namespace seafarm::eval {

/// Center-keypoint head output at quarter input resolution: one heat plane
/// per category in [0,1], a 2-plane size map (input-pixel units), and a
/// 2-plane sub-cell offset map in [0,1). Planes are row-major H×W.
struct HeadMaps {
    int height = 0, width = 0;
    std::vector<std::vector<double>> heat;  // per category
    std::vector<double> wh_w, wh_h;
    std::vector<double> offset_x, offset_y;

    bool valid() const;
};

struct Detection {
    BBox box;
    double score = 0.0;
};

struct DecodeParams {
    int top_k = 100;
    double score_thresh = 0.01;
    int stride = 4;
};

/// Local maxima of each heat plane (value >= all 8 neighbors, ties kept)
/// become candidate centers; the global top_k by score survive, then the
/// score threshold applies. Candidate (c, i, j) decodes to center
/// ((j + offset_x)·stride, (i + offset_y)·stride) with size (wh_w, wh_h)
/// read at (i, j), reported as a top-left box. No suppression beyond the
/// 3×3 peak test.
std::vector<Detection> decode(const HeadMaps& maps, const DecodeParams& params = {});

enum class ApInterpolation { AllPoint, ElevenPoint };

/// Single-category average precision at the given IoU threshold.
/// Detections are ranked by descending score (ties keep insertion order) and
/// greedily matched to the unmatched ground truth of highest IoU >= thresh.
/// With no ground truth: 1.0 when there are also no detections, else 0.0.
double average_precision(const std::vector<Detection>& dets, const std::vector<BBox>& gts,
                         double iou_thresh = 0.5,
                         ApInterpolation interp = ApInterpolation::AllPoint);

struct MapResult {
    std::map<std::string, double> per_category;  // categories present in GT
    double mean = 0.0;
};

/// Mean AP at IoU 0.5 over the categories present in the ground truth.
/// Inputs are grouped per category index; `categories` supplies the names.
MapResult map50(const std::vector<std::string>& categories,
                const std::vector<std::vector<Detection>>& dets_per_category,
                const std::vector<std::vector<BBox>>& gts_per_category,
                double iou_thresh = 0.5,
                ApInterpolation interp = ApInterpolation::AllPoint);

}  // namespace seafarm::eval
