#include "seafarm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seafarm::eval {

bool HeadMaps::valid() const {
    const std::size_t plane = static_cast<std::size_t>(height) * width;
    if (height <= 0 || width <= 0 || heat.empty()) return false;
    for (const auto& h : heat) {
        if (h.size() != plane) return false;
        for (double v : h)
            if (!(v >= 0.0 && v <= 1.0)) return false;
    }
    return wh_w.size() == plane && wh_h.size() == plane && offset_x.size() == plane &&
           offset_y.size() == plane;
}

std::vector<Detection> decode(const HeadMaps& maps, const DecodeParams& params) {
    if (!maps.valid()) throw std::invalid_argument("decode: malformed head maps");

    const int h = maps.height, w = maps.width;
    const auto plane_at = [w](const std::vector<double>& p, int y, int x) {
        return p[static_cast<std::size_t>(y) * w + x];
    };

    struct Candidate {
        int category, i, j;
        double score;
    };
    std::vector<Candidate> candidates;
    for (int c = 0; c < static_cast<int>(maps.heat.size()); ++c) {
        const auto& plane = maps.heat[c];
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) {
                const double v = plane_at(plane, i, j);
                bool peak = true;
                for (int dy = -1; dy <= 1 && peak; ++dy)
                    for (int dx = -1; dx <= 1 && peak; ++dx) {
                        if (dy == 0 && dx == 0) continue;
                        const int ny = i + dy, nx = j + dx;
                        if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
                        if (plane_at(plane, ny, nx) > v) peak = false;
                    }
                if (peak) candidates.push_back({c, i, j, v});
            }
    }

    // Keep the global top_k by score; stable sort preserves (c, i, j) order
    // on ties.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
    if (static_cast<int>(candidates.size()) > params.top_k)
        candidates.resize(params.top_k);

    std::vector<Detection> out;
    for (const auto& cand : candidates) {
        if (cand.score < params.score_thresh) continue;
        const double cx =
            (cand.j + plane_at(maps.offset_x, cand.i, cand.j)) * params.stride;
        const double cy =
            (cand.i + plane_at(maps.offset_y, cand.i, cand.j)) * params.stride;
        const double bw = plane_at(maps.wh_w, cand.i, cand.j);
        const double bh = plane_at(maps.wh_h, cand.i, cand.j);
        Detection det;
        det.box = BBox{cx - bw / 2.0, cy - bh / 2.0, bw, bh, cand.category};
        det.score = cand.score;
        out.push_back(det);
    }
    return out;
}

double average_precision(const std::vector<Detection>& dets, const std::vector<BBox>& gts,
                         double iou_thresh, ApInterpolation interp) {
    if (gts.empty()) return dets.empty() ? 1.0 : 0.0;
    if (dets.empty()) return 0.0;

    std::vector<int> order(dets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return dets[a].score > dets[b].score;
    });

    std::vector<bool> gt_matched(gts.size(), false);
    std::vector<double> precision, recall;
    int tp = 0;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const Detection& det = dets[order[rank]];
        int best = -1;
        double best_iou = 0.0;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (gt_matched[g]) continue;
            const double v = iou(det.box, gts[g]);
            if (v < iou_thresh) continue;
            if (best < 0 || v > best_iou) {
                best = static_cast<int>(g);
                best_iou = v;
            }
        }
        if (best >= 0) {
            gt_matched[best] = true;
            ++tp;
        }
        precision.push_back(static_cast<double>(tp) / static_cast<double>(rank + 1));
        recall.push_back(static_cast<double>(tp) / static_cast<double>(gts.size()));
    }

    // Precision envelope: monotone non-increasing from the right.
    std::vector<double> env = precision;
    for (int k = static_cast<int>(env.size()) - 2; k >= 0; --k)
        env[k] = std::max(env[k], env[k + 1]);

    if (interp == ApInterpolation::AllPoint) {
        double ap = 0.0;
        double prev_recall = 0.0;
        for (std::size_t k = 0; k < env.size(); ++k) {
            ap += (recall[k] - prev_recall) * env[k];
            prev_recall = recall[k];
        }
        return ap;
    }

    double ap = 0.0;
    for (int step = 0; step <= 10; ++step) {
        const double r = step / 10.0;
        double best = 0.0;
        for (std::size_t k = 0; k < env.size(); ++k)
            if (recall[k] >= r) {
                best = env[k];
                break;
            }
        ap += best;
    }
    return ap / 11.0;
}

MapResult map50(const std::vector<std::string>& categories,
                const std::vector<std::vector<Detection>>& dets_per_category,
                const std::vector<std::vector<BBox>>& gts_per_category, double iou_thresh,
                ApInterpolation interp) {
    if (dets_per_category.size() != categories.size() ||
        gts_per_category.size() != categories.size())
        throw std::invalid_argument("map50: category sets do not align");

    MapResult result;
    double sum = 0.0;
    int present = 0;
    for (std::size_t c = 0; c < categories.size(); ++c) {
        if (gts_per_category[c].empty()) continue;
        const double ap = average_precision(dets_per_category[c], gts_per_category[c],
                                            iou_thresh, interp);
        result.per_category[categories[c]] = ap;
        sum += ap;
        ++present;
    }
    result.mean = present > 0 ? sum / present : 0.0;
    return result;
}

}  // namespace seafarm::eval
