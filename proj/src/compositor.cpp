#include "seafarm/compositor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "seafarm/png_io.hpp"

namespace seafarm::compositor {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMinCropSide = 3;  // smaller patches have no clone interior
constexpr int kUnbounded = 1 << 28;

struct IntRect {
    int x = 0, y = 0, w = 0, h = 0;
};

// Rasterize a continuous box to pixels, clamped to the image.
std::optional<IntRect> rasterize_box(const BBox& b, int img_w, int img_h) {
    int x = static_cast<int>(std::llround(b.x));
    int y = static_cast<int>(std::llround(b.y));
    int w = static_cast<int>(std::llround(b.w));
    int h = static_cast<int>(std::llround(b.h));
    x = std::clamp(x, 0, img_w - 1);
    y = std::clamp(y, 0, img_h - 1);
    w = std::min(w, img_w - x);
    h = std::min(h, img_h - y);
    if (w < 1 || h < 1) return std::nullopt;
    return IntRect{x, y, w, h};
}

int spec_min(const SynthesisSpec& spec, int cat) {
    return cat < static_cast<int>(spec.per_image_min.size()) ? spec.per_image_min[cat] : 0;
}

int spec_max(const SynthesisSpec& spec, int cat) {
    return cat < static_cast<int>(spec.per_image_max.size()) ? spec.per_image_max[cat]
                                                             : kUnbounded;
}

void run_parallel(int count, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(jobs, count);
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

ObjectSet build_object_set(const DatasetManifest& manifest,
                           const std::map<int, ImageBuffer>& images,
                           const std::vector<int>& per_category_counts, Rng& rng,
                           const std::string& mask_root) {
    const int ncat = static_cast<int>(manifest.categories.size());
    if (static_cast<int>(per_category_counts.size()) != ncat)
        throw std::invalid_argument("build_object_set: counts size != category count");

    // Eligible annotations per category: image present, rasterized box >= 3x3.
    std::vector<std::vector<std::size_t>> eligible(ncat);
    for (std::size_t i = 0; i < manifest.annotations.size(); ++i) {
        const Annotation& a = manifest.annotations[i];
        const ImageRecord* im = manifest.find_image(a.image_id);
        if (!im || !images.count(a.image_id)) continue;
        if (a.box.category < 0 || a.box.category >= ncat) continue;
        const auto rect = rasterize_box(a.box, im->width, im->height);
        if (!rect || rect->w < kMinCropSide || rect->h < kMinCropSide) continue;
        eligible[a.box.category].push_back(i);
    }

    for (int c = 0; c < ncat; ++c)
        if (per_category_counts[c] > static_cast<int>(eligible[c].size())) {
            std::ostringstream msg;
            msg << "insufficient instances for category '" << manifest.categories[c]
                << "': available " << eligible[c].size() << ", requested "
                << per_category_counts[c];
            throw std::runtime_error(msg.str());
        }

    ObjectSet set;
    set.per_category.resize(ncat);
    for (int c = 0; c < ncat; ++c) {
        auto& pool = eligible[c];
        // Fisher-Yates prefix shuffle: sampling without replacement.
        const int want = per_category_counts[c];
        for (int k = 0; k < want; ++k) {
            const std::size_t j =
                k + static_cast<std::size_t>(rng.uniform_int(pool.size() - k));
            std::swap(pool[k], pool[j]);
        }
        for (int k = 0; k < want; ++k) {
            const Annotation& a = manifest.annotations[pool[k]];
            const ImageBuffer& src = images.at(a.image_id);
            const auto rect = rasterize_box(a.box, src.width(), src.height());
            ObjectCrop crop;
            crop.patch = src.crop_rect(rect->x, rect->y, rect->w, rect->h);
            crop.category = a.box.category;
            crop.source_image_id = a.image_id;
            crop.source_box = a.box;
            if (a.mask_file) {
                const fs::path p = mask_root.empty() ? fs::path(*a.mask_file)
                                                     : fs::path(mask_root) / *a.mask_file;
                PngImage mask_img = read_png(p.string());
                if (mask_img.pixels.channels() != 1)
                    throw std::runtime_error("contour mask must be grayscale: " + p.string());
                std::vector<double> plane = mask_img.pixels.data();
                if (mask_img.pixels.height() != rect->h || mask_img.pixels.width() != rect->w)
                    plane = bilinear_resize_plane(plane, mask_img.pixels.height(),
                                                  mask_img.pixels.width(), rect->h, rect->w);
                crop.alpha = std::move(plane);
            } else {
                crop.alpha.assign(static_cast<std::size_t>(rect->h) * rect->w, 1.0);
            }
            set.per_category[c].push_back(std::move(crop));
        }
    }
    return set;
}

PlacementOutcome propose_placement(const std::vector<BBox>& existing, const ObjectCrop& crop,
                                   int image_width, int image_height,
                                   const PlacementPolicy& policy, Rng& rng) {
    PlacementOutcome out;
    const int cw = crop.patch.width(), ch = crop.patch.height();

    const auto scaled_side = [](int side, double s) {
        return std::max(kMinCropSide, static_cast<int>(std::llround(side * s)));
    };
    // With a 1-pixel margin the smallest jitter must fit at all.
    if (scaled_side(cw, policy.scale_lo) + 2 > image_width ||
        scaled_side(ch, policy.scale_lo) + 2 > image_height) {
        out.failure = "crop too large for image";
        return out;
    }

    std::vector<std::size_t> anchors;
    for (std::size_t i = 0; i < existing.size(); ++i)
        if (existing[i].category == crop.category) anchors.push_back(i);

    for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
        out.attempts = attempt;
        const double s = rng.uniform(policy.scale_lo, policy.scale_hi);
        const int pw = scaled_side(cw, s);
        const int ph = scaled_side(ch, s);
        if (pw + 2 > image_width || ph + 2 > image_height) continue;

        Placement cand;
        cand.w = pw;
        cand.h = ph;
        cand.scale = s;

        if (!anchors.empty()) {
            const BBox& anchor = existing[anchors[rng.uniform_int(anchors.size())]];
            const double radius =
                policy.vicinity_factor * std::hypot(anchor.w, anchor.h);
            const double theta = rng.uniform(0.0, 2.0 * kPi);
            const double rad = radius * std::sqrt(rng.uniform());
            const double cx = anchor.cx() + rad * std::cos(theta);
            const double cy = anchor.cy() + rad * std::sin(theta);
            cand.x = static_cast<int>(std::llround(cx - pw / 2.0));
            cand.y = static_cast<int>(std::llround(cy - ph / 2.0));
            if (cand.x < 1 || cand.y < 1 || cand.x + pw > image_width - 1 ||
                cand.y + ph > image_height - 1)
                continue;
            // Re-check against the rasterized center: rounding must not leak
            // outside the promised radius.
            const double pcx = cand.x + pw / 2.0, pcy = cand.y + ph / 2.0;
            if (std::hypot(pcx - anchor.cx(), pcy - anchor.cy()) > radius) continue;
            cand.anchored = true;
            cand.anchor_cx = anchor.cx();
            cand.anchor_cy = anchor.cy();
            cand.anchor_radius = radius;
        } else {
            const int max_x = image_width - 1 - pw;   // valid top-left range [1, max_x]
            const int max_y = image_height - 1 - ph;
            if (max_x < 1 || max_y < 1) continue;
            cand.x = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_x)));
            cand.y = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_y)));
        }

        const BBox placed{static_cast<double>(cand.x), static_cast<double>(cand.y),
                          static_cast<double>(pw), static_cast<double>(ph), crop.category};
        bool overlaps = false;
        for (const BBox& b : existing)
            if (iou(placed, b) > policy.max_overlap_iou) {
                overlaps = true;
                break;
            }
        if (overlaps) continue;

        out.placement = cand;
        return out;
    }
    std::ostringstream msg;
    msg << "no placement found within " << policy.max_attempts << " attempts";
    out.failure = msg.str();
    return out;
}

SynthesisResult synthesize_counts(const ImageBuffer& background,
                                  const std::vector<Annotation>& annotations,
                                  const ObjectSet& objects, const std::vector<int>& embed_counts,
                                  const PlacementPolicy& policy, Rng& rng,
                                  poisson::GuidanceMode mode,
                                  const poisson::SolverParams& solver) {
    const int ncat = static_cast<int>(objects.per_category.size());
    if (static_cast<int>(embed_counts.size()) != ncat)
        throw std::invalid_argument("synthesize_counts: counts size != category count");
    for (int c = 0; c < ncat; ++c)
        if (embed_counts[c] > 0 && objects.per_category[c].empty()) {
            std::ostringstream msg;
            msg << "object set has no crops for category index " << c;
            throw std::runtime_error(msg.str());
        }

    SynthesisResult res;
    res.image = background;
    res.annotations = annotations;
    const int image_id = annotations.empty() ? -1 : annotations.front().image_id;

    std::vector<BBox> boxes;
    boxes.reserve(annotations.size());
    for (const auto& a : annotations) boxes.push_back(a.box);

    for (int c = 0; c < ncat; ++c) {
        for (int k = 0; k < embed_counts[c]; ++k) {
            const auto& pool = objects.per_category[c];
            const ObjectCrop& crop = pool[rng.uniform_int(pool.size())];
            PlacementOutcome outcome =
                propose_placement(boxes, crop, res.image.width(), res.image.height(),
                                  policy, rng);
            if (!outcome.placement) {
                res.failures.push_back({c, outcome.failure});
                continue;
            }
            const Placement& p = *outcome.placement;
            const ObjectCrop scaled = rescale_crop(crop, p.h, p.w);
            try {
                res.image = poisson::seamless_clone(res.image, scaled, p.x, p.y, mode, solver);
            } catch (const std::exception& e) {
                res.failures.push_back({c, std::string("clone failed: ") + e.what()});
                continue;
            }

            BBox placed{static_cast<double>(p.x), static_cast<double>(p.y),
                        static_cast<double>(p.w), static_cast<double>(p.h), c};
            Annotation ann;
            ann.image_id = image_id;
            ann.box = placed;
            res.annotations.push_back(ann);
            boxes.push_back(placed);

            EmbedRecord rec;
            rec.category = c;
            rec.box = placed;
            rec.scale = p.scale;
            rec.attempts = outcome.attempts;
            rec.anchored = p.anchored;
            rec.anchor_cx = p.anchor_cx;
            rec.anchor_cy = p.anchor_cy;
            rec.anchor_radius = p.anchor_radius;
            res.embedded.push_back(rec);
        }
    }
    return res;
}

SynthesisResult synthesize(const ImageBuffer& background,
                           const std::vector<Annotation>& annotations, const ObjectSet& objects,
                           const SynthesisSpec& spec, const PlacementPolicy& policy, Rng& rng,
                           poisson::GuidanceMode mode, const poisson::SolverParams& solver) {
    const int ncat = static_cast<int>(objects.per_category.size());
    std::vector<int> counts(ncat, 0);
    for (int c = 0; c < ncat; ++c) {
        const int lo = spec_min(spec, c);
        const int hi = std::min(spec_max(spec, c), lo + 64);  // draw needs a finite range
        if (hi < lo) throw std::invalid_argument("synthesize: per-image min > max");
        counts[c] = lo + static_cast<int>(rng.uniform_int(
                             static_cast<std::uint64_t>(hi - lo) + 1));
    }
    return synthesize_counts(background, annotations, objects, counts, policy, rng, mode,
                             solver);
}

TrainingPair build_training_pair(const ImageBuffer& image,
                                 const std::vector<Annotation>& annotations,
                                 const ObjectSet& objects, Rng& rng, double cover_prob) {
    TrainingPair pair;
    pair.real = image;
    pair.fake = image;

    for (std::size_t i = 0; i < annotations.size(); ++i) {
        const bool cover = rng.uniform() < cover_prob;
        if (!cover) continue;
        const Annotation& a = annotations[i];
        const auto rect = rasterize_box(a.box, image.width(), image.height());
        if (!rect) continue;

        const int cat = a.box.category;
        if (cat < 0 || cat >= static_cast<int>(objects.per_category.size()))
            throw std::runtime_error("build_training_pair: annotation category out of range");
        const double box_ar = static_cast<double>(rect->w) / rect->h;
        std::vector<std::size_t> compatible;
        const auto& pool = objects.per_category[cat];
        for (std::size_t k = 0; k < pool.size(); ++k) {
            const double crop_ar = static_cast<double>(pool[k].patch.width()) /
                                   pool[k].patch.height();
            const double ratio = crop_ar / box_ar;
            if (ratio >= 0.5 && ratio <= 2.0) compatible.push_back(k);
        }
        if (compatible.empty()) {
            std::ostringstream msg;
            msg << "no compatible crop for category index " << cat << " (aspect ratio "
                << box_ar << ")";
            throw std::runtime_error(msg.str());
        }
        const ObjectCrop& crop = pool[compatible[rng.uniform_int(compatible.size())]];
        const ObjectCrop scaled = rescale_crop(crop, rect->h, rect->w);
        pair.fake.paste_rect(scaled.patch, rect->x, rect->y);
        pair.covered.push_back(static_cast<int>(i));
    }
    return pair;
}

GeneratedDataset generate_dataset(const DatasetManifest& backgrounds,
                                  const std::map<int, ImageBuffer>& images,
                                  const ObjectSet& objects, const SynthesisSpec& spec,
                                  const PlacementPolicy& policy, const std::string& out_dir,
                                  int jobs, poisson::GuidanceMode mode) {
    const int ncat = static_cast<int>(backgrounds.categories.size());
    const int nimg = static_cast<int>(backgrounds.images.size());
    if (static_cast<int>(spec.targets.size()) != ncat)
        throw std::invalid_argument("generate_dataset: targets size != category count");
    if (nimg == 0) throw std::invalid_argument("generate_dataset: no background images");

    // Pre-existing counts and per-category deficits.
    std::vector<long long> pre(ncat, 0);
    for (const auto& a : backgrounds.annotations)
        if (a.box.category >= 0 && a.box.category < ncat) ++pre[a.box.category];

    std::vector<long long> deficit(ncat);
    for (int c = 0; c < ncat; ++c) {
        deficit[c] = spec.targets[c] - pre[c];
        if (deficit[c] < 0) {
            std::ostringstream msg;
            msg << "target for '" << backgrounds.categories[c] << "' (" << spec.targets[c]
                << ") is below the pre-existing count (" << pre[c] << ")";
            throw std::runtime_error(msg.str());
        }
        const long long achievable =
            pre[c] + static_cast<long long>(nimg) * spec_max(spec, c);
        if (spec.targets[c] > achievable) {
            std::ostringstream msg;
            msg << "target for '" << backgrounds.categories[c] << "' (" << spec.targets[c]
                << ") is infeasible: max achievable " << achievable;
            throw std::runtime_error(msg.str());
        }
        const long long min_total = static_cast<long long>(nimg) * spec_min(spec, c);
        if (min_total > deficit[c]) {
            std::ostringstream msg;
            msg << "per-image minimum for '" << backgrounds.categories[c]
                << "' embeds " << min_total << " objects, overshooting the target deficit "
                << deficit[c];
            throw std::runtime_error(msg.str());
        }
    }

    // Per-image mutable state.
    struct ImageState {
        int background_index = -1;
        ImageBuffer image;
        std::vector<Annotation> annotations;
        GenerationReport::PerImage log;
        std::vector<int> embedded_per_cat;
    };
    std::vector<ImageState> state(nimg);
    for (int i = 0; i < nimg; ++i) {
        const ImageRecord& rec = backgrounds.images[i];
        const auto it = images.find(rec.id);
        if (it == images.end())
            throw std::runtime_error("generate_dataset: missing pixels for image id " +
                                     std::to_string(rec.id));
        state[i].background_index = i;
        state[i].image = it->second;
        state[i].log.id = rec.id;
        state[i].embedded_per_cat.assign(ncat, 0);
        for (const auto& a : backgrounds.annotations)
            if (a.image_id == rec.id) state[i].annotations.push_back(a);
    }

    // Largest-deficit categories schedule first.
    std::vector<int> cat_order(ncat);
    std::iota(cat_order.begin(), cat_order.end(), 0);
    std::stable_sort(cat_order.begin(), cat_order.end(),
                     [&](int a, int b) { return deficit[a] > deficit[b]; });

    Rng master(spec.rng);
    GenerationReport report;
    report.seed = spec.rng.seed;

    std::vector<long long> remaining = deficit;
    constexpr int kMaxWaves = 64;
    int wave = 0;
    while (true) {
        const long long todo = std::accumulate(remaining.begin(), remaining.end(), 0LL);
        if (todo == 0) break;
        if (wave >= kMaxWaves) {
            std::ostringstream msg;
            msg << "generation stalled after " << wave << " waves; shortfall:";
            for (int c = 0; c < ncat; ++c)
                if (remaining[c] > 0)
                    msg << " " << backgrounds.categories[c] << "=" << remaining[c];
            throw std::runtime_error(msg.str());
        }

        // Round-robin assignment for this wave; start offset rotates so
        // retries move away from images that just failed.
        std::vector<std::vector<int>> plan(nimg, std::vector<int>(ncat, 0));
        if (wave == 0)
            for (int i = 0; i < nimg; ++i)
                for (int c = 0; c < ncat; ++c) plan[i][c] = spec_min(spec, c);
        for (int c_idx : cat_order) {
            long long want = remaining[c_idx];
            if (wave == 0)
                want -= static_cast<long long>(nimg) * spec_min(spec, c_idx);
            int cursor = wave % nimg;
            long long assigned_this_cycle = 0;
            while (want > 0) {
                ImageState& st = state[cursor];
                const int cap = spec_max(spec, c_idx) - st.embedded_per_cat[c_idx] -
                                plan[cursor][c_idx];
                if (cap > 0) {
                    ++plan[cursor][c_idx];
                    --want;
                    ++assigned_this_cycle;
                }
                cursor = (cursor + 1) % nimg;
                if (cursor == wave % nimg) {
                    if (assigned_this_cycle == 0) break;  // capacity exhausted
                    assigned_this_cycle = 0;
                }
            }
            if (want > 0) {
                std::ostringstream msg;
                msg << "remaining capacity cannot absorb " << want << " embeds of '"
                    << backgrounds.categories[c_idx] << "'";
                throw std::runtime_error(msg.str());
            }
        }

        run_parallel(nimg, jobs, [&](int i) {
            ImageState& st = state[i];
            bool any = false;
            for (int c = 0; c < ncat; ++c) any = any || plan[i][c] > 0;
            if (!any) return;
            Rng rng = master.fork(static_cast<std::uint64_t>(st.log.id) +
                                  (static_cast<std::uint64_t>(wave) << 32));
            SynthesisResult r = synthesize_counts(st.image, st.annotations, objects,
                                                  plan[i], policy, rng, mode);
            st.image = std::move(r.image);
            st.annotations = std::move(r.annotations);
            for (const auto& e : r.embedded) {
                ++st.embedded_per_cat[e.category];
                st.log.embedded.push_back(e);
            }
            for (const auto& f : r.failures) st.log.failures.push_back(f);
        });

        for (int c = 0; c < ncat; ++c) {
            long long embedded_total = 0;
            for (const auto& st : state) embedded_total += st.embedded_per_cat[c];
            remaining[c] = deficit[c] - embedded_total;
        }
        ++wave;
    }
    report.waves = wave;

    // Emit the dataset.
    fs::create_directories(fs::path(out_dir) / "images");
    GeneratedDataset out;
    out.manifest.categories = backgrounds.categories;
    for (int i = 0; i < nimg; ++i) {
        ImageState& st = state[i];
        const ImageRecord& rec = backgrounds.images[i];
        std::ostringstream name;
        name << "images/synth_" << std::setw(6) << std::setfill('0') << rec.id << ".png";
        st.log.file = name.str();
        write_png((fs::path(out_dir) / name.str()).string(), st.image);

        ImageRecord im;
        im.id = rec.id;
        im.file = name.str();
        im.width = st.image.width();
        im.height = st.image.height();
        out.manifest.images.push_back(im);
        for (const auto& a : st.annotations) {
            Annotation clean;
            clean.image_id = rec.id;
            clean.box = a.box;
            out.manifest.annotations.push_back(clean);
        }
        report.images.push_back(st.log);
    }

    for (int c = 0; c < ncat; ++c) {
        const std::string& name = backgrounds.categories[c];
        report.preexisting_counts[name] = pre[c];
        report.embedded_counts[name] = deficit[c];
        report.final_counts[name] = spec.targets[c];
    }
    save_manifest(out.manifest, (fs::path(out_dir) / "manifest.json").string());
    std::ofstream rf(fs::path(out_dir) / "report.json");
    rf << report_to_json(report, backgrounds.categories);
    out.report = std::move(report);
    return out;
}

std::string report_to_json(const GenerationReport& report,
                           const std::vector<std::string>& categories) {
    json j;
    j["seed"] = report.seed;
    j["waves"] = report.waves;
    j["preexisting_counts"] = report.preexisting_counts;
    j["embedded_counts"] = report.embedded_counts;
    j["final_counts"] = report.final_counts;
    j["images"] = json::array();
    for (const auto& im : report.images) {
        json ji;
        ji["id"] = im.id;
        ji["file"] = im.file;
        ji["embedded"] = json::array();
        for (const auto& e : im.embedded) {
            json je = {{"category", categories.at(e.category)},
                       {"bbox", {e.box.x, e.box.y, e.box.w, e.box.h}},
                       {"scale", e.scale},
                       {"attempts", e.attempts}};
            if (e.anchored) {
                je["anchor_center"] = {e.anchor_cx, e.anchor_cy};
                je["anchor_radius"] = e.anchor_radius;
            }
            ji["embedded"].push_back(std::move(je));
        }
        ji["failures"] = json::array();
        for (const auto& f : im.failures)
            ji["failures"].push_back(
                {{"category", categories.at(f.category)}, {"reason", f.reason}});
        j["images"].push_back(std::move(ji));
    }
    return j.dump(2) + "\n";
}

}  // namespace seafarm::compositor
