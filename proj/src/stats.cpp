#include "seafarm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace seafarm::stats {

namespace {

double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * (sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double t = pos - lo;
    return (1.0 - t) * sorted[lo] + t * sorted[hi];
}

std::string pct3(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", fraction * 100.0);
    return buf;
}

}  // namespace

StatsReport compute_stats(const DatasetManifest& manifest, int ref_width, int ref_height,
                          double threshold) {
    if (manifest.images.empty() || manifest.annotations.empty())
        throw std::runtime_error("compute_stats: manifest has no images or no annotations");

    StatsReport r;
    r.threshold = threshold;
    r.ref_width = ref_width;
    r.ref_height = ref_height;
    r.counts = category_counts(manifest);

    double sum_w_ref = 0.0, sum_h_ref = 0.0;
    long long below = 0;
    for (const auto& a : manifest.annotations) {
        const ImageRecord* im = manifest.find_image(a.image_id);
        if (!im) throw std::runtime_error("compute_stats: unresolved image id");
        const double rel = a.box.area() / (static_cast<double>(im->width) * im->height);
        r.relative_areas.push_back(rel);
        if (rel < threshold) ++below;
        sum_w_ref += a.box.w * ref_width / im->width;
        sum_h_ref += a.box.h * ref_height / im->height;
    }
    const double n = static_cast<double>(r.relative_areas.size());
    r.fraction_below_threshold = below / n;
    r.mean_width_at_ref = sum_w_ref / n;
    r.mean_height_at_ref = sum_h_ref / n;
    r.mean_size_relative_area = (r.mean_width_at_ref * r.mean_height_at_ref) /
                                (static_cast<double>(ref_width) * ref_height);

    std::vector<double> sorted = r.relative_areas;
    std::sort(sorted.begin(), sorted.end());
    r.quantiles["p10"] = quantile(sorted, 0.10);
    r.quantiles["p25"] = quantile(sorted, 0.25);
    r.quantiles["p50"] = quantile(sorted, 0.50);
    r.quantiles["p75"] = quantile(sorted, 0.75);
    r.quantiles["p90"] = quantile(sorted, 0.90);
    return r;
}

std::string stats_to_json(const StatsReport& r) {
    nlohmann::json j;
    j["counts"] = r.counts;
    j["instances"] = r.relative_areas.size();
    j["threshold_pct"] = pct3(r.threshold);
    j["fraction_below_threshold"] = r.fraction_below_threshold;
    j["quantiles_relative_area"] = r.quantiles;
    j["reference_resolution"] = {r.ref_width, r.ref_height};
    j["mean_size_at_reference"] = {r.mean_width_at_ref, r.mean_height_at_ref};
    j["mean_size_relative_area"] = r.mean_size_relative_area;
    j["mean_size_relative_area_pct"] = pct3(r.mean_size_relative_area);
    nlohmann::json areas = nlohmann::json::array();
    for (double a : r.relative_areas) areas.push_back(a);
    j["relative_areas"] = std::move(areas);
    return j.dump(2) + "\n";
}

void write_histogram_svg(const std::string& path, const std::vector<double>& relative_areas,
                         int bins) {
    if (bins < 1) throw std::invalid_argument("write_histogram_svg: bins must be >= 1");
    if (relative_areas.empty())
        throw std::invalid_argument("write_histogram_svg: no data");

    const double max_pct =
        *std::max_element(relative_areas.begin(), relative_areas.end()) * 100.0;
    const double hi = max_pct > 0.0 ? max_pct : 1.0;
    std::vector<int> counts(bins, 0);
    for (double a : relative_areas) {
        int b = static_cast<int>(a * 100.0 / hi * bins);
        if (b >= bins) b = bins - 1;
        ++counts[b];
    }
    const int peak = *std::max_element(counts.begin(), counts.end());

    const int width = 640, height = 400, ml = 60, mb = 50, mt = 20, mr = 20;
    const double plot_w = width - ml - mr, plot_h = height - mt - mb;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write SVG: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int b = 0; b < bins; ++b) {
        const double bw = plot_w / bins;
        const double bh = peak > 0 ? plot_h * counts[b] / peak : 0.0;
        out << "  <rect x=\"" << ml + b * bw << "\" y=\"" << mt + plot_h - bh
            << "\" width=\"" << bw * 0.9 << "\" height=\"" << bh
            << "\" fill=\"#4878a8\"/>\n";
    }
    out << "  <line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\"" << width - mr
        << "\" y2=\"" << mt + plot_h << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + plot_h << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">instance area (% of image)</text>\n";
    out << "  <text x=\"16\" y=\"" << mt + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 "
        << mt + plot_h / 2 << ")\">instances</text>\n";
    char buf[32];
    for (int tick = 0; tick <= 4; ++tick) {
        const double frac = tick / 4.0;
        std::snprintf(buf, sizeof(buf), "%.3g", hi * frac);
        out << "  <text x=\"" << ml + plot_w * frac << "\" y=\"" << mt + plot_h + 18
            << "\" text-anchor=\"middle\" font-size=\"12\">" << buf << "</text>\n";
        std::snprintf(buf, sizeof(buf), "%d", static_cast<int>(peak * frac));
        out << "  <text x=\"" << ml - 8 << "\" y=\"" << mt + plot_h * (1.0 - frac) + 4
            << "\" text-anchor=\"end\" font-size=\"12\">" << buf << "</text>\n";
    }
    out << "</svg>\n";
}

void write_areas_csv(const std::string& path, const DatasetManifest& manifest) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    out << "image_id,category,relative_area\n";
    for (const auto& a : manifest.annotations) {
        const ImageRecord* im = manifest.find_image(a.image_id);
        if (!im) continue;
        const double rel = a.box.area() / (static_cast<double>(im->width) * im->height);
        const std::string cat =
            (a.box.category >= 0 && a.box.category < static_cast<int>(manifest.categories.size()))
                ? manifest.categories[a.box.category]
                : "unknown";
        out << a.image_id << "," << cat << "," << rel << "\n";
    }
}

}  // namespace seafarm::stats
