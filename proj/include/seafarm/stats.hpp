#pragma once

#include <map>
#include <string>
#include <vector>

#include "seafarm/manifest.hpp"

namespace seafarm::stats {

/// Instance-size summary of a manifest. Relative area is box area divided by
/// its image's area; the mean object size is measured after rescaling every
/// image to the reference resolution.
struct StatsReport {
    std::map<std::string, long long> counts;
    std::vector<double> relative_areas;          // one entry per annotation
    std::map<std::string, double> quantiles;     // p10/p25/p50/p75/p90 of relative area
    double threshold = 0.01654;                  // fraction of image area
    double fraction_below_threshold = 0.0;
    int ref_width = 512, ref_height = 512;
    double mean_width_at_ref = 0.0;
    double mean_height_at_ref = 0.0;
    double mean_size_relative_area = 0.0;        // mean box at ref over ref area
};

/// Throws on a manifest with no images or no annotations.
StatsReport compute_stats(const DatasetManifest& manifest, int ref_width = 512,
                          int ref_height = 512, double threshold = 0.01654);

/// Relative-area percentages are formatted with three decimals.
std::string stats_to_json(const StatsReport& report);

/// Histogram of relative areas (percent of image) as a static SVG.
void write_histogram_svg(const std::string& path, const std::vector<double>& relative_areas,
                         int bins = 20);

/// Raw distribution: image_id, category, relative_area rows.
void write_areas_csv(const std::string& path, const DatasetManifest& manifest);

}  // namespace seafarm::stats
