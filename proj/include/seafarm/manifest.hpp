#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seafarm/bbox.hpp"

namespace seafarm {

/// One labeled box bound to an image of the manifest.
struct Annotation {
    int image_id = -1;
    BBox box;
    std::optional<double> score;      ///< present on detection manifests
    std::optional<double> weight;     ///< present after mixup
    std::optional<std::string> mask_file;  ///< grayscale PNG sized to the box rect
};

struct ImageRecord {
    int id = -1;
    std::string file;
    int width = 0;
    int height = 0;
};

/// The ground-truth ledger read and written by every stage. Serialized as a
/// UTF-8 JSON document with top-level keys `categories`, `images`,
/// `annotations`; see docs/manifest-schema.md.
struct DatasetManifest {
    std::vector<std::string> categories;
    std::vector<ImageRecord> images;
    std::vector<Annotation> annotations;

    const ImageRecord* find_image(int id) const;
    int category_index(const std::string& name) const;  // -1 if absent
};

struct Violation {
    int image_id = -1;  ///< -1 when the rule is not tied to one image
    std::string rule;
    std::string message;
};

/// Structural validation. Violations are data, not failures: the list is
/// empty iff all manifest invariants hold.
std::vector<Violation> validate_manifest(const DatasetManifest& m);

/// Per-category annotation tally, including zero-count categories.
std::map<std::string, long long> category_counts(const DatasetManifest& m);

DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& m, const std::string& path);

std::string manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const std::string& text);

}  // namespace seafarm
