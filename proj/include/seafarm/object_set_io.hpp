#pragma once

#include <string>
#include <vector>

#include "seafarm/crop.hpp"

namespace seafarm {

/// Writes every crop as an RGBA (or gray+alpha) PNG under out_dir/crops plus
/// an index.json describing category, source image, and source box. Returns
/// the index path.
std::string save_object_set(const ObjectSet& set, const std::vector<std::string>& categories,
                            const std::string& out_dir);

/// Loads a saved object set. Patches round-trip within 8-bit quantization.
ObjectSet load_object_set(const std::string& index_path);

std::vector<std::string> load_object_set_categories(const std::string& index_path);

}  // namespace seafarm
