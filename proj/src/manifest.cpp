#include "seafarm/manifest.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace seafarm {

using nlohmann::json;

namespace {
// Slack for coordinates produced by chained floating-point transforms.
constexpr double kBoundsEps = 1e-9;
}  // namespace

const ImageRecord* DatasetManifest::find_image(int id) const {
    for (const auto& im : images)
        if (im.id == id) return &im;
    return nullptr;
}

int DatasetManifest::category_index(const std::string& name) const {
    for (std::size_t i = 0; i < categories.size(); ++i)
        if (categories[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<Violation> validate_manifest(const DatasetManifest& m) {
    std::vector<Violation> out;
    std::set<int> seen_ids;
    for (const auto& im : m.images) {
        if (!seen_ids.insert(im.id).second)
            out.push_back({im.id, "unique-image-id", "duplicate image id"});
        if (im.width <= 0 || im.height <= 0)
            out.push_back({im.id, "image-dims", "non-positive image dimensions"});
    }
    for (std::size_t i = 0; i < m.annotations.size(); ++i) {
        const Annotation& a = m.annotations[i];
        std::ostringstream who;
        who << "annotation " << i;
        const ImageRecord* im = m.find_image(a.image_id);
        if (!im) {
            out.push_back({a.image_id, "image-id-resolves",
                           who.str() + ": image id does not resolve"});
            continue;
        }
        if (a.box.category < 0 ||
            a.box.category >= static_cast<int>(m.categories.size()))
            out.push_back({a.image_id, "category-index", who.str() + ": invalid category index"});
        if (!(a.box.w > 0.0) || !(a.box.h > 0.0))
            out.push_back({a.image_id, "positive-extent", who.str() + ": w and h must be > 0"});
        else {
            if (a.box.x < -kBoundsEps || a.box.y < -kBoundsEps ||
                a.box.x + a.box.w > im->width + kBoundsEps ||
                a.box.y + a.box.h > im->height + kBoundsEps)
                out.push_back({a.image_id, "box-in-bounds", who.str() + ": box exceeds image bounds"});
        }
        if (!std::isfinite(a.box.x) || !std::isfinite(a.box.y) ||
            !std::isfinite(a.box.w) || !std::isfinite(a.box.h))
            out.push_back({a.image_id, "finite-coords", who.str() + ": non-finite coordinate"});
    }
    return out;
}

std::map<std::string, long long> category_counts(const DatasetManifest& m) {
    std::map<std::string, long long> counts;
    for (const auto& c : m.categories) counts[c] = 0;
    for (const auto& a : m.annotations) {
        if (a.box.category >= 0 && a.box.category < static_cast<int>(m.categories.size()))
            ++counts[m.categories[a.box.category]];
    }
    return counts;
}

std::string manifest_to_json(const DatasetManifest& m) {
    json j;
    j["categories"] = m.categories;
    j["images"] = json::array();
    for (const auto& im : m.images)
        j["images"].push_back({{"id", im.id},
                               {"file", im.file},
                               {"width", im.width},
                               {"height", im.height}});
    j["annotations"] = json::array();
    for (const auto& a : m.annotations) {
        json ja = {{"image_id", a.image_id},
                   {"category_id", a.box.category},
                   {"bbox", {a.box.x, a.box.y, a.box.w, a.box.h}}};
        if (a.score) ja["score"] = *a.score;
        if (a.weight) ja["weight"] = *a.weight;
        if (a.mask_file) ja["mask_file"] = *a.mask_file;
        j["annotations"].push_back(std::move(ja));
    }
    return j.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text) {
    json j = json::parse(text);
    DatasetManifest m;
    m.categories = j.at("categories").get<std::vector<std::string>>();
    for (const auto& ji : j.at("images")) {
        ImageRecord im;
        im.id = ji.at("id").get<int>();
        im.file = ji.at("file").get<std::string>();
        im.width = ji.at("width").get<int>();
        im.height = ji.at("height").get<int>();
        m.images.push_back(std::move(im));
    }
    for (const auto& ja : j.at("annotations")) {
        Annotation a;
        a.image_id = ja.at("image_id").get<int>();
        a.box.category = ja.at("category_id").get<int>();
        const auto& bb = ja.at("bbox");
        a.box.x = bb.at(0).get<double>();
        a.box.y = bb.at(1).get<double>();
        a.box.w = bb.at(2).get<double>();
        a.box.h = bb.at(3).get<double>();
        if (ja.contains("score")) a.score = ja.at("score").get<double>();
        if (ja.contains("weight")) a.weight = ja.at("weight").get<double>();
        if (ja.contains("mask_file")) a.mask_file = ja.at("mask_file").get<std::string>();
        m.annotations.push_back(std::move(a));
    }
    return m;
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return manifest_from_json(ss.str());
}

void save_manifest(const DatasetManifest& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << manifest_to_json(m);
}

}  // namespace seafarm
