#include "seafarm/object_set_io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "seafarm/png_io.hpp"

namespace seafarm {

namespace fs = std::filesystem;
using nlohmann::json;

std::string save_object_set(const ObjectSet& set, const std::vector<std::string>& categories,
                            const std::string& out_dir) {
    if (set.per_category.size() != categories.size())
        throw std::invalid_argument("save_object_set: category list does not match set");
    fs::create_directories(fs::path(out_dir) / "crops");

    json index;
    index["categories"] = categories;
    index["crops"] = json::array();
    int counter = 0;
    for (std::size_t c = 0; c < set.per_category.size(); ++c) {
        for (const ObjectCrop& crop : set.per_category[c]) {
            std::ostringstream name;
            name << "crops/crop_" << std::setw(6) << std::setfill('0') << counter++ << ".png";
            write_png((fs::path(out_dir) / name.str()).string(), crop.patch, &crop.alpha);
            index["crops"].push_back(
                {{"file", name.str()},
                 {"category_id", static_cast<int>(c)},
                 {"source_image_id", crop.source_image_id},
                 {"source_bbox",
                  {crop.source_box.x, crop.source_box.y, crop.source_box.w,
                   crop.source_box.h}}});
        }
    }

    const std::string index_path = (fs::path(out_dir) / "index.json").string();
    std::ofstream out(index_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write crop index: " + index_path);
    out << index.dump(2) << "\n";
    return index_path;
}

namespace {

json read_index(const std::string& index_path) {
    std::ifstream in(index_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open crop index: " + index_path);
    json j;
    in >> j;
    return j;
}

}  // namespace

std::vector<std::string> load_object_set_categories(const std::string& index_path) {
    return read_index(index_path).at("categories").get<std::vector<std::string>>();
}

ObjectSet load_object_set(const std::string& index_path) {
    const json j = read_index(index_path);
    const auto categories = j.at("categories").get<std::vector<std::string>>();
    const fs::path root = fs::path(index_path).parent_path();

    ObjectSet set;
    set.per_category.resize(categories.size());
    for (const auto& entry : j.at("crops")) {
        const int cat = entry.at("category_id").get<int>();
        if (cat < 0 || cat >= static_cast<int>(categories.size()))
            throw std::runtime_error("crop index: category_id out of range");
        PngImage png = read_png((root / entry.at("file").get<std::string>()).string());
        ObjectCrop crop;
        crop.patch = std::move(png.pixels);
        if (png.alpha)
            crop.alpha = std::move(*png.alpha);
        else
            crop.alpha.assign(
                static_cast<std::size_t>(crop.patch.height()) * crop.patch.width(), 1.0);
        crop.category = cat;
        crop.source_image_id = entry.at("source_image_id").get<int>();
        const auto& bb = entry.at("source_bbox");
        crop.source_box = BBox{bb.at(0).get<double>(), bb.at(1).get<double>(),
                               bb.at(2).get<double>(), bb.at(3).get<double>(), cat};
        set.per_category[cat].push_back(std::move(crop));
    }
    return set;
}

}  // namespace seafarm
