#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "seafarm/image.hpp"
#include "seafarm/manifest.hpp"
#include "seafarm/png_io.hpp"
#include "seafarm/rng.hpp"

using namespace seafarm;

namespace {

DatasetManifest two_image_manifest() {
    DatasetManifest m;
    m.categories = {"seacucumber", "seaurchin", "scallop"};
    m.images = {{1, "a.png", 720, 405}, {2, "b.png", 720, 405}};
    m.annotations.push_back({1, BBox{10, 20, 30, 40, 0}, {}, {}, {}});
    m.annotations.push_back({2, BBox{100.5, 50.25, 12, 18, 1}, {}, {}, {}});
    return m;
}

}  // namespace

TEST_CASE("well-formed manifest has no violations") {
    CHECK(validate_manifest(two_image_manifest()).empty());
}

TEST_CASE("degenerate box w = 0 yields one violation naming the annotation") {
    auto m = two_image_manifest();
    m.annotations.push_back({1, BBox{5, 5, 0, 10, 0}, {}, {}, {}});
    const auto v = validate_manifest(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == "positive-extent");
    CHECK(v[0].image_id == 1);
    CHECK(v[0].message.find("annotation 2") != std::string::npos);
}

TEST_CASE("box exceeding image width by 3 px is out of bounds") {
    auto m = two_image_manifest();
    m.annotations.push_back({1, BBox{700, 10, 23, 10, 0}, {}, {}, {}});
    const auto v = validate_manifest(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == "box-in-bounds");
}

TEST_CASE("unresolved image id and bad category index are reported") {
    auto m = two_image_manifest();
    m.annotations.push_back({99, BBox{1, 1, 5, 5, 0}, {}, {}, {}});
    m.annotations.push_back({1, BBox{1, 1, 5, 5, 7}, {}, {}, {}});
    const auto v = validate_manifest(m);
    REQUIRE(v.size() == 2);
    CHECK(v[0].rule == "image-id-resolves");
    CHECK(v[1].rule == "category-index");
}

TEST_CASE("duplicate image ids are a violation") {
    auto m = two_image_manifest();
    m.images.push_back({1, "dup.png", 10, 10});
    const auto v = validate_manifest(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == "unique-image-id");
}

TEST_CASE("category_counts tallies directly") {
    auto m = two_image_manifest();
    m.annotations.clear();
    m.annotations.push_back({1, BBox{1, 1, 5, 5, 0}, {}, {}, {}});
    m.annotations.push_back({1, BBox{1, 1, 5, 5, 1}, {}, {}, {}});
    m.annotations.push_back({2, BBox{1, 1, 5, 5, 1}, {}, {}, {}});
    const auto counts = category_counts(m);
    CHECK(counts.at("seacucumber") == 1);
    CHECK(counts.at("seaurchin") == 2);
    CHECK(counts.at("scallop") == 0);
}

TEST_CASE("category_counts on empty manifest is all zeros") {
    DatasetManifest m;
    m.categories = {"seacucumber", "seaurchin", "scallop"};
    const auto counts = category_counts(m);
    for (const auto& [name, n] : counts) CHECK(n == 0);
}

TEST_CASE("manifest built with the 1148/13592/282 profile tallies exactly") {
    DatasetManifest m;
    m.categories = {"seacucumber", "seaurchin", "scallop"};
    m.images = {{1, "a.png", 4000, 3000}};
    const long long want[3] = {1148, 13592, 282};
    Rng rng(11);
    for (int c = 0; c < 3; ++c)
        for (long long k = 0; k < want[c]; ++k) {
            const double x = rng.uniform(0.0, 3900.0);
            const double y = rng.uniform(0.0, 2900.0);
            m.annotations.push_back({1, BBox{x, y, 40, 30, c}, {}, {}, {}});
        }
    const auto counts = category_counts(m);
    CHECK(counts.at("seacucumber") == 1148);
    CHECK(counts.at("seaurchin") == 13592);
    CHECK(counts.at("scallop") == 282);
    CHECK(validate_manifest(m).empty());
}

TEST_CASE("serialize -> deserialize is the identity on all fields") {
    auto m = two_image_manifest();
    m.annotations[0].score = 0.875;
    m.annotations[1].weight = 0.3;
    m.annotations[1].mask_file = "masks/m1.png";
    const DatasetManifest back = manifest_from_json(manifest_to_json(m));
    CHECK(back.categories == m.categories);
    REQUIRE(back.images.size() == m.images.size());
    for (std::size_t i = 0; i < m.images.size(); ++i) {
        CHECK(back.images[i].id == m.images[i].id);
        CHECK(back.images[i].file == m.images[i].file);
        CHECK(back.images[i].width == m.images[i].width);
        CHECK(back.images[i].height == m.images[i].height);
    }
    REQUIRE(back.annotations.size() == m.annotations.size());
    for (std::size_t i = 0; i < m.annotations.size(); ++i) {
        CHECK(back.annotations[i].image_id == m.annotations[i].image_id);
        CHECK(back.annotations[i].box.x == m.annotations[i].box.x);
        CHECK(back.annotations[i].box.y == m.annotations[i].box.y);
        CHECK(back.annotations[i].box.w == m.annotations[i].box.w);
        CHECK(back.annotations[i].box.h == m.annotations[i].box.h);
        CHECK(back.annotations[i].box.category == m.annotations[i].box.category);
        CHECK(back.annotations[i].score == m.annotations[i].score);
        CHECK(back.annotations[i].weight == m.annotations[i].weight);
        CHECK(back.annotations[i].mask_file == m.annotations[i].mask_file);
    }
}

TEST_CASE("category_counts is permutation invariant") {
    auto m = two_image_manifest();
    Rng rng(3);
    for (int k = 0; k < 20; ++k)
        m.annotations.push_back(
            {1, BBox{1.0 + k, 2.0, 4, 4, static_cast<int>(rng.uniform_int(3))}, {}, {}, {}});
    const auto before = category_counts(m);
    // Deterministic shuffle.
    for (std::size_t i = m.annotations.size(); i > 1; --i)
        std::swap(m.annotations[i - 1], m.annotations[rng.uniform_int(i)]);
    CHECK(category_counts(m) == before);
}

TEST_CASE("PNG save/load round-trips byte-born images exactly") {
    const auto dir = std::filesystem::temp_directory_path() / "seafarm_core_test";
    std::filesystem::create_directories(dir);

    ImageBuffer img(13, 17, 3);
    Rng rng(7);
    for (double& v : img.data()) v = rng.uniform_int(256) / 255.0;
    const auto path = (dir / "rt.png").string();
    write_png(path, img);
    const PngImage back = read_png(path);
    REQUIRE(back.pixels.same_shape(img));
    CHECK(!back.alpha.has_value());
    for (std::size_t i = 0; i < img.data().size(); ++i)
        CHECK(back.pixels.data()[i] == doctest::Approx(img.data()[i]).epsilon(1e-12));

    // With alpha.
    std::vector<double> alpha(13 * 17);
    for (double& v : alpha) v = rng.uniform_int(256) / 255.0;
    const auto path2 = (dir / "rt_alpha.png").string();
    write_png(path2, img, &alpha);
    const PngImage back2 = read_png(path2);
    REQUIRE(back2.alpha.has_value());
    for (std::size_t i = 0; i < alpha.size(); ++i)
        CHECK((*back2.alpha)[i] == doctest::Approx(alpha[i]).epsilon(1e-12));
    std::filesystem::remove_all(dir);
}

TEST_CASE("PNG writer is byte-deterministic") {
    const auto dir = std::filesystem::temp_directory_path() / "seafarm_core_det";
    std::filesystem::create_directories(dir);
    ImageBuffer img(9, 9, 3);
    Rng rng(21);
    for (double& v : img.data()) v = rng.uniform();
    write_png((dir / "a.png").string(), img);
    write_png((dir / "b.png").string(), img);
    std::ifstream fa(dir / "a.png", std::ios::binary), fb(dir / "b.png", std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(!sa.empty());
    std::filesystem::remove_all(dir);
}

TEST_CASE("rng streams are reproducible and forks are independent") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng base(42);
    Rng f1 = base.fork(1), f1b = base.fork(1), f2 = base.fork(2);
    CHECK(f1.next_u64() == f1b.next_u64());
    CHECK(f1.next_u64() != f2.next_u64());
}
