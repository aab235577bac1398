#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "seafarm/eval.hpp"
#include "seafarm/rng.hpp"

using namespace seafarm;
using namespace seafarm::eval;

namespace {

HeadMaps empty_maps(int categories, int h, int w) {
    HeadMaps m;
    m.height = h;
    m.width = w;
    m.heat.assign(categories, std::vector<double>(static_cast<std::size_t>(h) * w, 0.0));
    m.wh_w.assign(static_cast<std::size_t>(h) * w, 0.0);
    m.wh_h.assign(static_cast<std::size_t>(h) * w, 0.0);
    m.offset_x.assign(static_cast<std::size_t>(h) * w, 0.0);
    m.offset_y.assign(static_cast<std::size_t>(h) * w, 0.0);
    return m;
}

void set_plane(std::vector<double>& plane, int w, int y, int x, double v) {
    plane[static_cast<std::size_t>(y) * w + x] = v;
}

Detection det(double x, double y, double w, double h, int cat, double score) {
    return Detection{BBox{x, y, w, h, cat}, score};
}

}  // namespace

TEST_CASE("all-zero heat decodes to nothing") {
    const HeadMaps m = empty_maps(3, 16, 16);
    CHECK(decode(m).empty());
}

TEST_CASE("single peak decodes to the expected center and size") {
    HeadMaps m = empty_maps(1, 16, 16);
    set_plane(m.heat[0], 16, 2, 3, 0.9);
    set_plane(m.offset_x, 16, 2, 3, 0.1);
    set_plane(m.offset_y, 16, 2, 3, 0.2);
    set_plane(m.wh_w, 16, 2, 3, 8.0);
    set_plane(m.wh_h, 16, 2, 3, 12.0);
    const auto dets = decode(m);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].score == 0.9);
    CHECK(dets[0].box.cx() == doctest::Approx(12.4).epsilon(1e-12));
    CHECK(dets[0].box.cy() == doctest::Approx(8.8).epsilon(1e-12));
    CHECK(dets[0].box.w == 8.0);
    CHECK(dets[0].box.h == 12.0);
    CHECK(dets[0].box.category == 0);
}

TEST_CASE("two equal peaks far enough apart both survive") {
    HeadMaps m = empty_maps(1, 16, 16);
    set_plane(m.heat[0], 16, 4, 4, 0.5);
    set_plane(m.heat[0], 16, 4, 7, 0.5);
    set_plane(m.wh_w, 16, 4, 4, 4.0);
    set_plane(m.wh_h, 16, 4, 4, 4.0);
    set_plane(m.wh_w, 16, 4, 7, 4.0);
    set_plane(m.wh_h, 16, 4, 7, 4.0);
    CHECK(decode(m).size() == 2);
}

TEST_CASE("non-peak cells are suppressed by the 3x3 test") {
    HeadMaps m = empty_maps(1, 16, 16);
    set_plane(m.heat[0], 16, 5, 5, 0.9);
    set_plane(m.heat[0], 16, 5, 6, 0.8);  // shoulder, not a peak
    set_plane(m.wh_w, 16, 5, 5, 4.0);
    set_plane(m.wh_h, 16, 5, 5, 4.0);
    const auto dets = decode(m);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].score == 0.9);
}

TEST_CASE("top_k and score threshold apply after the peak test") {
    HeadMaps m = empty_maps(1, 16, 16);
    set_plane(m.heat[0], 16, 2, 2, 0.9);
    set_plane(m.heat[0], 16, 2, 8, 0.5);
    set_plane(m.heat[0], 16, 8, 2, 0.3);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            set_plane(m.wh_w, 16, y, x, 4.0);
            set_plane(m.wh_h, 16, y, x, 4.0);
        }
    DecodeParams p;
    p.top_k = 2;
    auto dets = decode(m, p);
    REQUIRE(dets.size() == 2);
    CHECK(dets[0].score == 0.9);
    CHECK(dets[1].score == 0.5);

    DecodeParams q;
    q.score_thresh = 0.4;
    dets = decode(m, q);
    CHECK(dets.size() == 2);
}

TEST_CASE("decode is equivariant to whole-cell translation") {
    Rng rng(7);
    HeadMaps m = empty_maps(2, 20, 20);
    // Peaks away from borders.
    set_plane(m.heat[0], 20, 6, 7, 0.8);
    set_plane(m.heat[1], 20, 11, 5, 0.6);
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x) {
            set_plane(m.wh_w, 20, y, x, 6.0);
            set_plane(m.wh_h, 20, y, x, 5.0);
            set_plane(m.offset_x, 20, y, x, 0.25);
            set_plane(m.offset_y, 20, y, x, 0.5);
        }

    const int dy = 2, dx = 3;
    HeadMaps shifted = empty_maps(2, 20, 20);
    shifted.wh_w = m.wh_w;
    shifted.wh_h = m.wh_h;
    shifted.offset_x = m.offset_x;
    shifted.offset_y = m.offset_y;
    for (int c = 0; c < 2; ++c)
        for (int y = 0; y + dy < 20; ++y)
            for (int x = 0; x + dx < 20; ++x)
                set_plane(shifted.heat[c], 20, y + dy, x + dx,
                          m.heat[c][static_cast<std::size_t>(y) * 20 + x]);

    auto base = decode(m);
    auto moved = decode(shifted);
    REQUIRE(base.size() == moved.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(moved[i].box.x == doctest::Approx(base[i].box.x + dx * 4).epsilon(1e-12));
        CHECK(moved[i].box.y == doctest::Approx(base[i].box.y + dy * 4).epsilon(1e-12));
        CHECK(moved[i].score == base[i].score);
    }
}

TEST_CASE("iou basics") {
    const BBox a{0, 0, 1, 1, 0};
    CHECK(iou(a, a) == 1.0);
    CHECK(iou(a, BBox{5, 5, 1, 1, 0}) == 0.0);
    // Two unit squares overlapping in a half-by-one strip.
    CHECK(iou(a, BBox{0.5, 0, 1, 1, 0}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("perfect detections give AP 1, empty detections give AP 0") {
    std::vector<BBox> gts{BBox{0, 0, 10, 10, 0}, BBox{20, 0, 8, 8, 0}};
    std::vector<Detection> dets{det(0, 0, 10, 10, 0, 1.0), det(20, 0, 8, 8, 0, 1.0)};
    CHECK(average_precision(dets, gts) == doctest::Approx(1.0));
    CHECK(average_precision({}, gts) == 0.0);
    CHECK(average_precision({}, {}) == 1.0);
    CHECK(average_precision({det(0, 0, 1, 1, 0, 0.5)}, {}) == 0.0);
}

TEST_CASE("2 GT / 3 detections with TPs at ranks 1 and 3 gives 5/6") {
    std::vector<BBox> gts{BBox{0, 0, 10, 10, 0}, BBox{30, 30, 10, 10, 0}};
    std::vector<Detection> dets{
        det(0, 0, 10, 10, 0, 0.9),    // TP
        det(60, 60, 10, 10, 0, 0.8),  // FP
        det(30, 30, 10, 10, 0, 0.7),  // TP
    };
    const double ap = average_precision(dets, gts);
    CHECK(ap == doctest::Approx(5.0 / 6.0).epsilon(1e-9));
    CHECK(ap == doctest::Approx(oracles::ap_reference(dets, gts, 0.5)).epsilon(1e-12));
}

TEST_CASE("AP is invariant under strictly monotone score rescaling") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BBox> gts;
        std::vector<Detection> dets;
        const int ng = 1 + static_cast<int>(rng.uniform_int(6));
        for (int g = 0; g < ng; ++g)
            gts.push_back(BBox{rng.uniform(0, 80), rng.uniform(0, 80), 8 + rng.uniform(0, 6),
                               8 + rng.uniform(0, 6), 0});
        const int nd = static_cast<int>(rng.uniform_int(9));
        for (int d = 0; d < nd; ++d) {
            const BBox& target = gts[rng.uniform_int(gts.size())];
            const double jitter = rng.uniform(-6, 6);
            dets.push_back(det(target.x + jitter, target.y + jitter, target.w, target.h, 0,
                               0.05 + 0.9 * rng.uniform()));
        }
        const double base = average_precision(dets, gts);
        auto rescaled = dets;
        for (auto& d : rescaled) d.score = 0.5 + std::atan(5.0 * d.score) / 3.2;
        CHECK(average_precision(rescaled, gts) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("adding extreme-score detections moves AP the right way") {
    std::vector<BBox> gts{BBox{0, 0, 10, 10, 0}, BBox{30, 30, 10, 10, 0}};
    std::vector<Detection> dets{det(0, 0, 10, 10, 0, 0.9), det(60, 60, 10, 10, 0, 0.5)};
    const double base = average_precision(dets, gts);

    auto with_fp = dets;
    with_fp.push_back(det(80, 80, 10, 10, 0, 0.01));  // lowest-score FP
    CHECK(average_precision(with_fp, gts) <= base + 1e-12);

    auto with_tp = dets;
    with_tp.push_back(det(30, 30, 10, 10, 0, 0.99));  // highest-score TP
    CHECK(average_precision(with_tp, gts) >= base - 1e-12);
}

TEST_CASE("random micro-datasets match the brute-force PR oracle") {
    Rng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<BBox> gts;
        std::vector<Detection> dets;
        const int ng = static_cast<int>(rng.uniform_int(9));
        for (int g = 0; g < ng; ++g)
            gts.push_back(BBox{rng.uniform(0, 90), rng.uniform(0, 90), 6 + rng.uniform(0, 8),
                               6 + rng.uniform(0, 8), 0});
        const int nd = static_cast<int>(rng.uniform_int(9));
        for (int d = 0; d < nd; ++d) {
            if (!gts.empty() && rng.uniform() < 0.7) {
                const BBox& t = gts[rng.uniform_int(gts.size())];
                dets.push_back(det(t.x + rng.uniform(-4, 4), t.y + rng.uniform(-4, 4), t.w,
                                   t.h, 0, rng.uniform()));
            } else {
                dets.push_back(det(rng.uniform(0, 90), rng.uniform(0, 90),
                                   6 + rng.uniform(0, 8), 6 + rng.uniform(0, 8), 0,
                                   rng.uniform()));
            }
        }
        CHECK(average_precision(dets, gts) ==
              doctest::Approx(oracles::ap_reference(dets, gts, 0.5)).epsilon(1e-9));
    }
}

TEST_CASE("map50 averages the categories present in ground truth") {
    const std::vector<std::string> cats{"seacucumber", "seaurchin", "scallop"};

    // Perfect everywhere.
    std::vector<std::vector<BBox>> gts(3);
    std::vector<std::vector<Detection>> dets(3);
    for (int c = 0; c < 3; ++c) {
        gts[c].push_back(BBox{10.0 * c, 0, 8, 8, c});
        dets[c].push_back(det(10.0 * c, 0, 8, 8, c, 1.0));
    }
    CHECK(map50(cats, dets, gts).mean == doctest::Approx(1.0));

    // {cu: 1.0, ur: 0.5, sc: 0.0} -> 0.5.
    dets[1].clear();
    dets[1].push_back(det(10, 0, 8, 8, 1, 0.9));
    gts[1].push_back(BBox{50, 50, 8, 8, 1});  // second urchin unmatched
    dets[2].clear();                          // no scallop detections
    const MapResult r = map50(cats, dets, gts);
    CHECK(r.per_category.at("seacucumber") == doctest::Approx(1.0));
    CHECK(r.per_category.at("seaurchin") == doctest::Approx(0.5));
    CHECK(r.per_category.at("scallop") == doctest::Approx(0.0));
    CHECK(r.mean == doctest::Approx(0.5).epsilon(1e-12));

    // A category with no ground truth does not enter the mean.
    gts[2].clear();
    const MapResult r2 = map50(cats, dets, gts);
    CHECK(r2.per_category.count("scallop") == 0);
    CHECK(r2.mean == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("map50 on randomized micro-datasets matches the exhaustive oracle") {
    Rng rng(17);
    const std::vector<std::string> cats{"a", "b", "c"};
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::vector<BBox>> gts(3);
        std::vector<std::vector<Detection>> dets(3);
        for (int c = 0; c < 3; ++c) {
            const int ng = 1 + static_cast<int>(rng.uniform_int(8));
            for (int g = 0; g < ng; ++g)
                gts[c].push_back(BBox{rng.uniform(0, 90), rng.uniform(0, 90),
                                      5 + rng.uniform(0, 6), 5 + rng.uniform(0, 6), c});
            const int nd = static_cast<int>(rng.uniform_int(8));
            for (int d = 0; d < nd; ++d) {
                const BBox& t = gts[c][rng.uniform_int(gts[c].size())];
                dets[c].push_back(det(t.x + rng.uniform(-3, 3), t.y + rng.uniform(-3, 3),
                                      t.w, t.h, c, rng.uniform()));
            }
        }
        const MapResult got = map50(cats, dets, gts);
        double mean = 0.0;
        for (int c = 0; c < 3; ++c) mean += oracles::ap_reference(dets[c], gts[c], 0.5);
        mean /= 3.0;
        CHECK(got.mean == doctest::Approx(mean).epsilon(1e-9));
    }
}

TEST_CASE("eleven-point interpolation is available and bounded") {
    std::vector<BBox> gts{BBox{0, 0, 10, 10, 0}, BBox{30, 30, 10, 10, 0}};
    std::vector<Detection> dets{det(0, 0, 10, 10, 0, 0.9), det(60, 60, 10, 10, 0, 0.8),
                                det(30, 30, 10, 10, 0, 0.7)};
    const double ap11 = average_precision(dets, gts, 0.5, ApInterpolation::ElevenPoint);
    CHECK(ap11 >= 0.0);
    CHECK(ap11 <= 1.0);
    // Hand arithmetic: recall levels 0..0.5 see precision 1, 0.6..1.0 see 2/3.
    CHECK(ap11 == doctest::Approx((6 * 1.0 + 5 * (2.0 / 3.0)) / 11.0).epsilon(1e-12));
}

TEST_CASE("decode rejects malformed maps") {
    HeadMaps m = empty_maps(1, 8, 8);
    m.wh_w.resize(10);
    CHECK_THROWS(decode(m));
    HeadMaps bad = empty_maps(1, 8, 8);
    bad.heat[0][3] = 1.5;  // out of [0,1]
    CHECK_THROWS(decode(bad));
}
