#include <doctest.h>

#include <random>

#include "amfm/detect.hpp"
#include "amfm/phantom.hpp"
#include "oracles.hpp"

using namespace amfm;

TEST_CASE("block grids snap trailing windows to the edge") {
    CHECK(extract_blocks(60, 60).size() == 1);

    const auto wide = extract_blocks(120, 60);
    REQUIRE(wide.size() == 3);
    CHECK(wide[0].x0 == 0);
    CHECK(wide[1].x0 == 30);
    CHECK(wide[2].x0 == 60);

    const auto snapped = extract_blocks(100, 60);
    REQUIRE(snapped.size() == 3);
    CHECK(snapped[0].x0 == 0);
    CHECK(snapped[1].x0 == 30);
    CHECK(snapped[2].x0 == 40);

    CHECK_THROWS_AS(extract_blocks(59, 60), std::invalid_argument);
}

TEST_CASE("top_columns keeps the strongest columns, leftmost on ties") {
    BinaryImage img(4, 5);
    auto fill_column = [&](int x, int n) {
        for (int y = 0; y < n; ++y) img.at(x, y) = 1;
    };
    fill_column(0, 5);
    fill_column(1, 1);
    fill_column(2, 3);
    fill_column(3, 2);

    const BinaryImage top2 = top_columns(img, 2);
    CHECK(top2.count() == 8); // columns 0 and 2 survive with their counts
    CHECK(top2.at(0, 4) == 1);
    CHECK(top2.at(2, 2) == 1);
    CHECK(top2.at(3, 0) == 0);

    SUBCASE("leftmost wins ties") {
        BinaryImage tie(3, 4);
        for (int y = 0; y < 4; ++y) tie.at(0, y) = tie.at(1, y) = 1;
        tie.at(2, 0) = 1;
        const BinaryImage top1 = top_columns(tie, 1);
        CHECK(top1.at(0, 0) == 1);
        CHECK(top1.at(1, 0) == 0);
    }
    SUBCASE("m >= width is the identity") { CHECK(top_columns(img, 10) == img); }
    SUBCASE("kept columns preserve their exact counts") {
        std::mt19937 rng(6);
        std::bernoulli_distribution bit(0.3);
        BinaryImage rnd(12, 9);
        for (auto& p : rnd.pixels()) p = bit(rng) ? 1 : 0;
        const BinaryImage kept = top_columns(rnd, 4);
        std::vector<long long> counts(12, 0);
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 12; ++x) counts[static_cast<std::size_t>(x)] += rnd.at(x, y);
        std::sort(counts.rbegin(), counts.rend());
        CHECK(static_cast<long long>(kept.count()) == counts[0] + counts[1] + counts[2] + counts[3]);
    }
}

TEST_CASE("density window basics") {
    SUBCASE("all ones ties to the first window") {
        BinaryImage img(10, 10, 1);
        const DensityWindow w = highest_dot_density_area(img, 4);
        CHECK(w.row == 0);
        CHECK(w.col == 0);
        CHECK(w.rate == 1.0);
    }
    SUBCASE("single pixel at (7,7) in 12x12 with s=4") {
        BinaryImage img(12, 12);
        img.at(7, 7) = 1;
        const DensityWindow w = highest_dot_density_area(img, 4);
        CHECK(w.row == 4);
        CHECK(w.col == 4);
        CHECK(w.rate == doctest::Approx(1.0 / 16.0));
    }
    SUBCASE("image smaller than the window throws") {
        CHECK_THROWS_AS(highest_dot_density_area(BinaryImage(5, 5), 6), std::invalid_argument);
    }
}

TEST_CASE("density window equals the literal stride-1 scan") {
    std::mt19937 rng(15);
    for (int trial = 0; trial < 60; ++trial) {
        const int w = 8 + static_cast<int>(rng() % 23);
        const int h = 8 + static_cast<int>(rng() % 23);
        std::bernoulli_distribution bit(0.2 + 0.6 * (trial % 3) / 2.0);
        BinaryImage img(w, h);
        for (auto& p : img.pixels()) p = bit(rng) ? 1 : 0;
        for (int s : {3, 5, 8}) {
            if (s > std::min(w, h)) continue;
            const DensityWindow got = highest_dot_density_area(img, s);
            const oracle::DensityResult ref = oracle::density_scan(img, s);
            CHECK(got.row == ref.i);
            CHECK(got.col == ref.j);
            CHECK(got.rate == ref.rate);
        }
    }
}

TEST_CASE("face detection obeys the AND semantics") {
    const int w = 120, h = 120;
    KnnModel model(3, 60, 60);
    // model that says Face to everything: three identical flat samples
    for (int i = 0; i < 3; ++i)
        model.add_sample(BlockLabel::Face, std::vector<std::uint8_t>(3600, 128));

    GrayImage fm(w, h, 128.0);

    SUBCASE("no skin anywhere, Face everywhere -> empty") {
        RgbImage rgb(w, h, Rgb8{128, 128, 128});
        CHECK(face_detect(rgb, fm, model).empty());
    }
    SUBCASE("skin everywhere, NonFace everywhere -> empty") {
        RgbImage rgb(w, h, Rgb8{170, 140, 120});
        KnnModel nonface(3, 60, 60);
        for (int i = 0; i < 3; ++i)
            nonface.add_sample(BlockLabel::NonFace, std::vector<std::uint8_t>(3600, 128));
        CHECK(face_detect(rgb, fm, nonface).empty());
    }
    SUBCASE("skin square plus an always-face model -> one merged detection") {
        RgbImage rgb(w, h, Rgb8{128, 128, 128});
        for (int y = 20; y < 100; ++y)
            for (int x = 20; x < 100; ++x) rgb.at(x, y) = Rgb8{170, 140, 120};
        const auto dets = face_detect(rgb, fm, model);
        REQUIRE(dets.size() == 1);
        CHECK(dets[0].kind == DetectionKind::Face);
        CHECK(dets[0].box.intersection_area(BBox{20, 20, 99, 99}) > 0);
        CHECK(dets[0].score == 1.0);
        CHECK(dets[0].centroid_x == dets[0].box.center_x());
    }
    SUBCASE("two far-apart skin regions -> two detections") {
        RgbImage rgb(240, 120, Rgb8{128, 128, 128});
        GrayImage fm2(240, 120, 128.0);
        for (int y = 30; y < 90; ++y) {
            for (int x = 0; x < 60; ++x) rgb.at(x, y) = Rgb8{170, 140, 120};
            for (int x = 180; x < 240; ++x) rgb.at(x, y) = Rgb8{170, 140, 120};
        }
        const auto dets = face_detect(rgb, fm2, model);
        CHECK(dets.size() == 2);
    }
}

TEST_CASE("back-of-head detection on constructed planes") {
    const auto planes = phantom::make_head_planes();
    const auto det = back_of_head_detect(planes.am, planes.fm);
    REQUIRE(det.has_value());
    CHECK(det->kind == DetectionKind::BackOfHead);
    CHECK(std::abs(det->box.center_x() - planes.head_box.center_x()) <= 20.0);
    CHECK(std::abs(det->box.center_y() - planes.head_box.center_y()) <= 20.0);
    CHECK(det->score > 0.0);
    CHECK(det->box.contains(static_cast<int>(det->centroid_x),
                            static_cast<int>(det->centroid_y)));

    SUBCASE("translation equivariance") {
        const auto shifted = phantom::make_head_planes(480, 480, 220, 50, 0);
        const auto det2 = back_of_head_detect(shifted.am, shifted.fm);
        REQUIRE(det2.has_value());
        CHECK(std::abs((det2->box.center_x() - det->box.center_x()) - 50.0) <= 5.0);
        CHECK(std::abs(det2->box.center_y() - det->box.center_y()) <= 5.0);
    }
    SUBCASE("uniform bright input yields no detection") {
        GrayImage flat(256, 256, 200.0);
        CHECK_FALSE(back_of_head_detect(flat, flat).has_value());
    }
    SUBCASE("image smaller than the window throws") {
        GrayImage small(64, 64, 10.0);
        CHECK_THROWS_AS(back_of_head_detect(small, small), std::invalid_argument);
    }
}
