#include <doctest.h>

#include <random>

#include "amfm/segment.hpp"
#include "oracles.hpp"

using namespace amfm;

namespace {

BinaryImage random_mask(int w, int h, double density, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::bernoulli_distribution bit(density);
    BinaryImage img(w, h);
    for (auto& p : img.pixels()) p = bit(rng) ? 1 : 0;
    return img;
}

} // namespace

TEST_CASE("otsu: degenerate, bimodal and random images") {
    SUBCASE("constant image returns the constant, mask empty") {
        GrayImage img(8, 8, 37.4);
        const double level = otsu_threshold(img);
        CHECK(level == 37.4);
        CHECK(binarize_above(img, level).count() == 0);
    }
    SUBCASE("two-valued image splits at the smallest maximizer") {
        GrayImage img(10, 10);
        for (int i = 0; i < 100; ++i) img.pixels()[static_cast<std::size_t>(i)] = i < 50 ? 10 : 200;
        const double level = otsu_threshold(img);
        CHECK(level == oracle::otsu(img));
        CHECK(level >= 10);
        CHECK(level <= 199);
    }
    SUBCASE("random 8-bit images match the exhaustive search exactly") {
        std::mt19937 rng(3);
        std::uniform_int_distribution<int> byte(0, 255);
        for (int t = 0; t < 50; ++t) {
            GrayImage img(32, 32);
            for (auto& v : img.pixels()) v = byte(rng);
            CHECK(otsu_threshold(img) == oracle::otsu(img));
        }
    }
    SUBCASE("threshold depends only on the histogram") {
        std::mt19937 rng(8);
        std::uniform_int_distribution<int> byte(0, 255);
        GrayImage img(17, 9);
        for (auto& v : img.pixels()) v = byte(rng);
        GrayImage flipped(17, 9);
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 17; ++x) flipped.at(x, y) = img.at(16 - x, y);
        CHECK(otsu_threshold(img) == otsu_threshold(flipped));
    }
}

TEST_CASE("canny basics") {
    SUBCASE("constant image gives no edges") {
        CHECK(canny(GrayImage(32, 32, 99.0)).count() == 0);
    }
    SUBCASE("vertical step edge localizes within one column") {
        const int w = 64, h = 64, c = 30;
        GrayImage img(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) img.at(x, y) = x < c ? 0.0 : 255.0;
        const BinaryImage edges = canny(img);
        int rows_marked = 0;
        for (int y = 0; y < h; ++y) {
            bool row_has = false;
            for (int x = 0; x < w; ++x) {
                if (!edges.at(x, y)) continue;
                CHECK(std::abs(x - c) <= 1);
                row_has = true;
            }
            rows_marked += row_has;
        }
        CHECK(rows_marked >= static_cast<int>(0.9 * h));
    }
    SUBCASE("intensity complement leaves the edge map unchanged") {
        std::mt19937 rng(77);
        std::uniform_int_distribution<int> byte(0, 255);
        GrayImage img(40, 28);
        for (auto& v : img.pixels()) v = byte(rng);
        GrayImage inv(40, 28);
        for (std::size_t i = 0; i < img.pixels().size(); ++i)
            inv.pixels()[i] = 255.0 - img.pixels()[i];
        CHECK(canny(img) == canny(inv));
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(canny(GrayImage(8, 8), 1.0, 0.3, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(canny(GrayImage(8, 8), 0.2), std::invalid_argument);
    }
}

TEST_CASE("fill_holes") {
    SUBCASE("rectangle outline becomes solid") {
        BinaryImage img(12, 10);
        for (int x = 2; x <= 9; ++x) img.at(x, 2) = img.at(x, 7) = 1;
        for (int y = 2; y <= 7; ++y) img.at(2, y) = img.at(9, y) = 1;
        const BinaryImage filled = fill_holes(img);
        for (int y = 2; y <= 7; ++y)
            for (int x = 2; x <= 9; ++x) CHECK(filled.at(x, y) == 1);
        CHECK(filled.at(0, 0) == 0);
    }
    SUBCASE("bay open to the border stays open") {
        BinaryImage img(8, 6);
        // U shape touching the top border: interior connects out
        for (int y = 0; y < 5; ++y) img.at(2, y) = img.at(5, y) = 1;
        for (int x = 2; x <= 5; ++x) img.at(x, 4) = 1;
        CHECK(fill_holes(img) == img);
    }
    SUBCASE("idempotent and extensive on random masks") {
        for (std::uint32_t seed : {1u, 2u, 3u, 4u}) {
            const BinaryImage img = random_mask(20, 16, 0.4, seed);
            const BinaryImage once = fill_holes(img);
            CHECK(fill_holes(once) == once);
            for (std::size_t i = 0; i < img.pixels().size(); ++i)
                CHECK(once.pixels()[i] >= img.pixels()[i]);
        }
    }
}

TEST_CASE("complement") {
    BinaryImage ones(5, 4, 1);
    CHECK(complement(ones).count() == 0);
    const BinaryImage img = random_mask(15, 11, 0.5, 9);
    CHECK(complement(complement(img)) == img);
    CHECK(complement(img).count() == img.pixels().size() - img.count());
}

TEST_CASE("connected components") {
    SUBCASE("diagonal pixels: one component under 8, two under 4") {
        BinaryImage img(4, 4);
        img.at(1, 1) = img.at(2, 2) = 1;
        CHECK(connected_components(img, 8).num_labels == 1);
        CHECK(connected_components(img, 4).num_labels == 2);
    }
    SUBCASE("labels follow raster discovery order") {
        BinaryImage img(7, 3);
        img.at(5, 0) = 1; // discovered first (row 0)
        img.at(1, 2) = 1;
        const LabelImage labels = connected_components(img, 8);
        CHECK(labels.at(5, 0) == 1);
        CHECK(labels.at(1, 2) == 2);
    }
    SUBCASE("component size multisets match the flood-fill oracle") {
        for (std::uint32_t seed = 0; seed < 12; ++seed) {
            const BinaryImage img = random_mask(16, 16, 0.45, 100 + seed);
            for (int conn : {4, 8}) {
                const LabelImage labels = connected_components(img, conn);
                std::vector<long long> sizes(static_cast<std::size_t>(labels.num_labels), 0);
                for (std::int32_t l : labels.labels)
                    if (l > 0) ++sizes[static_cast<std::size_t>(l - 1)];
                std::sort(sizes.begin(), sizes.end());
                CHECK(sizes == oracle::component_sizes(img, conn));
            }
            // connectivity monotonicity
            CHECK(connected_components(img, 8).num_labels <=
                  connected_components(img, 4).num_labels);
        }
    }
}

TEST_CASE("largest component") {
    BinaryImage img(12, 5);
    for (int x = 0; x < 5; ++x) img.at(x, 0) = 1;          // 5 px
    for (int x = 0; x < 9; ++x) img.at(x, 3) = 1;          // 9 px
    const BinaryImage big = largest_component(connected_components(img, 8));
    CHECK(big.count() == 9);
    CHECK(big.at(0, 3) == 1);

    SUBCASE("equal sizes pick the first-discovered label") {
        BinaryImage tie(10, 3);
        tie.at(7, 0) = tie.at(8, 0) = 1;
        tie.at(1, 2) = tie.at(2, 2) = 1;
        const BinaryImage first = largest_component(connected_components(tie, 8));
        CHECK(first.at(7, 0) == 1);
        CHECK(first.at(1, 2) == 0);
    }
    SUBCASE("single blob is the identity") {
        BinaryImage one(6, 6);
        one.at(2, 2) = one.at(3, 2) = one.at(2, 3) = 1;
        CHECK(largest_component(connected_components(one, 8)) == one);
    }
    SUBCASE("empty foreground throws") {
        CHECK_THROWS_AS(largest_component(connected_components(BinaryImage(4, 4), 8)),
                        std::invalid_argument);
    }
}

TEST_CASE("convex hull mask") {
    SUBCASE("right triangle contains its interior grid points") {
        BinaryImage img(6, 6);
        img.at(0, 0) = img.at(0, 4) = img.at(4, 0) = 1;
        const HullResult hull = convex_hull_mask(img);
        CHECK(hull.mask.at(1, 1) == 1);
        CHECK(hull.mask.at(4, 4) == 0);
        // oracle agreement over the full grid
        std::vector<std::pair<int, int>> pts = {{0, 0}, {0, 4}, {4, 0}};
        for (int y = 0; y < 6; ++y)
            for (int x = 0; x < 6; ++x)
                CHECK(static_cast<bool>(hull.mask.at(x, y)) == oracle::hull_contains(pts, x, y));
    }
    SUBCASE("solid rectangle is its own hull") {
        BinaryImage img(8, 8);
        for (int y = 2; y <= 5; ++y)
            for (int x = 1; x <= 6; ++x) img.at(x, y) = 1;
        const HullResult hull = convex_hull_mask(img);
        CHECK(hull.mask == img);
        CHECK(hull.centroid_x == doctest::Approx(3.5));
        CHECK(hull.centroid_y == doctest::Approx(3.5));
    }
    SUBCASE("hull is extensive and idempotent on random masks") {
        for (std::uint32_t seed : {21u, 22u, 23u}) {
            const BinaryImage img = random_mask(14, 14, 0.15, seed);
            if (img.count() == 0) continue;
            const HullResult hull = convex_hull_mask(img);
            for (std::size_t i = 0; i < img.pixels().size(); ++i)
                CHECK(hull.mask.pixels()[i] >= img.pixels()[i]);
            CHECK(convex_hull_mask(hull.mask).mask == hull.mask);
        }
    }
    SUBCASE("random point sets match the supporting-line oracle") {
        std::mt19937 rng(31);
        std::uniform_int_distribution<int> coord(0, 17);
        for (int t = 0; t < 25; ++t) {
            BinaryImage img(18, 18);
            std::vector<std::pair<int, int>> pts;
            const int n = 3 + static_cast<int>(rng() % 10);
            for (int i = 0; i < n; ++i) {
                const int x = coord(rng), y = coord(rng);
                img.at(x, y) = 1;
            }
            for (int y = 0; y < 18; ++y)
                for (int x = 0; x < 18; ++x)
                    if (img.at(x, y)) pts.push_back({x, y});
            const HullResult hull = convex_hull_mask(img);
            for (int y = 0; y < 18; ++y)
                for (int x = 0; x < 18; ++x)
                    CHECK(static_cast<bool>(hull.mask.at(x, y)) ==
                          oracle::hull_contains(pts, x, y));
        }
    }
    SUBCASE("degenerate inputs") {
        BinaryImage single(5, 5);
        single.at(3, 2) = 1;
        const HullResult h1 = convex_hull_mask(single);
        CHECK(h1.mask.count() == 1);
        CHECK(h1.centroid_x == 3.0);

        BinaryImage line(7, 7);
        line.at(1, 1) = line.at(3, 3) = line.at(5, 5) = 1;
        const HullResult h2 = convex_hull_mask(line);
        CHECK(h2.mask.count() == 5); // the full diagonal segment
        CHECK(h2.mask.at(2, 2) == 1);
        CHECK(h2.mask.at(2, 3) == 0);

        CHECK_THROWS_AS(convex_hull_mask(BinaryImage(3, 3)), std::invalid_argument);
    }
}

TEST_CASE("bounding boxes") {
    SUBCASE("single pixel and full frame") {
        BinaryImage img(8, 8);
        img.at(3, 5) = 1;
        auto boxes = bounding_boxes(connected_components(img, 8));
        REQUIRE(boxes.size() == 1);
        CHECK(boxes[0] == BBox{3, 5, 3, 5});

        BinaryImage full(6, 4, 1);
        boxes = bounding_boxes(connected_components(full, 8));
        REQUIRE(boxes.size() == 1);
        CHECK(boxes[0] == BBox{0, 0, 5, 3});
    }
    SUBCASE("random blobs match a coordinate scan") {
        for (std::uint32_t seed : {51u, 52u}) {
            const BinaryImage img = random_mask(20, 15, 0.2, seed);
            const LabelImage labels = connected_components(img, 8);
            const auto boxes = bounding_boxes(labels);
            REQUIRE(static_cast<int>(boxes.size()) == labels.num_labels);
            for (int l = 1; l <= labels.num_labels; ++l) {
                int x0 = 1 << 20, y0 = 1 << 20, x1 = -1, y1 = -1;
                for (int y = 0; y < labels.height; ++y)
                    for (int x = 0; x < labels.width; ++x)
                        if (labels.at(x, y) == l) {
                            x0 = std::min(x0, x);
                            y0 = std::min(y0, y);
                            x1 = std::max(x1, x);
                            y1 = std::max(y1, y);
                        }
                CHECK(boxes[static_cast<std::size_t>(l - 1)] == BBox{x0, y0, x1, y1});
            }
        }
    }
}
