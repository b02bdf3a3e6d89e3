#include <doctest.h>

#include <random>

#include "amfm/color.hpp"
#include "amfm/skin.hpp"

using namespace amfm;

namespace {

// Literal re-transcription of the four bounding rules, with its own
// conversions, used as the reference.
bool oracle_skin(int r, int g, int b) {
    const int dg = std::abs(r - g), db = std::abs(r - b);
    const bool rgb1 =
        ((r > 60) && (g > 40) && (b > 20) && (r > g) && (r > b) && (10 < dg) && (dg < 45) &&
         (db < dg)) ||
        ((dg < 45) && (db > 10) && (dg < db));
    const int sum = r + g + b;
    bool rgb2 = false;
    if (sum > 0) {
        const double rn = static_cast<double>(r) / sum, gn = static_cast<double>(g) / sum;
        rgb2 = 0.36 <= rn && rn <= 0.44 && 0.2 <= gn && gn <= 0.36;
    }
    const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    const double v = mx / 255.0;
    const double s = mx > 0 ? (mx - mn) / mx : 0.0;
    const bool hsv = 0.1 <= s && s <= 0.3 && 0.2 <= v && v <= 0.8; // hue in [0,1] always
    const double cb = 128.0 + (-37.797 * r - 74.203 * g + 112.0 * b) / 255.0;
    const double cr = 128.0 + (112.0 * r - 93.786 * g - 18.214 * b) / 255.0;
    const bool ycbcr = 110.5 <= cb && cb <= 135.5 && 135.0 <= cr && cr <= 145.0;
    return rgb1 && rgb2 && hsv && ycbcr;
}

} // namespace

TEST_CASE("named triples") {
    CHECK(skin_pixel(170, 140, 120));
    CHECK_FALSE(skin_pixel(128, 128, 128));
    CHECK_FALSE(skin_pixel(255, 0, 0));
    CHECK_FALSE(skin_pixel(0, 0, 0)); // division guard
}

TEST_CASE("clause-level checks") {
    // gray fails the first rule on both branches
    CHECK_FALSE(skin_rule_rgb1(128, 128, 128));
    // pure red fails both branches too
    CHECK_FALSE(skin_rule_rgb1(255, 0, 0));
    // black makes the normalized rule false by the division guard
    CHECK_FALSE(skin_rule_rgb2(0, 0, 0));
    // the hue clause is vacuous: the HSV rule reduces to the S and V intervals
    std::mt19937 rng(2);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 300; ++i) {
        const int r = byte(rng), g = byte(rng), b = byte(rng);
        const Hsv c = rgb_to_hsv(r, g, b);
        const bool sv_only = c.s >= 0.1 && c.s <= 0.3 && c.v >= 0.2 && c.v <= 0.8;
        CHECK(skin_rule_hsv(r, g, b) == sv_only);
    }
}

TEST_CASE("rule-by-rule oracle over a coarse grid plus random triples") {
    for (int r = 0; r <= 255; r += 5)
        for (int g = 0; g <= 255; g += 5)
            for (int b = 0; b <= 255; b += 5) CHECK(skin_pixel(r, g, b) == oracle_skin(r, g, b));

    std::mt19937 rng(13);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 1000; ++i) {
        const int r = byte(rng), g = byte(rng), b = byte(rng);
        CHECK(skin_pixel(r, g, b) == oracle_skin(r, g, b));
    }
}

TEST_CASE("skin mask is pointwise and conjunction-monotone") {
    RgbImage img(6, 4, Rgb8{170, 140, 120});
    CHECK(skin_mask(img).count() == 24);

    RgbImage gray(6, 4, Rgb8{128, 128, 128});
    CHECK(skin_mask(gray).count() == 0);

    // cropping commutes with the mask
    std::mt19937 rng(19);
    std::uniform_int_distribution<int> byte(0, 255);
    RgbImage noisy(10, 8);
    for (auto& p : noisy.pixels())
        p = {static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
             static_cast<std::uint8_t>(byte(rng))};
    const BinaryImage full = skin_mask(noisy);
    RgbImage cropped(4, 3);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 4; ++x) cropped.at(x, y) = noisy.at(x + 2, y + 1);
    const BinaryImage small = skin_mask(cropped);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 4; ++x) CHECK(small.at(x, y) == full.at(x + 2, y + 1));

    // the conjunction is a subset of each individual model's mask
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 10; ++x) {
            const Rgb8& p = noisy.at(x, y);
            if (!full.at(x, y)) continue;
            CHECK(skin_rule_rgb1(p.r, p.g, p.b));
            CHECK(skin_rule_rgb2(p.r, p.g, p.b));
            CHECK(skin_rule_hsv(p.r, p.g, p.b));
            CHECK(skin_rule_ycbcr(p.r, p.g, p.b));
        }
}

TEST_CASE("skin boxes filter speckles") {
    BinaryImage mask(64, 64);
    CHECK(skin_boxes(mask).empty());

    for (int y = 10; y < 30; ++y)
        for (int x = 5; x < 25; ++x) mask.at(x, y) = 1; // 20x20 region
    for (int i = 0; i < 5; ++i) mask.at(50 + i, 50) = 1; // 5 px speckle

    const auto boxes = skin_boxes(mask, 100);
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0] == BBox{5, 10, 24, 29});

    const auto all = skin_boxes(mask, 1);
    CHECK(all.size() == 2);
}
