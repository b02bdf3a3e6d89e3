#include <doctest.h>

#include <cmath>
#include <random>

#include "amfm/color.hpp"

using namespace amfm;

TEST_CASE("luma endpoints and the red channel weight") {
    CHECK(luma(255, 255, 255) == doctest::Approx(255.0));
    CHECK(luma(0, 0, 0) == 0.0);
    CHECK(luma(255, 0, 0) == doctest::Approx(76.245).epsilon(1e-12));
}

TEST_CASE("luma is monotone in every channel") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> byte(0, 254);
    for (int i = 0; i < 200; ++i) {
        const int r = byte(rng), g = byte(rng), b = byte(rng);
        const double base = luma(r, g, b);
        CHECK(luma(r + 1, g, b) > base);
        CHECK(luma(r, g + 1, b) > base);
        CHECK(luma(r, g, b + 1) > base);
    }
}

TEST_CASE("hsv corner cases and a hand-evaluated triple") {
    const Hsv black = rgb_to_hsv(0, 0, 0);
    CHECK(black.h == 0.0);
    CHECK(black.s == 0.0);
    CHECK(black.v == 0.0);

    const Hsv white = rgb_to_hsv(255, 255, 255);
    CHECK(white.h == 0.0);
    CHECK(white.s == 0.0);
    CHECK(white.v == 1.0);

    const Hsv skin = rgb_to_hsv(170, 140, 120);
    CHECK(skin.h == doctest::Approx(0.0667).epsilon(1e-2));
    CHECK(skin.s == doctest::Approx(0.2941).epsilon(1e-3));
    CHECK(skin.v == doctest::Approx(0.6667).epsilon(1e-3));
}

TEST_CASE("hsv inverts back to rgb within half a level") {
    // standard inverse, written here as the test's own reference
    auto hsv_to_rgb = [](const Hsv& c) {
        const double h6 = c.h * 6.0;
        const int i = static_cast<int>(std::floor(h6)) % 6;
        const double f = h6 - std::floor(h6);
        const double p = c.v * (1 - c.s);
        const double q = c.v * (1 - c.s * f);
        const double t = c.v * (1 - c.s * (1 - f));
        double r, g, b;
        switch (i) {
            case 0: r = c.v, g = t, b = p; break;
            case 1: r = q, g = c.v, b = p; break;
            case 2: r = p, g = c.v, b = t; break;
            case 3: r = p, g = q, b = c.v; break;
            case 4: r = t, g = p, b = c.v; break;
            default: r = c.v, g = p, b = q; break;
        }
        return std::array<double, 3>{r * 255, g * 255, b * 255};
    };
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 500; ++i) {
        const int r = byte(rng), g = byte(rng), b = byte(rng);
        const auto back = hsv_to_rgb(rgb_to_hsv(r, g, b));
        CHECK(std::abs(back[0] - r) < 0.5);
        CHECK(std::abs(back[1] - g) < 0.5);
        CHECK(std::abs(back[2] - b) < 0.5);
    }
}

TEST_CASE("ycbcr offsets, sums and a hand-evaluated triple") {
    const YCbCr black = rgb_to_ycbcr(0, 0, 0);
    CHECK(black.y == 16.0);
    CHECK(black.cb == 128.0);
    CHECK(black.cr == 128.0);

    const YCbCr white = rgb_to_ycbcr(255, 255, 255);
    CHECK(white.y == doctest::Approx(235.0).epsilon(1e-9));
    CHECK(white.cb == doctest::Approx(128.0).epsilon(1e-9));
    CHECK(white.cr == doctest::Approx(128.0).epsilon(1e-9));

    const YCbCr skin = rgb_to_ycbcr(170, 140, 120);
    CHECK(skin.y == doctest::Approx(141.98).epsilon(1e-3));
    CHECK(skin.cb == doctest::Approx(114.77).epsilon(1e-3));
    CHECK(skin.cr == doctest::Approx(142.60).epsilon(1e-3));
}

TEST_CASE("ycbcr stays in studio-swing ranges over a coarse grid") {
    for (int r = 0; r <= 255; r += 51)
        for (int g = 0; g <= 255; g += 51)
            for (int b = 0; b <= 255; b += 51) {
                const YCbCr c = rgb_to_ycbcr(r, g, b);
                CHECK(c.y >= 16.0 - 1e-9);
                CHECK(c.y <= 235.0 + 1e-9);
                CHECK(c.cb >= 16.0 - 1e-9);
                CHECK(c.cb <= 240.0 + 1e-9);
                CHECK(c.cr >= 16.0 - 1e-9);
                CHECK(c.cr <= 240.0 + 1e-9);
            }
}
