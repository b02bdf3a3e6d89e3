#pragma once

#include <algorithm>
#include <cmath>

#include "amfm/image.hpp"

namespace amfm {

/// HSV triple with all components in [0, 1].
struct Hsv {
    double h = 0, s = 0, v = 0;
};

/// Studio-swing (BT.601) YCbCr: Y in [16, 235], Cb and Cr in [16, 240].
struct YCbCr {
    double y = 0, cb = 0, cr = 0;
};

/// BT.601 luma. Result for 8-bit inputs stays within [0, 255].
inline double luma(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

inline GrayImage to_gray(const RgbImage& img) {
    GrayImage out(img.width(), img.height());
    const auto& src = img.pixels();
    auto& dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i)
        dst[i] = luma(src[i].r, src[i].g, src[i].b);
    return out;
}

/// Hexcone RGB -> HSV with channels in [0, 255]. For max == min the hue and
/// saturation degenerate to 0.
inline Hsv rgb_to_hsv(double r, double g, double b) {
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double v = mx / 255.0;
    if (mx == mn || mx == 0.0) return {0.0, 0.0, v};
    const double d = mx - mn;
    const double s = d / mx;
    double h;
    if (mx == r)
        h = (g - b) / d;
    else if (mx == g)
        h = 2.0 + (b - r) / d;
    else
        h = 4.0 + (r - g) / d;
    h /= 6.0;
    if (h < 0.0) h += 1.0;
    return {h, s, v};
}

/// Studio-swing BT.601 RGB -> YCbCr with channels in [0, 255].
inline YCbCr rgb_to_ycbcr(double r, double g, double b) {
    const double y = 16.0 + (65.481 * r + 128.553 * g + 24.966 * b) / 255.0;
    const double cb = 128.0 + (-37.797 * r - 74.203 * g + 112.0 * b) / 255.0;
    const double cr = 128.0 + (112.0 * r - 93.786 * g - 18.214 * b) / 255.0;
    return {y, cb, cr};
}

} // namespace amfm
