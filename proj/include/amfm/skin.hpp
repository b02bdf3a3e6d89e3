#pragma once

#include <cmath>
#include <vector>

#include "amfm/color.hpp"
#include "amfm/image.hpp"
#include "amfm/segment.hpp"

namespace amfm {

// The four bounding-rule color models, kept separate so each clause can be
// exercised on its own. Comparison strictness follows the rule table exactly.

inline bool skin_rule_rgb1(int r, int g, int b) {
    const int dg = std::abs(r - g);
    const int db = std::abs(r - b);
    const bool first = r > 60 && g > 40 && b > 20 && r > g && r > b && dg > 10 && dg < 45 &&
                       db < dg;
    const bool second = dg < 45 && db > 10 && dg < db;
    return first || second;
}

inline bool skin_rule_rgb2(int r, int g, int b) {
    const int sum = r + g + b;
    if (sum == 0) return false;
    const double rn = static_cast<double>(r) / sum;
    const double gn = static_cast<double>(g) / sum;
    return rn >= 0.36 && rn <= 0.44 && gn >= 0.2 && gn <= 0.36;
}

inline bool skin_rule_hsv(int r, int g, int b) {
    const Hsv c = rgb_to_hsv(r, g, b);
    return c.h >= 0.0 && c.h <= 1.0 && c.s >= 0.1 && c.s <= 0.3 && c.v >= 0.2 && c.v <= 0.8;
}

inline bool skin_rule_ycbcr(int r, int g, int b) {
    const YCbCr c = rgb_to_ycbcr(r, g, b);
    return c.cb >= 110.5 && c.cb <= 135.5 && c.cr >= 135.0 && c.cr <= 145.0;
}

/// Conjunction of the four color-model rules.
inline bool skin_pixel(int r, int g, int b) {
    return skin_rule_rgb1(r, g, b) && skin_rule_rgb2(r, g, b) && skin_rule_hsv(r, g, b) &&
           skin_rule_ycbcr(r, g, b);
}

/// Pointwise skin classification; no morphology.
inline BinaryImage skin_mask(const RgbImage& img) {
    BinaryImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixels().size(); ++i) {
        const Rgb8& p = img.pixels()[i];
        out.pixels()[i] = skin_pixel(p.r, p.g, p.b) ? 1 : 0;
    }
    return out;
}

/// Boxes of the 8-connected skin components, speckles below min_area dropped.
inline std::vector<BBox> skin_boxes(const BinaryImage& mask, int min_area = 100) {
    const LabelImage labels = connected_components(mask, 8);
    std::vector<long long> counts(static_cast<std::size_t>(labels.num_labels) + 1, 0);
    for (std::int32_t l : labels.labels) ++counts[static_cast<std::size_t>(l)];
    const std::vector<BBox> all = bounding_boxes(labels);
    std::vector<BBox> out;
    for (int l = 1; l <= labels.num_labels; ++l)
        if (counts[static_cast<std::size_t>(l)] >= min_area)
            out.push_back(all[static_cast<std::size_t>(l - 1)]);
    return out;
}

} // namespace amfm
