#pragma once

#include <string>
#include <vector>

#include "amfm/image.hpp"
#include "amfm/pnm.hpp"
#include "amfm/report.hpp"

namespace amfm {

namespace detail {

inline void put_clipped(RgbImage& img, int x, int y, Rgb8 c) {
    if (x < 0 || x >= img.width() || y < 0 || y >= img.height()) return;
    img.at(x, y) = c;
}

inline void draw_rect_outline(RgbImage& img, const BBox& b, Rgb8 c, int thickness = 2) {
    for (int t = 0; t < thickness; ++t) {
        for (int x = b.x0; x <= b.x1; ++x) {
            put_clipped(img, x, b.y0 + t, c);
            put_clipped(img, x, b.y1 - t, c);
        }
        for (int y = b.y0; y <= b.y1; ++y) {
            put_clipped(img, b.x0 + t, y, c);
            put_clipped(img, b.x1 - t, y, c);
        }
    }
}

inline void draw_arrow(RgbImage& img, int cx, int cy, Direction dir, Rgb8 c) {
    const int half = 10;
    for (int dx = -half; dx <= half; ++dx) {
        put_clipped(img, cx + dx, cy, c);
        put_clipped(img, cx + dx, cy + 1, c);
    }
    const int tip = dir == Direction::Right ? cx + half : cx - half;
    const int step = dir == Direction::Right ? -1 : 1;
    for (int i = 1; i <= 5; ++i) {
        put_clipped(img, tip + step * i, cy - i, c);
        put_clipped(img, tip + step * i, cy + i, c);
    }
}

} // namespace detail

/// Writes the frame with detection overlays: 2-px outlines (faces green,
/// back-of-head red) and a direction arrow at each classified centroid.
/// Detections draw in list order, later ones over earlier ones; an empty list
/// reproduces the input bytes exactly.
inline void save_overlay(const RgbImage& img, const std::vector<ReportedDetection>& detections,
                         const std::string& path) {
    RgbImage out = img;
    for (const ReportedDetection& rd : detections) {
        const Rgb8 color =
            rd.detection.kind == DetectionKind::Face ? Rgb8{0, 255, 0} : Rgb8{255, 0, 0};
        detail::draw_rect_outline(out, rd.detection.box, color);
        if (rd.direction) {
            detail::draw_arrow(out, static_cast<int>(rd.detection.centroid_x),
                               static_cast<int>(rd.detection.centroid_y), *rd.direction, color);
        }
    }
    save_ppm(out, path);
}

} // namespace amfm
