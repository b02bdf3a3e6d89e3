#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "amfm/image.hpp"
#include "amfm/knn.hpp"
#include "amfm/segment.hpp"
#include "amfm/skin.hpp"

namespace amfm {

enum class DetectionKind { Face, BackOfHead };

struct Detection {
    DetectionKind kind = DetectionKind::Face;
    BBox box;
    double centroid_x = 0;
    double centroid_y = 0;
    double score = 0; // KNN vote fraction for faces, density rate for heads
};

inline GrayImage crop(const GrayImage& img, const BBox& box) {
    GrayImage out(box.width(), box.height());
    for (int y = 0; y < box.height(); ++y)
        for (int x = 0; x < box.width(); ++x)
            out.at(x, y) = img.at(box.x0 + x, box.y0 + y);
    return out;
}

namespace detail {

inline std::vector<int> grid_offsets(int extent, int size, int stride) {
    std::vector<int> offsets;
    for (int o = 0; o + size <= extent; o += stride) offsets.push_back(o);
    const int last = extent - size;
    if (offsets.empty() || offsets.back() != last) offsets.push_back(last);
    return offsets;
}

} // namespace detail

/// Raster-order sliding-window grid; trailing partial windows snap to the
/// image edge and duplicates collapse.
inline std::vector<BBox> extract_blocks(int image_w, int image_h, int size = 60, int stride = 30) {
    if (image_w < size || image_h < size)
        throw std::invalid_argument("extract_blocks: image smaller than one block");
    if (size < 1 || stride < 1) throw std::invalid_argument("extract_blocks: bad size or stride");
    const std::vector<int> xs = detail::grid_offsets(image_w, size, stride);
    const std::vector<int> ys = detail::grid_offsets(image_h, size, stride);
    std::vector<BBox> out;
    out.reserve(xs.size() * ys.size());
    for (int y : ys)
        for (int x : xs) out.push_back({x, y, x + size - 1, y + size - 1});
    return out;
}

/// Face detection: a block is a face block iff the KNN says Face and at least
/// `skin_fraction` of its pixels are skin. Accepted blocks whose boxes overlap
/// or touch are merged into one detection (union box, center centroid, mean
/// vote fraction).
inline std::vector<Detection> face_detect(const RgbImage& rgb, const GrayImage& fm,
                                          const KnnModel& model, double skin_fraction = 0.25,
                                          int block_size = 60, int stride = 30) {
    if (rgb.width() != fm.width() || rgb.height() != fm.height())
        throw std::invalid_argument("face_detect: rgb/fm dimension mismatch");

    const BinaryImage skin = skin_mask(rgb);

    // Summed-area table over the skin mask for O(1) block fractions.
    const int w = rgb.width(), h = rgb.height();
    std::vector<std::int64_t> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            sat[static_cast<std::size_t>(y + 1) * (w + 1) + (x + 1)] =
                sat[static_cast<std::size_t>(y) * (w + 1) + (x + 1)] +
                sat[static_cast<std::size_t>(y + 1) * (w + 1) + x] -
                sat[static_cast<std::size_t>(y) * (w + 1) + x] + skin.at(x, y);
    auto skin_count = [&](const BBox& b) {
        return sat[static_cast<std::size_t>(b.y1 + 1) * (w + 1) + (b.x1 + 1)] -
               sat[static_cast<std::size_t>(b.y0) * (w + 1) + (b.x1 + 1)] -
               sat[static_cast<std::size_t>(b.y1 + 1) * (w + 1) + b.x0] +
               sat[static_cast<std::size_t>(b.y0) * (w + 1) + b.x0];
    };

    const std::vector<BBox> blocks = extract_blocks(w, h, block_size, stride);
    std::vector<BBox> accepted;
    std::vector<double> fractions;
    const double area = static_cast<double>(block_size) * block_size;
    for (const BBox& b : blocks) {
        if (static_cast<double>(skin_count(b)) / area < skin_fraction) continue;
        const KnnVote vote = knn_classify(model, crop(fm, b));
        if (vote.label != BlockLabel::Face) continue;
        accepted.push_back(b);
        fractions.push_back(vote.vote_fraction);
    }

    // Union-find merge over box adjacency (overlap or touch).
    std::vector<std::size_t> parent(accepted.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    auto adjacent = [](const BBox& a, const BBox& b) {
        return a.x0 <= b.x1 + 1 && b.x0 <= a.x1 + 1 && a.y0 <= b.y1 + 1 && b.y0 <= a.y1 + 1;
    };
    for (std::size_t i = 0; i < accepted.size(); ++i)
        for (std::size_t j = i + 1; j < accepted.size(); ++j)
            if (adjacent(accepted[i], accepted[j])) parent[find(i)] = find(j);

    std::vector<Detection> out;
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < accepted.size(); ++i)
        if (find(i) == i) roots.push_back(i);
    for (std::size_t root : roots) {
        BBox box = accepted[root];
        double fsum = 0;
        int members = 0;
        for (std::size_t i = 0; i < accepted.size(); ++i) {
            if (find(i) != root) continue;
            box.x0 = std::min(box.x0, accepted[i].x0);
            box.y0 = std::min(box.y0, accepted[i].y0);
            box.x1 = std::max(box.x1, accepted[i].x1);
            box.y1 = std::max(box.y1, accepted[i].y1);
            fsum += fractions[i];
            ++members;
        }
        Detection det;
        det.kind = DetectionKind::Face;
        det.box = box;
        det.centroid_x = box.center_x();
        det.centroid_y = box.center_y();
        det.score = fsum / members;
        out.push_back(det);
    }
    std::sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
        return std::pair(a.box.y0, a.box.x0) < std::pair(b.box.y0, b.box.x0);
    });
    return out;
}

/// Keeps the m columns with the highest foreground counts (ties to the
/// leftmost), zeroing everything else. Empty columns are never kept.
inline BinaryImage top_columns(const BinaryImage& img, int m = 60) {
    if (m < 1) throw std::invalid_argument("top_columns: m must be >= 1");
    const int w = img.width(), h = img.height();
    std::vector<long long> counts(static_cast<std::size_t>(w), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) counts[static_cast<std::size_t>(x)] += img.at(x, y);

    std::vector<int> order(static_cast<std::size_t>(w));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (counts[static_cast<std::size_t>(a)] != counts[static_cast<std::size_t>(b)])
            return counts[static_cast<std::size_t>(a)] > counts[static_cast<std::size_t>(b)];
        return a < b;
    });

    std::vector<std::uint8_t> keep(static_cast<std::size_t>(w), 0);
    int kept = 0;
    for (int i = 0; i < w && kept < m; ++i) {
        const int col = order[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(col)] == 0) break; // only empty columns remain
        keep[static_cast<std::size_t>(col)] = 1;
        ++kept;
    }

    BinaryImage out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (keep[static_cast<std::size_t>(x)]) out.at(x, y) = img.at(x, y);
    return out;
}

struct DensityWindow {
    int row = 0; // i: top row of the window
    int col = 0; // j: left column of the window
    double rate = 0;
};

/// Highest-density s x s window, scanned at stride 1 over every position.
/// Implemented with an integral image so total work is O(W*H); the first
/// maximizer in row-major order wins.
inline DensityWindow highest_dot_density_area(const BinaryImage& img, int s = 200) {
    const int w = img.width(), h = img.height();
    if (s < 1) throw std::invalid_argument("highest_dot_density_area: window must be >= 1");
    if (w < s || h < s)
        throw std::invalid_argument("highest_dot_density_area: image smaller than window");

    std::vector<std::int64_t> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            sat[static_cast<std::size_t>(y + 1) * (w + 1) + (x + 1)] =
                sat[static_cast<std::size_t>(y) * (w + 1) + (x + 1)] +
                sat[static_cast<std::size_t>(y + 1) * (w + 1) + x] -
                sat[static_cast<std::size_t>(y) * (w + 1) + x] + img.at(x, y);

    std::int64_t best = -1;
    DensityWindow out;
    for (int i = 0; i + s <= h; ++i) {
        for (int j = 0; j + s <= w; ++j) {
            const std::int64_t count =
                sat[static_cast<std::size_t>(i + s) * (w + 1) + (j + s)] -
                sat[static_cast<std::size_t>(i) * (w + 1) + (j + s)] -
                sat[static_cast<std::size_t>(i + s) * (w + 1) + j] +
                sat[static_cast<std::size_t>(i) * (w + 1) + j];
            if (count > best) {
                best = count;
                out.row = i;
                out.col = j;
            }
        }
    }
    out.rate = static_cast<double>(best) / (static_cast<double>(s) * s);
    return out;
}

struct HeadParams {
    int window = 200;  // density-scan window side
    int columns = 60;  // vertical lines kept before the scan
    double canny_sigma = 1.0;
    double canny_lo = 0.1;
    double canny_hi = 0.3;
};

/// Back-of-head detection from the AM and FM display images. Returns nullopt
/// when no dark structure exists to detect (e.g. a uniform bright frame).
inline std::optional<Detection> back_of_head_detect(const GrayImage& am, const GrayImage& fm,
                                                    const HeadParams& params = {}) {
    if (am.width() != fm.width() || am.height() != fm.height())
        throw std::invalid_argument("back_of_head_detect: am/fm dimension mismatch");
    if (am.width() < params.window || am.height() < params.window)
        throw std::invalid_argument("back_of_head_detect: image smaller than scan window");

    const BinaryImage bfm = binarize_dark(fm);
    const BinaryImage edges =
        canny(to_gray255(bfm), params.canny_sigma, params.canny_lo, params.canny_hi);
    const BinaryImage filled = fill_holes(edges);
    const BinaryImage comp = complement(filled);
    const BinaryImage bam = binarize_dark(am);
    if (bam.count() == 0) return std::nullopt; // no dark component anywhere
    const BinaryImage anded = binary_and(comp, bam);
    const BinaryImage lines = top_columns(anded, params.columns);
    if (lines.count() == 0) return std::nullopt;

    const DensityWindow win = highest_dot_density_area(lines, params.window);
    const BBox window_box = {win.col, win.row, win.col + params.window - 1,
                             win.row + params.window - 1};

    Detection det;
    det.kind = DetectionKind::BackOfHead;
    det.score = win.rate;

    // Refinement: restrict the window to the largest dark AM component.
    const BinaryImage head_mask = largest_component(connected_components(bam, 8));
    long long sx = 0, sy = 0, cnt = 0;
    BBox tight{};
    bool any = false;
    for (int y = window_box.y0; y <= window_box.y1; ++y) {
        for (int x = window_box.x0; x <= window_box.x1; ++x) {
            if (!head_mask.at(x, y)) continue;
            if (!any) {
                tight = {x, y, x, y};
                any = true;
            } else {
                tight.x0 = std::min(tight.x0, x);
                tight.y0 = std::min(tight.y0, y);
                tight.x1 = std::max(tight.x1, x);
                tight.y1 = std::max(tight.y1, y);
            }
            sx += x;
            sy += y;
            ++cnt;
        }
    }
    if (any) {
        det.box = tight;
        det.centroid_x = static_cast<double>(sx) / static_cast<double>(cnt);
        det.centroid_y = static_cast<double>(sy) / static_cast<double>(cnt);
    } else {
        det.box = window_box;
        det.centroid_x = window_box.center_x();
        det.centroid_y = window_box.center_y();
    }
    return det;
}

} // namespace amfm
