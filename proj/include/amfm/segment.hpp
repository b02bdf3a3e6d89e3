#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "amfm/image.hpp"

namespace amfm {

/// Inclusive pixel bounding box.
struct BBox {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
    long long area() const { return static_cast<long long>(width()) * height(); }
    double center_x() const { return 0.5 * (x0 + x1); }
    double center_y() const { return 0.5 * (y0 + y1); }

    bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }

    long long intersection_area(const BBox& o) const {
        const int ix0 = std::max(x0, o.x0), iy0 = std::max(y0, o.y0);
        const int ix1 = std::min(x1, o.x1), iy1 = std::min(y1, o.y1);
        if (ix0 > ix1 || iy0 > iy1) return 0;
        return static_cast<long long>(ix1 - ix0 + 1) * (iy1 - iy0 + 1);
    }

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Connected-component labeling result; label 0 is background, components are
/// numbered 1..K in raster-scan discovery order.
struct LabelImage {
    int width = 0, height = 0;
    std::vector<std::int32_t> labels;
    int num_labels = 0;

    std::int32_t at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
};

/// Otsu threshold over a 256-bin histogram (values clamped and rounded to
/// [0, 255]). Returns the smallest level maximizing the between-class
/// variance; a constant image returns the constant itself, so the
/// "foreground = pixel > level" rule yields an empty mask for it.
inline double otsu_threshold(const GrayImage& img) {
    const auto [mn, mx] = std::minmax_element(img.pixels().begin(), img.pixels().end());
    if (*mn == *mx) return *mn;

    std::array<long long, 256> hist{};
    for (double v : img.pixels()) {
        int b = static_cast<int>(std::lround(v));
        b = std::clamp(b, 0, 255);
        ++hist[static_cast<std::size_t>(b)];
    }
    const long long total = static_cast<long long>(img.pixels().size());
    double sum_all = 0;
    for (int i = 0; i < 256; ++i) sum_all += static_cast<double>(i) * hist[static_cast<std::size_t>(i)];

    long long w0 = 0;
    double sum0 = 0;
    double best = -1;
    int best_level = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[static_cast<std::size_t>(t)];
        sum0 += static_cast<double>(t) * hist[static_cast<std::size_t>(t)];
        const long long w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double var =
            static_cast<double>(w0) * static_cast<double>(w1) * (mu0 - mu1) * (mu0 - mu1);
        if (var > best) {
            best = var;
            best_level = t;
        }
    }
    return best_level;
}

inline BinaryImage binarize_above(const GrayImage& img, double level) {
    BinaryImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixels().size(); ++i)
        out.pixels()[i] = img.pixels()[i] > level ? 1 : 0;
    return out;
}

namespace detail {

// Constant up to accumulated round-off; keeps numerically flat planes from
// being amplified into structure downstream.
inline bool effectively_constant(double lo, double hi) {
    return hi - lo <= 1e-9 * std::max({std::abs(lo), std::abs(hi), 1.0});
}

} // namespace detail

/// Dark-side Otsu binarization: foreground = pixel <= level. A constant image
/// yields an empty mask (it has no dark regions to segment).
inline BinaryImage binarize_dark(const GrayImage& img) {
    BinaryImage out(img.width(), img.height());
    const auto [mn, mx] = std::minmax_element(img.pixels().begin(), img.pixels().end());
    if (detail::effectively_constant(*mn, *mx)) return out;
    const double level = otsu_threshold(img);
    for (std::size_t i = 0; i < img.pixels().size(); ++i)
        out.pixels()[i] = img.pixels()[i] <= level ? 1 : 0;
    return out;
}

inline BinaryImage complement(const BinaryImage& img) {
    BinaryImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixels().size(); ++i)
        out.pixels()[i] = static_cast<std::uint8_t>(1 - img.pixels()[i]);
    return out;
}

inline BinaryImage binary_and(const BinaryImage& a, const BinaryImage& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw std::invalid_argument("binary_and: dimension mismatch");
    BinaryImage out(a.width(), a.height());
    for (std::size_t i = 0; i < out.pixels().size(); ++i)
        out.pixels()[i] = static_cast<std::uint8_t>(a.pixels()[i] & b.pixels()[i]);
    return out;
}

/// Connected components under 4- or 8-connectivity, labeled in raster-scan
/// discovery order.
inline LabelImage connected_components(const BinaryImage& img, int connectivity = 8) {
    if (connectivity != 4 && connectivity != 8)
        throw std::invalid_argument("connected_components: connectivity must be 4 or 8");
    const int w = img.width(), h = img.height();
    LabelImage out;
    out.width = w;
    out.height = h;
    out.labels.assign(static_cast<std::size_t>(w) * h, 0);

    static constexpr int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
    const int ndirs = connectivity == 4 ? 4 : 8;

    std::vector<std::pair<int, int>> stack;
    int next = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!img.at(x, y) || out.at(x, y) != 0) continue;
            ++next;
            out.labels[static_cast<std::size_t>(y) * w + x] = next;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int d = 0; d < ndirs; ++d) {
                    const int nx = cx + dx8[d], ny = cy + dy8[d];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    if (!img.at(nx, ny) || out.at(nx, ny) != 0) continue;
                    out.labels[static_cast<std::size_t>(ny) * w + nx] = next;
                    stack.push_back({nx, ny});
                }
            }
        }
    }
    out.num_labels = next;
    return out;
}

/// Mask of the label with the most pixels; ties go to the smallest label.
inline BinaryImage largest_component(const LabelImage& labels) {
    if (labels.num_labels < 1)
        throw std::invalid_argument("largest_component: no foreground component");
    std::vector<long long> counts(static_cast<std::size_t>(labels.num_labels) + 1, 0);
    for (std::int32_t l : labels.labels) ++counts[static_cast<std::size_t>(l)];
    int best = 1;
    for (int l = 2; l <= labels.num_labels; ++l)
        if (counts[static_cast<std::size_t>(l)] > counts[static_cast<std::size_t>(best)]) best = l;
    BinaryImage out(labels.width, labels.height);
    for (std::size_t i = 0; i < labels.labels.size(); ++i)
        out.pixels()[i] = labels.labels[i] == best ? 1 : 0;
    return out;
}

/// Fills background regions not 4-connected to the image border.
inline BinaryImage fill_holes(const BinaryImage& img) {
    const int w = img.width(), h = img.height();
    std::vector<std::uint8_t> border_bg(static_cast<std::size_t>(w) * h, 0);
    std::vector<std::pair<int, int>> stack;
    auto push = [&](int x, int y) {
        if (x < 0 || x >= w || y < 0 || y >= h) return;
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        if (img.pixels()[i] || border_bg[i]) return;
        border_bg[i] = 1;
        stack.push_back({x, y});
    };
    for (int x = 0; x < w; ++x) {
        push(x, 0);
        push(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        push(0, y);
        push(w - 1, y);
    }
    while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        push(x + 1, y);
        push(x - 1, y);
        push(x, y + 1);
        push(x, y - 1);
    }
    BinaryImage out(w, h);
    for (std::size_t i = 0; i < out.pixels().size(); ++i)
        out.pixels()[i] = img.pixels()[i] ? 1 : (border_bg[i] ? 0 : 1);
    return out;
}

/// One tight inclusive box per label, ordered by label (1..K).
inline std::vector<BBox> bounding_boxes(const LabelImage& labels) {
    std::vector<BBox> boxes(static_cast<std::size_t>(labels.num_labels));
    std::vector<bool> seen(static_cast<std::size_t>(labels.num_labels), false);
    for (int y = 0; y < labels.height; ++y) {
        for (int x = 0; x < labels.width; ++x) {
            const std::int32_t l = labels.at(x, y);
            if (l == 0) continue;
            BBox& b = boxes[static_cast<std::size_t>(l - 1)];
            if (!seen[static_cast<std::size_t>(l - 1)]) {
                b = {x, y, x, y};
                seen[static_cast<std::size_t>(l - 1)] = true;
            } else {
                b.x0 = std::min(b.x0, x);
                b.y0 = std::min(b.y0, y);
                b.x1 = std::max(b.x1, x);
                b.y1 = std::max(b.y1, y);
            }
        }
    }
    return boxes;
}

struct HullResult {
    BinaryImage mask;
    double centroid_x = 0;
    double centroid_y = 0;
};

namespace detail {

inline long long cross(long long ox, long long oy, long long ax, long long ay, long long bx,
                       long long by) {
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

// Monotone chain; returns hull vertices counter-clockwise in the standard
// (y-up) sense. Collinear inputs come back as the two extreme points.
inline std::vector<std::pair<int, int>> convex_hull_points(std::vector<std::pair<int, int>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<std::pair<int, int>> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2].first, hull[k - 2].second, hull[k - 1].first,
                               hull[k - 1].second, pts[i].first, pts[i].second) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2].first, hull[k - 2].second, hull[k - 1].first,
                                   hull[k - 1].second, pts[i].first, pts[i].second) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace detail

/// Convex hull of the foreground pixel centers, rasterized with an inclusive
/// center-in-polygon test, plus the centroid of the rasterized hull mask.
inline HullResult convex_hull_mask(const BinaryImage& img) {
    std::vector<std::pair<int, int>> pts;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (img.at(x, y)) pts.push_back({x, y});
    if (pts.empty()) throw std::invalid_argument("convex_hull_mask: empty input");

    HullResult out{BinaryImage(img.width(), img.height()), 0, 0};
    const std::vector<std::pair<int, int>> hull = detail::convex_hull_points(std::move(pts));

    long long sx = 0, sy = 0, cnt = 0;
    auto mark = [&](int x, int y) {
        out.mask.at(x, y) = 1;
        sx += x;
        sy += y;
        ++cnt;
    };

    if (hull.size() == 1) {
        mark(hull[0].first, hull[0].second);
    } else if (hull.size() == 2) {
        const auto [ax, ay] = hull[0];
        const auto [bx, by] = hull[1];
        const long long dx = bx - ax, dy = by - ay;
        const long long len2 = dx * dx + dy * dy;
        const int x0 = std::min(ax, bx), x1 = std::max(ax, bx);
        const int y0 = std::min(ay, by), y1 = std::max(ay, by);
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const long long c = static_cast<long long>(x - ax) * dy -
                                    static_cast<long long>(y - ay) * dx;
                const long long d = static_cast<long long>(x - ax) * dx +
                                    static_cast<long long>(y - ay) * dy;
                if (c == 0 && d >= 0 && d <= len2) mark(x, y);
            }
    } else {
        int x0 = hull[0].first, x1 = hull[0].first, y0 = hull[0].second, y1 = hull[0].second;
        for (const auto& [px, py] : hull) {
            x0 = std::min(x0, px);
            x1 = std::max(x1, px);
            y0 = std::min(y0, py);
            y1 = std::max(y1, py);
        }
        const std::size_t m = hull.size();
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                bool inside = true;
                for (std::size_t i = 0; i < m && inside; ++i) {
                    const auto& a = hull[i];
                    const auto& b = hull[(i + 1) % m];
                    if (detail::cross(a.first, a.second, b.first, b.second, x, y) < 0)
                        inside = false;
                }
                if (inside) mark(x, y);
            }
        }
    }
    out.centroid_x = static_cast<double>(sx) / static_cast<double>(cnt);
    out.centroid_y = static_cast<double>(sy) / static_cast<double>(cnt);
    return out;
}

/// Canny edges: Gaussian smoothing, central-difference gradients, 4-direction
/// non-maximum suppression, double threshold at fractions of the gradient
/// maximum, hysteresis under 8-connectivity.
inline BinaryImage canny(const GrayImage& img, double sigma = 1.0, double lo = 0.1,
                         double hi = 0.3) {
    if (!(lo > 0.0 && lo < hi && hi <= 1.0))
        throw std::invalid_argument("canny: thresholds must satisfy 0 < lo < hi <= 1");
    if (!(sigma >= 0.5)) throw std::invalid_argument("canny: sigma must be >= 0.5");

    const int w = img.width(), h = img.height();

    // Separable Gaussian with mirrored borders.
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * r + 1));
    double ksum = 0;
    for (int i = -r; i <= r; ++i) {
        kernel[static_cast<std::size_t>(i + r)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        ksum += kernel[static_cast<std::size_t>(i + r)];
    }
    for (double& k : kernel) k /= ksum;

    auto mirror = [](int i, int n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
        return i;
    };

    GrayImage tmp(w, h), smooth(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int i = -r; i <= r; ++i)
                acc += kernel[static_cast<std::size_t>(i + r)] * img.at(mirror(x + i, w), y);
            tmp.at(x, y) = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int i = -r; i <= r; ++i)
                acc += kernel[static_cast<std::size_t>(i + r)] * tmp.at(x, mirror(y + i, h));
            smooth.at(x, y) = acc;
        }

    GrayImage gx(w, h), gy(w, h), mag(w, h);
    double gmax = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dx =
                0.5 * (smooth.at(mirror(x + 1, w), y) - smooth.at(mirror(x - 1, w), y));
            const double dy =
                0.5 * (smooth.at(x, mirror(y + 1, h)) - smooth.at(x, mirror(y - 1, h)));
            gx.at(x, y) = dx;
            gy.at(x, y) = dy;
            const double m = std::sqrt(dx * dx + dy * dy);
            mag.at(x, y) = m;
            gmax = std::max(gmax, m);
        }
    BinaryImage edges(w, h);
    if (gmax == 0.0) return edges;

    const double tlo = lo * gmax, thi = hi * gmax;

    // Non-maximum suppression over directions quantized to 0/45/90/135 deg.
    BinaryImage strong(w, h), weak(w, h);
    auto mag_at = [&](int x, int y) {
        if (x < 0 || x >= w || y < 0 || y >= h) return 0.0;
        return mag.at(x, y);
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double m = mag.at(x, y);
            if (m < tlo) continue;
            double ang = std::atan2(gy.at(x, y), gx.at(x, y));
            if (ang < 0) ang += std::numbers::pi;
            const int d = static_cast<int>(std::lround(ang / (std::numbers::pi / 4.0))) % 4;
            double m1, m2;
            switch (d) {
                case 0: m1 = mag_at(x + 1, y), m2 = mag_at(x - 1, y); break;
                case 1: m1 = mag_at(x + 1, y + 1), m2 = mag_at(x - 1, y - 1); break;
                case 2: m1 = mag_at(x, y + 1), m2 = mag_at(x, y - 1); break;
                default: m1 = mag_at(x - 1, y + 1), m2 = mag_at(x + 1, y - 1); break;
            }
            if (m >= m1 && m >= m2) {
                weak.at(x, y) = 1;
                if (m >= thi) strong.at(x, y) = 1;
            }
        }
    }

    // Hysteresis: grow strong seeds through weak pixels, 8-connected.
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (strong.at(x, y)) {
                edges.at(x, y) = 1;
                stack.push_back({x, y});
            }
    static constexpr int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
    while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int d = 0; d < 8; ++d) {
            const int nx = cx + dx8[d], ny = cy + dy8[d];
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            if (weak.at(nx, ny) && !edges.at(nx, ny)) {
                edges.at(nx, ny) = 1;
                stack.push_back({nx, ny});
            }
        }
    }
    return edges;
}

/// Renders a binary image as a 0/255 grayscale plane.
inline GrayImage to_gray255(const BinaryImage& img) {
    GrayImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixels().size(); ++i)
        out.pixels()[i] = img.pixels()[i] ? 255.0 : 0.0;
    return out;
}

} // namespace amfm
