#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "amfm/color.hpp"
#include "amfm/demod.hpp"
#include "amfm/detect.hpp"
#include "amfm/gabor.hpp"
#include "amfm/image.hpp"
#include "amfm/knn.hpp"
#include "amfm/pipeline.hpp"
#include "amfm/segment.hpp"

namespace amfm::phantom {

/// Deterministic per-index jitter in [0, range). Splitmix-style mixing, fixed
/// constants, so phantoms are identical across runs and platforms.
inline std::uint32_t hash_jitter(std::uint32_t i, std::uint32_t salt, std::uint32_t range) {
    std::uint64_t z = (static_cast<std::uint64_t>(i) << 32) ^ (salt * 0x9e3779b97f4a7c15ull);
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return static_cast<std::uint32_t>(z % range);
}

inline RgbImage mirror_horizontal(const RgbImage& img) {
    RgbImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.at(x, y) = img.at(img.width() - 1 - x, y);
    return out;
}

inline GrayImage mirror_horizontal(const GrayImage& img) {
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.at(x, y) = img.at(img.width() - 1 - x, y);
    return out;
}

// ---------------------------------------------------------------------------
// Face frame phantom: an elliptical skin-colored face on a darker gray
// background with dark feature discs in one half. Exercises the detection
// path: skin mask, block classification, merge, patch analysis and report
// assembly.
// ---------------------------------------------------------------------------

struct FacePhantom {
    RgbImage frame;
    BBox face_box;   // ellipse bounding box
    bool features_left = true;
};

inline FacePhantom make_face_phantom(int frame_w = 480, int frame_h = 480,
                                     bool features_left = true) {
    const Rgb8 bg{90, 90, 90};
    const Rgb8 skin{170, 140, 120};
    const Rgb8 dark{15, 10, 8};

    FacePhantom out{RgbImage(frame_w, frame_h, bg), BBox{}, features_left};
    const int cx = frame_w / 2, cy = frame_h / 2;
    const int ax = 62, ay = 78;
    out.face_box = {cx - ax, cy - ay, cx + ax, cy + ay};

    for (int y = out.face_box.y0; y <= out.face_box.y1; ++y)
        for (int x = out.face_box.x0; x <= out.face_box.x1; ++x) {
            const double ex = (x - cx) / static_cast<double>(ax);
            const double ey = (y - cy) / static_cast<double>(ay);
            if (ex * ex + ey * ey <= 1.0) out.frame.at(x, y) = skin;
        }

    auto disc = [&](int dcx, int dcy, int r) {
        for (int y = dcy - r; y <= dcy + r; ++y)
            for (int x = dcx - r; x <= dcx + r; ++x)
                if ((x - dcx) * (x - dcx) + (y - dcy) * (y - dcy) <= r * r)
                    out.frame.at(x, y) = dark;
    };
    const int side = features_left ? -1 : +1;
    disc(cx + side * 28, cy - 28, 9); // eye
    disc(cx + side * 32, cy + 2, 9);  // nose shadow
    disc(cx + side * 26, cy + 32, 9); // mouth corner
    return out;
}

// ---------------------------------------------------------------------------
// Face FM-block phantom for the direction classifiers: a constructed FM plane
// whose dark set is exactly known, with a closed elliptical outline (so the
// component / fill / hull chain recovers the face footprint and centroid) and
// feature bars in one half that dominate the retained rows. Every stage's
// intended output is computable by direct enumeration.
// ---------------------------------------------------------------------------

inline GrayImage make_face_fm_block(int size = 180, bool features_left = true) {
    GrayImage block(size, size, 255.0);
    const int cx = size / 2, cy = size / 2;
    const int ax = size * 7 / 18, ay = size * 4 / 9; // 70 / 80 at size 180
    const double dark = 20.0;

    // Closed elliptical outline, 6 px thick.
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double ex = (x - cx) / static_cast<double>(ax);
            const double ey = (y - cy) / static_cast<double>(ay);
            const double r2 = ex * ex + ey * ey;
            const double inner_x = (x - cx) / static_cast<double>(ax - 6);
            const double inner_y = (y - cy) / static_cast<double>(ay - 6);
            if (r2 <= 1.0 && inner_x * inner_x + inner_y * inner_y >= 1.0)
                block.at(x, y) = dark;
        }

    // Feature bars: the longest rows in the block, all in one half.
    auto bar = [&](int bx0, int by0, int bw, int bh) {
        for (int y = by0; y < by0 + bh; ++y)
            for (int x = bx0; x < bx0 + bw; ++x) block.at(x, y) = dark;
    };
    const int sgn = features_left ? -1 : +1;
    auto left_edge = [&](int bw, int off) { return sgn < 0 ? cx - off - bw : cx + off; };
    bar(left_edge(58, 4), cy - 33, 58, 7);  // eye / eyebrow
    bar(left_edge(50, 4), cy - 3, 50, 7);   // nose shadow
    bar(left_edge(56, 4), cy + 27, 56, 7);  // mouth
    return block;
}

// ---------------------------------------------------------------------------
// Back-of-head phantom. The "hair" is a dark blob with bright strands every
// 4th column (a texture the filterbank resolves as strong vertical structure)
// and a spiky, deterministic per-column height profile so no two column
// counts tie over long runs. An optional skin blob overlapping one side
// provides the away-facing association target.
// ---------------------------------------------------------------------------

struct HeadPhantom {
    RgbImage frame;
    BBox head_box;        // hair blob bounding box (truth)
    BBox skin_blob;       // skin rectangle, {0,0,0,0} when absent
    bool skin_right = true;
};

/// Per-column hair height for a blob of the given height; irregular but
/// deterministic, with tall columns spread across the whole width.
inline int hair_height(int col, int height) {
    const int base = height - 26;
    const int spike = static_cast<int>(hash_jitter(static_cast<std::uint32_t>(col), 17u, 27u));
    return base + spike;
}

inline HeadPhantom make_head_phantom(int frame_w = 480, int frame_h = 480, int block = 220,
                                     bool with_skin = true, bool skin_right = true,
                                     int shift_x = 0) {
    const Rgb8 bg{130, 130, 130};
    const Rgb8 hair{0, 0, 0};
    const Rgb8 strand{255, 245, 235};
    const Rgb8 skin{170, 140, 120};

    HeadPhantom out{RgbImage(frame_w, frame_h, bg), BBox{}, BBox{}, skin_right};
    const int x0 = (frame_w - block) / 2 + shift_x;
    const int y1 = (frame_h + block) / 2; // bottom row of the blob
    out.head_box = {x0, y1 - block + 1, x0 + block - 1, y1};

    for (int c = 0; c < block; ++c) {
        const int h = hair_height(c, block);
        const bool lit = (c % 4 == 2) && c >= 4 && c < block - 4;
        for (int y = y1 - h + 1; y <= y1; ++y)
            out.frame.at(x0 + c, y) = lit && y <= y1 - 2 ? strand : hair;
    }

    if (with_skin) {
        // Skin hangs off the blob's lower corner on the facing side: it
        // overlaps the detected hair region while carving only a thin bottom
        // strip, so the density scan stays put.
        const int sw = 80, sh = 70;
        const int sx0 = skin_right ? out.head_box.x1 - 119 : out.head_box.x0 + 40;
        const int sy0 = out.head_box.y1 - 12;
        out.skin_blob = {sx0, sy0, sx0 + sw - 1, sy0 + sh - 1};
        for (int y = out.skin_blob.y0; y <= out.skin_blob.y1; ++y)
            for (int x = out.skin_blob.x0; x <= out.skin_blob.x1; ++x)
                if (x >= 0 && x < frame_w && y >= 0 && y < frame_h) out.frame.at(x, y) = skin;
    }
    return out;
}

/// Direct AM/FM planes with every stage's intended output known: the AM plane
/// darkens exactly over the hair blob, the FM plane carries dark vertical
/// lines inside it.
struct HeadPlanes {
    GrayImage am;
    GrayImage fm;
    BBox head_box;
};

inline HeadPlanes make_head_planes(int frame_w = 480, int frame_h = 480, int block = 220,
                                   int shift_x = 0, int shift_y = 0) {
    HeadPlanes out{GrayImage(frame_w, frame_h, 200.0), GrayImage(frame_w, frame_h, 255.0),
                   BBox{}};
    const int x0 = (frame_w - block) / 2 + shift_x;
    const int y1 = (frame_h + block) / 2 + shift_y;
    out.head_box = {x0, y1 - block + 1, x0 + block - 1, y1};

    for (int c = 0; c < block; ++c) {
        const int h = hair_height(c, block);
        for (int y = y1 - h + 1; y <= y1; ++y) out.am.at(x0 + c, y) = 40.0;
    }
    for (int c = 3; c < block - 3; c += 4) {
        const int h = hair_height(c, block) - 8;
        for (int y = y1 - h + 1; y <= y1 - 3; ++y) out.fm.at(x0 + c, y) = 10.0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Toy KNN model built from the phantom frames themselves: each block of each
// frame's FM image becomes a sample, labeled Face when most of it overlaps the
// face box. Samples are stored in triplicate so a block queried on its own
// frame matches its three copies at distance zero and votes unanimously.
// ---------------------------------------------------------------------------

inline KnnModel make_toy_model(const std::vector<std::pair<RgbImage, BBox>>& frames,
                               const Filterbank& bank, const PipelineConfig& cfg = {}) {
    KnnModel model(3, cfg.block_size, cfg.block_size);
    for (const auto& [rgb, face_box] : frames) {
        const AnalyticImage asig = analytic_image(to_gray(rgb));
        const GrayImage fm = fm_image(demodulate_frame(asig, bank, Selection::all(), cfg.threads));
        for (const BBox& b : extract_blocks(fm.width(), fm.height(), cfg.block_size, cfg.stride)) {
            const bool face = b.intersection_area(face_box) * 2 >= b.area();
            const GrayImage blk = crop(fm, b);
            std::vector<std::uint8_t> values(model.dimension());
            for (std::size_t i = 0; i < values.size(); ++i)
                values[i] = static_cast<std::uint8_t>(std::lround(
                    std::min(255.0, std::max(0.0, blk.pixels()[i]))));
            for (int copy = 0; copy < 3; ++copy)
                model.add_sample(face ? BlockLabel::Face : BlockLabel::NonFace,
                                 std::vector<std::uint8_t>(values));
        }
    }
    return model;
}

} // namespace amfm::phantom
