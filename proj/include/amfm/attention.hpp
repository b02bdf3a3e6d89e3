#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "amfm/image.hpp"
#include "amfm/segment.hpp"

namespace amfm {

enum class Direction { Left, Right };

inline const char* to_string(Direction d) { return d == Direction::Left ? "left" : "right"; }

/// Foreground-pixel counts for the four face patches.
struct PatchCounts {
    long long ul = 0, ur = 0, ll = 0, lr = 0;
};

/// Per-patch left/right vote: strictly more pixels on the right means Right;
/// ties fall to Left (the diagonal is not "above y = x").
inline Direction classify_patch(long long left_count, long long right_count) {
    return right_count > left_count ? Direction::Right : Direction::Left;
}

struct DirectionVotes {
    Direction upper = Direction::Left;
    Direction lower = Direction::Left;
    Direction whole = Direction::Left;
};

/// Majority of the upper-face, lower-face and whole-face patch votes. Three
/// binary votes cannot tie.
inline std::pair<Direction, DirectionVotes> majority_direction(const PatchCounts& pc) {
    DirectionVotes votes;
    votes.upper = classify_patch(pc.ul, pc.ur);
    votes.lower = classify_patch(pc.ll, pc.lr);
    votes.whole = classify_patch(pc.ul + pc.ll, pc.ur + pc.lr);
    const int rights = (votes.upper == Direction::Right) + (votes.lower == Direction::Right) +
                       (votes.whole == Direction::Right);
    return {rights >= 2 ? Direction::Right : Direction::Left, votes};
}

/// Literal transcription of the branch-table classifier. The case absent from
/// the original table (ul < ur and ll < lr, all mass on the right) returns
/// Right.
inline Direction classify_face_direction_fig412(long long ul, long long ll, long long ur,
                                                long long lr) {
    if (ul >= ur) {
        if (ll >= lr) return Direction::Left;
        if (ul + ll >= ur + lr) return Direction::Right;
        return Direction::Left;
    }
    if (ll >= lr) {
        if (ul + ll >= ur + lr) return Direction::Left;
        return Direction::Right;
    }
    return Direction::Right;
}

/// Away-facing rule: the person looks Right iff the face (skin) box centroid
/// sits strictly right of the head box centroid.
inline Direction away_direction(const BBox& face_box, const BBox& head_box) {
    return face_box.center_x() > head_box.center_x() ? Direction::Right : Direction::Left;
}

/// The skin box with the largest positive overlap with the head box; ties go
/// to the earlier list entry.
inline std::optional<BBox> associate_face_to_head(const std::vector<BBox>& skin_boxes,
                                                  const BBox& head_box) {
    std::optional<BBox> best;
    long long best_area = 0;
    for (const BBox& b : skin_boxes) {
        const long long inter = b.intersection_area(head_box);
        if (inter > best_area) {
            best_area = inter;
            best = b;
        }
    }
    return best;
}

/// Patch analysis result. ok == false means the classifier abstained; the
/// reason names the stage that came up empty.
struct PatchResult {
    bool ok = false;
    std::string abstain_reason;
    PatchCounts counts;
    double centroid_x = 0;
    double centroid_y = 0;
    double threshold = 0; // Otsu level used for the dark-side binarization
};

/// Face-patch extraction from the FM block of a detected face:
/// dark-side binarization, largest component, hole fill, convex hull and its
/// centroid, features restricted to the hull, top rows kept, quadrant counts
/// split at the centroid (pixels exactly on a split line go Left / Upper).
inline PatchResult patch_counts(const GrayImage& fm_block, int top_rows = 7) {
    PatchResult out;

    const BinaryImage features = binarize_dark(fm_block);
    if (features.count() == 0) {
        out.abstain_reason = "no foreground after binarization";
        return out;
    }
    out.threshold = otsu_threshold(fm_block);

    const LabelImage labels = connected_components(features, 8);
    const BinaryImage largest = largest_component(labels);
    const BinaryImage filled = fill_holes(largest);
    const HullResult hull = convex_hull_mask(filled);
    out.centroid_x = hull.centroid_x;
    out.centroid_y = hull.centroid_y;

    const BinaryImage restricted = binary_and(features, hull.mask);
    if (restricted.count() == 0) {
        out.abstain_reason = "no features inside hull";
        return out;
    }

    // Keep the rows with the largest foreground counts; ties go topmost.
    const int w = restricted.width(), h = restricted.height();
    std::vector<long long> row_counts(static_cast<std::size_t>(h), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) row_counts[static_cast<std::size_t>(y)] += restricted.at(x, y);
    std::vector<int> order(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) order[static_cast<std::size_t>(y)] = y;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (row_counts[static_cast<std::size_t>(a)] != row_counts[static_cast<std::size_t>(b)])
            return row_counts[static_cast<std::size_t>(a)] > row_counts[static_cast<std::size_t>(b)];
        return a < b;
    });
    std::vector<std::uint8_t> keep(static_cast<std::size_t>(h), 0);
    for (int i = 0; i < std::min(top_rows, h); ++i)
        keep[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;

    for (int y = 0; y < h; ++y) {
        if (!keep[static_cast<std::size_t>(y)]) continue;
        for (int x = 0; x < w; ++x) {
            if (!restricted.at(x, y)) continue;
            const bool left = x <= out.centroid_x;
            const bool upper = y <= out.centroid_y;
            if (upper)
                (left ? out.counts.ul : out.counts.ur) += 1;
            else
                (left ? out.counts.ll : out.counts.lr) += 1;
        }
    }
    if (out.counts.ul + out.counts.ur + out.counts.ll + out.counts.lr == 0) {
        out.abstain_reason = "no features in retained rows";
        return out;
    }
    out.ok = true;
    return out;
}

} // namespace amfm
