#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "amfm/attention.hpp"
#include "amfm/color.hpp"
#include "amfm/demod.hpp"
#include "amfm/detect.hpp"
#include "amfm/gabor.hpp"
#include "amfm/knn.hpp"
#include "amfm/report.hpp"
#include "amfm/skin.hpp"

namespace amfm {

enum class ClassifierKind { Majority, Fig412 };

/// All tunables of the frame pipeline, defaulted to the design values.
struct PipelineConfig {
    int block_size = 60;
    int stride = 30;
    int head_window = 200;
    int top_columns = 60;
    int top_rows = 7;
    double canny_sigma = 1.0;
    double canny_lo = 0.1;
    double canny_hi = 0.3;
    double skin_fraction = 0.25;
    int min_skin_area = 100;
    ClassifierKind classifier = ClassifierKind::Majority;
    int threads = 0; // 0 = hardware concurrency
};

/// Full per-frame analysis: demodulation, AM/FM images, face detection with
/// per-face direction, back-of-head detection with the away-facing rule.
/// Stage failures are recorded per detection as abstains; the frame never
/// aborts.
inline FrameReport analyze_frame(const RgbImage& rgb, const KnnModel& model,
                                 const Filterbank& bank, const PipelineConfig& cfg = {},
                                 std::int64_t frame_id = 0) {
    using Clock = std::chrono::steady_clock;
    FrameReport report;
    report.frame = frame_id;

    const bool face_path = rgb.width() >= cfg.block_size && rgb.height() >= cfg.block_size;
    const bool head_path = rgb.width() >= cfg.head_window && rgb.height() >= cfg.head_window;
    const int side = bank.max_kernel_radius() * 2 + 1;
    const bool demod_ok =
        rgb.width() >= std::max(side, 8) && rgb.height() >= std::max(side, 8);
    if (!demod_ok || (!face_path && !head_path)) {
        report.degenerate = true;
        return report;
    }

    const auto t0 = Clock::now();
    const GrayImage gray = to_gray(rgb);
    const AnalyticImage asig = analytic_image(gray);
    const AmFmField field = demodulate_frame(asig, bank, Selection::all(), cfg.threads);
    const GrayImage am = am_image(field);
    const GrayImage fm = fm_image(field);
    const auto t1 = Clock::now();
    report.demod_seconds = std::chrono::duration<double>(t1 - t0).count();

    if (face_path) {
        const std::vector<Detection> faces =
            face_detect(rgb, fm, model, cfg.skin_fraction, cfg.block_size, cfg.stride);
        for (const Detection& det : faces) {
            ReportedDetection rd;
            rd.detection = det;
            const PatchResult pr = patch_counts(crop(fm, det.box), cfg.top_rows);
            if (!pr.ok) {
                rd.abstain_reason = pr.abstain_reason;
            } else {
                rd.patch_counts = pr.counts;
                if (cfg.classifier == ClassifierKind::Majority) {
                    const auto [dir, votes] = majority_direction(pr.counts);
                    rd.direction = dir;
                    rd.votes = votes;
                } else {
                    rd.direction = classify_face_direction_fig412(pr.counts.ul, pr.counts.ll,
                                                                  pr.counts.ur, pr.counts.lr);
                    // Votes still reported for diagnostics.
                    rd.votes = majority_direction(pr.counts).second;
                }
            }
            report.detections.push_back(std::move(rd));
        }
    }

    if (head_path) {
        HeadParams hp;
        hp.window = cfg.head_window;
        hp.columns = cfg.top_columns;
        hp.canny_sigma = cfg.canny_sigma;
        hp.canny_lo = cfg.canny_lo;
        hp.canny_hi = cfg.canny_hi;
        if (const auto head = back_of_head_detect(am, fm, hp)) {
            ReportedDetection rd;
            rd.detection = *head;
            const std::vector<BBox> boxes = skin_boxes(skin_mask(rgb), cfg.min_skin_area);
            if (const auto face_box = associate_face_to_head(boxes, head->box)) {
                rd.direction = away_direction(*face_box, head->box);
            } else {
                rd.abstain_reason = "no overlapping skin box";
            }
            report.detections.push_back(std::move(rd));
        }
    }

    report.analysis_seconds = std::chrono::duration<double>(Clock::now() - t1).count();
    return report;
}

} // namespace amfm
