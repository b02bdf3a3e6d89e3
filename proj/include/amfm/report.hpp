#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amfm/attention.hpp"
#include "amfm/detect.hpp"

namespace amfm {

/// One detection with its classification outcome. Faces carry votes and patch
/// counts; back-of-head detections carry a direction only when a skin box was
/// associated. abstain_reason is set when no direction could be produced.
struct ReportedDetection {
    Detection detection;
    std::optional<Direction> direction;
    std::optional<DirectionVotes> votes;
    std::optional<PatchCounts> patch_counts;
    std::string abstain_reason;
};

struct FrameReport {
    std::int64_t frame = 0;
    std::vector<ReportedDetection> detections;
    bool degenerate = false;   // input too small for every detector
    double demod_seconds = 0;  // timings are diagnostics only, never serialized
    double analysis_seconds = 0;
};

namespace detail {

inline void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

inline void append_box(std::string& out, const BBox& b) {
    out += '[';
    out += std::to_string(b.x0);
    out += ',';
    out += std::to_string(b.y0);
    out += ',';
    out += std::to_string(b.x1);
    out += ',';
    out += std::to_string(b.y1);
    out += ']';
}

} // namespace detail

/// Serializes one frame as a single-line JSON object:
/// {"frame":id,"detections":[{"kind","box","direction","votes","patch_counts","score"}]}
/// Field order and float formatting are fixed, so equal reports serialize to
/// equal bytes.
inline std::string to_json_line(const FrameReport& report) {
    std::string out = "{\"frame\":" + std::to_string(report.frame) + ",\"detections\":[";
    bool first = true;
    for (const ReportedDetection& rd : report.detections) {
        if (!first) out += ',';
        first = false;
        out += "{\"kind\":\"";
        out += rd.detection.kind == DetectionKind::Face ? "face" : "back_of_head";
        out += "\",\"box\":";
        detail::append_box(out, rd.detection.box);
        out += ",\"direction\":";
        if (rd.direction) {
            out += '"';
            out += to_string(*rd.direction);
            out += '"';
        } else {
            out += "null";
        }
        out += ",\"votes\":";
        if (rd.votes) {
            out += "{\"upper\":\"";
            out += to_string(rd.votes->upper);
            out += "\",\"lower\":\"";
            out += to_string(rd.votes->lower);
            out += "\",\"whole\":\"";
            out += to_string(rd.votes->whole);
            out += "\"}";
        } else {
            out += "null";
        }
        out += ",\"patch_counts\":";
        if (rd.patch_counts) {
            out += "{\"ul\":" + std::to_string(rd.patch_counts->ul) +
                   ",\"ur\":" + std::to_string(rd.patch_counts->ur) +
                   ",\"ll\":" + std::to_string(rd.patch_counts->ll) +
                   ",\"lr\":" + std::to_string(rd.patch_counts->lr) + "}";
        } else {
            out += "null";
        }
        out += ",\"score\":";
        detail::append_double(out, rd.detection.score);
        out += '}';
    }
    out += "]}";
    return out;
}

} // namespace amfm
