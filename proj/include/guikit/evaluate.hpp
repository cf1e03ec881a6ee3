#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "guikit/action.hpp"
#include "guikit/adapters.hpp"

namespace guikit {

// Axis-aligned box in normalized [0,1000] units, inclusive bounds.
struct BBox {
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

    bool contains(Point p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
    double area() const { return (x_max - x_min) * (y_max - y_min); }
};

struct GroundTruthStep {
    std::string episode_id;
    std::string step_id;
    UnifiedAction gt_action;
    std::optional<BBox> gt_bbox;  // present only for point-bearing actions
    std::optional<std::string> low_level_instruction;
};

struct StepEvaluation {
    bool type_match = false;
    bool exact_match = false;
    std::string failure_reason;
    bool status_compound = false;  // action carried a non-continue STATUS alongside a payload
};

struct EvalOptions {
    // Fallback spatial tolerance (normalized units) when no bbox is available.
    double point_tolerance = 140.0;
};

// Normalization applied before comparing TYPE / Bbox2Text strings: trim
// surrounding whitespace, fold ASCII case. Inputs are assumed NFC.
inline std::string normalize_text(const std::string& s) {
    size_t b = 0, e = s.size();
    auto is_ws = [](unsigned char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r';
    };
    while (b < e && is_ws(s[b])) ++b;
    while (e > b && is_ws(s[e - 1])) --e;
    std::string out = s.substr(b, e - b);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Point correctness: inside the ground-truth bbox when one exists, otherwise
// within Euclidean tolerance of the ground-truth point.
inline bool match_point(Point pred, const GroundTruthStep& gt,
                        const EvalOptions& opts = {}) {
    if (gt.gt_bbox) return gt.gt_bbox->contains(pred);
    if (!gt.gt_action.point) return false;
    const double dx = pred.x - gt.gt_action.point->x;
    const double dy = pred.y - gt.gt_action.point->y;
    return std::sqrt(dx * dx + dy * dy) <= opts.point_tolerance;
}

namespace detail {

// Swipe target as a direction; coordinate targets reduce via dominant axis.
inline std::optional<Direction> effective_direction(const UnifiedAction& a) {
    if (!a.to) return std::nullopt;
    if (const auto* d = std::get_if<Direction>(&*a.to)) return *d;
    if (!a.point) return std::nullopt;
    return swipe_direction(*a.point, std::get<Point>(*a.to));
}

}  // namespace detail

inline StepEvaluation evaluate_action(const UnifiedAction& pred,
                                      const GroundTruthStep& gt,
                                      const EvalOptions& opts = {}) {
    StepEvaluation ev;
    ev.status_compound = is_status_compound(pred) || is_status_compound(gt.gt_action);

    const ActionType pt = action_type_of(pred);
    const ActionType gtt = action_type_of(gt.gt_action);
    if (pt != gtt) {
        ev.failure_reason = std::string("type mismatch: ") + action_type_name(pt) +
                            " vs " + action_type_name(gtt);
        return ev;
    }
    ev.type_match = true;

    auto param_fail = [&](const std::string& why) {
        ev.failure_reason = why;
        return ev;
    };

    switch (pt) {
        case ActionType::click:
        case ActionType::long_press:
            if (!match_point(*pred.point, gt, opts))
                return param_fail("point outside target");
            break;
        case ActionType::swipe: {
            // Direction equality only; adapters synthesize (500,500) starts.
            auto pd = detail::effective_direction(pred);
            auto gd = detail::effective_direction(gt.gt_action);
            if (!pd || !gd || *pd != *gd) return param_fail("swipe direction mismatch");
            break;
        }
        case ActionType::type:
            if (normalize_text(*pred.type_text) != normalize_text(*gt.gt_action.type_text))
                return param_fail("text mismatch");
            break;
        case ActionType::press:
            if (*pred.press != *gt.gt_action.press) return param_fail("press key mismatch");
            break;
        case ActionType::wait:
            if (pred.duration.value_or(200) != gt.gt_action.duration.value_or(200))
                return param_fail("wait duration mismatch");
            break;
        case ActionType::status_only:
            if (pred.status != gt.gt_action.status) return param_fail("status mismatch");
            break;
    }
    ev.exact_match = true;
    return ev;
}

// Dropped and unparseable predictions score TM=EM=false.
inline StepEvaluation evaluate_step(const ConversionOutcome& pred,
                                    const GroundTruthStep& gt,
                                    const EvalOptions& opts = {}) {
    if (pred.status != ConversionOutcome::Status::ok) {
        StepEvaluation ev;
        ev.failure_reason =
            pred.status == ConversionOutcome::Status::dropped
                ? "prediction dropped: " + pred.reason
                : "prediction unparseable: " + pred.reason;
        return ev;
    }
    return evaluate_action(*pred.action, gt, opts);
}

struct TypeBreakdown {
    std::int64_t n = 0;
    std::int64_t tm = 0;
    std::int64_t em = 0;
};

struct BenchmarkReport {
    std::int64_t n_steps = 0;
    std::int64_t tm_count = 0;
    std::int64_t em_count = 0;
    double tm_rate = 0.0;
    double em_rate = 0.0;
    std::map<std::string, TypeBreakdown> by_type;  // keyed by gt action type name
};

struct EvaluatedStep {
    StepEvaluation eval;
    ActionType gt_type = ActionType::status_only;
};

inline BenchmarkReport aggregate(const std::vector<EvaluatedStep>& steps) {
    if (steps.empty()) throw std::invalid_argument("aggregate: empty input");
    BenchmarkReport report;
    report.n_steps = static_cast<std::int64_t>(steps.size());
    for (const auto& s : steps) {
        auto& bucket = report.by_type[action_type_name(s.gt_type)];
        ++bucket.n;
        if (s.eval.type_match) { ++report.tm_count; ++bucket.tm; }
        if (s.eval.exact_match) { ++report.em_count; ++bucket.em; }
    }
    report.tm_rate = static_cast<double>(report.tm_count) / report.n_steps;
    report.em_rate = static_cast<double>(report.em_count) / report.n_steps;
    return report;
}

// --- Grounding tasks ---

inline bool eval_grounding_point(Point pred, const BBox& gt_bbox) {
    return gt_bbox.contains(pred);
}

inline double iou(const BBox& a, const BBox& b) {
    const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

inline bool eval_grounding_bbox(const BBox& pred, const BBox& gt) {
    return iou(pred, gt) >= 0.5;
}

inline bool eval_bbox2text(const std::string& pred, const std::string& gt) {
    return normalize_text(pred) == normalize_text(gt);
}

// Pixel-space benchmark bboxes are converted to [0,1000] units at ingestion.
inline BBox normalize_bbox(double x_min, double y_min, double x_max, double y_max,
                           int width_px, int height_px) {
    if (width_px <= 0 || height_px <= 0)
        throw std::invalid_argument("normalize_bbox: non-positive screen size");
    const double sx = 1000.0 / width_px;
    const double sy = 1000.0 / height_px;
    return BBox{x_min * sx, y_min * sy, x_max * sx, y_max * sy};
}

}  // namespace guikit
