#pragma once

#include <string>

#include "guikit/action.hpp"
#include "guikit/evaluate.hpp"

namespace guikit {

// Two-stage reward: format gate first, then semantic correctness.
// value -1: fails the format/schema check
// value  0: well-formed but semantically wrong
// value  1: well-formed exact match (points must fall inside the gt bbox)
struct RewardSignal {
    int value = 0;
    enum class Stage { format, semantic } stage = Stage::semantic;
    std::string detail;
};

struct RewardOptions {
    // RFT samples whose schema marks "thought" as required.
    bool require_thought = false;
    EvalOptions eval;
};

inline RewardSignal score(const std::string& raw_output, const GroundTruthStep& gt,
                          const RewardOptions& opts = {}) {
    ActionOptions parse_opts;
    parse_opts.require_thought = opts.require_thought;

    UnifiedAction action;
    try {
        action = parse_unified(raw_output, parse_opts);
    } catch (const ActionError& e) {
        return {-1, RewardSignal::Stage::format, e.what()};
    }

    const StepEvaluation ev = evaluate_action(action, gt, opts.eval);
    if (ev.exact_match) return {1, RewardSignal::Stage::semantic, ""};
    return {0, RewardSignal::Stage::semantic, ev.failure_reason};
}

}  // namespace guikit
