#pragma once

// Line-delimited record schemas shared by the CLI and the test harnesses:
// prediction records, ground-truth steps, and report rendering.

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "guikit/action.hpp"
#include "guikit/adapters.hpp"
#include "guikit/evaluate.hpp"

namespace guikit {

struct PredictionRecord {
    std::string episode_id;
    std::string step_id;
    RawPrediction raw;
};

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::system_error(errno, std::generic_category(), path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

inline PredictionRecord prediction_from_json(const nlohmann::json& j,
                                             std::optional<SourceFormat> default_format,
                                             bool default_low_instruction) {
    PredictionRecord rec;
    rec.episode_id = j.value("episode_id", std::string());
    rec.step_id = j.value("step_id", std::string());
    rec.raw.text = j.at("text").get<std::string>();
    if (j.contains("format")) {
        auto f = source_format_from(j["format"].get<std::string>());
        if (!f) throw std::invalid_argument("unknown format: " + j["format"].dump());
        rec.raw.format = *f;
    } else if (default_format) {
        rec.raw.format = *default_format;
    } else {
        throw std::invalid_argument("record missing format and no --format given");
    }
    if (j.contains("screen")) {
        const auto& s = j["screen"];
        rec.raw.screen = ScreenSize{s.at("width_px").get<int>(), s.at("height_px").get<int>()};
    }
    rec.raw.low_instruction_mode = j.value("low_instruction_mode", default_low_instruction);
    return rec;
}

inline GroundTruthStep ground_truth_from_json(const nlohmann::json& j) {
    GroundTruthStep gt;
    gt.episode_id = j.value("episode_id", std::string());
    gt.step_id = j.value("step_id", std::string());
    ActionOptions opts;
    opts.evaluation_extensions = true;
    const auto& action = j.at("action");
    gt.gt_action = parse_unified(action.is_string() ? action.get<std::string>() : action.dump(),
                                 opts);
    if (j.contains("bbox")) {
        const auto& b = j["bbox"];
        if (!b.is_array() || b.size() != 4)
            throw std::invalid_argument("bbox must be [x_min,y_min,x_max,y_max]");
        BBox box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
        // Pixel-space boxes carry the screenshot size; convert at ingestion.
        if (j.contains("screen")) {
            const auto& s = j["screen"];
            box = normalize_bbox(box.x_min, box.y_min, box.x_max, box.y_max,
                                 s.at("width_px").get<int>(), s.at("height_px").get<int>());
        }
        if (box.x_min > box.x_max || box.y_min > box.y_max)
            throw std::invalid_argument("bbox min exceeds max");
        gt.gt_bbox = box;
    }
    if (j.contains("low_level_instruction"))
        gt.low_level_instruction = j["low_level_instruction"].get<std::string>();
    return gt;
}

inline nlohmann::ordered_json report_to_json(const BenchmarkReport& r) {
    nlohmann::ordered_json j;
    j["n_steps"] = r.n_steps;
    j["tm_count"] = r.tm_count;
    j["em_count"] = r.em_count;
    j["tm_rate"] = r.tm_rate;
    j["em_rate"] = r.em_rate;
    nlohmann::ordered_json by_type = nlohmann::ordered_json::object();
    for (const auto& [name, b] : r.by_type) {
        nlohmann::ordered_json tj;
        tj["n"] = b.n;
        tj["tm"] = b.tm;
        tj["em"] = b.em;
        by_type[name] = tj;
    }
    j["by_type"] = by_type;
    return j;
}

}  // namespace guikit
