// Command-line front end: validate unified actions, convert baseline
// predictions, score benchmarks, compute rewards/advantages, run the rollout
// simulator. All dataset I/O is line-delimited JSON.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "guikit/action.hpp"
#include "guikit/adapters.hpp"
#include "guikit/evaluate.hpp"
#include "guikit/grpo.hpp"
#include "guikit/records.hpp"
#include "guikit/reward.hpp"
#include "guikit/sim.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitEnv = 2;

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

void emit_manifest(const std::string& command, const std::vector<std::string>& inputs,
                   const nlohmann::ordered_json& resolved_config) {
    nlohmann::ordered_json m;
    m["command"] = command;
    m["inputs"] = inputs;
    char digest[32];
    std::snprintf(digest, sizeof(digest), "%016llx",
                  static_cast<unsigned long long>(fnv1a(resolved_config.dump())));
    m["config_digest"] = digest;
    m["tool_version"] = kVersion;
    m["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    std::cerr << m.dump() << "\n";
}

struct Output {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw std::system_error(errno, std::generic_category(), path);
            stream = &file;
        }
    }
    std::ostream& out() { return *stream; }
};

std::optional<guikit::SourceFormat> parse_format_flag(const std::string& flag) {
    if (flag.empty()) return std::nullopt;
    auto f = guikit::source_format_from(flag);
    if (!f) throw CLI::ValidationError("--format", "unknown format " + flag);
    return f;
}

std::optional<guikit::ScreenSize> parse_screen_flag(const std::string& flag) {
    if (flag.empty()) return std::nullopt;
    int w = 0, h = 0;
    char x = 0;
    std::istringstream ss(flag);
    if (!(ss >> w >> x >> h) || x != 'x' || w <= 0 || h <= 0)
        throw CLI::ValidationError("--screen", "expected WxH, got " + flag);
    return guikit::ScreenSize{w, h};
}

int cmd_validate(const std::string& path, const std::string& out_path) {
    std::vector<std::string> lines;
    try {
        lines = guikit::read_lines(path);
    } catch (const std::system_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEnv;
    }
    Output out(out_path);
    bool any_invalid = false;
    for (size_t i = 0; i < lines.size(); ++i) {
        const auto report = guikit::validate(lines[i]);
        const char* verdict = report.verdict == guikit::Verdict::valid ? "valid"
                              : report.verdict == guikit::Verdict::format_error
                                  ? "format_error"
                                  : "schema_violation";
        out.out() << (i + 1) << "\t" << verdict;
        if (!report.detail.empty()) out.out() << "\t" << report.detail;
        out.out() << "\n";
        if (report.verdict != guikit::Verdict::valid) any_invalid = true;
    }
    emit_manifest("validate", {path}, {{"path", path}});
    return any_invalid ? kExitDomain : kExitOk;
}

int cmd_convert(const std::string& path, const std::string& out_path,
                const std::string& format_flag, bool low_instruction,
                const std::string& screen_flag) {
    const auto default_format = parse_format_flag(format_flag);
    const auto default_screen = parse_screen_flag(screen_flag);
    std::vector<std::string> lines;
    try {
        lines = guikit::read_lines(path);
    } catch (const std::system_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEnv;
    }
    Output out(out_path);
    guikit::ActionOptions eval_ext;
    eval_ext.evaluation_extensions = true;
    bool any_failed = false;
    for (const auto& line : lines) {
        nlohmann::ordered_json rec_out;
        try {
            auto j = nlohmann::json::parse(line);
            auto rec = guikit::prediction_from_json(j, default_format, low_instruction);
            if (!rec.raw.screen) rec.raw.screen = default_screen;
            rec_out["episode_id"] = rec.episode_id;
            rec_out["step_id"] = rec.step_id;
            const auto outcome = guikit::convert(rec.raw);
            switch (outcome.status) {
                case guikit::ConversionOutcome::Status::ok:
                    rec_out["action"] = guikit::serialize_compact(*outcome.action, eval_ext);
                    break;
                case guikit::ConversionOutcome::Status::dropped:
                    rec_out["dropped"] = true;
                    rec_out["reason"] = outcome.reason;
                    break;
                case guikit::ConversionOutcome::Status::parse_failure:
                    rec_out["parse_failure"] = true;
                    rec_out["reason"] = outcome.reason;
                    any_failed = true;
                    break;
            }
        } catch (const std::exception& e) {
            rec_out["parse_failure"] = true;
            rec_out["reason"] = e.what();
            any_failed = true;
        }
        out.out() << rec_out.dump() << "\n";
    }
    emit_manifest("convert", {path},
                  {{"format", format_flag}, {"low_instruction", low_instruction}});
    return any_failed ? kExitDomain : kExitOk;
}

int cmd_evaluate(const std::string& pred_path, const std::string& gt_path,
                 const std::string& out_path, const std::string& format_flag,
                 bool low_instruction, double tolerance) {
    const auto default_format = parse_format_flag(format_flag);
    std::vector<std::string> pred_lines, gt_lines;
    try {
        pred_lines = guikit::read_lines(pred_path);
        gt_lines = guikit::read_lines(gt_path);
    } catch (const std::system_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEnv;
    }

    try {
        std::map<std::pair<std::string, std::string>, guikit::GroundTruthStep> gt_index;
        for (const auto& line : gt_lines) {
            auto gt = guikit::ground_truth_from_json(nlohmann::json::parse(line));
            gt_index[{gt.episode_id, gt.step_id}] = gt;
        }

        guikit::EvalOptions opts;
        opts.point_tolerance = tolerance;
        std::vector<guikit::EvaluatedStep> steps;
        std::vector<std::string> orphans;
        for (const auto& line : pred_lines) {
            auto rec = guikit::prediction_from_json(nlohmann::json::parse(line),
                                                    default_format, low_instruction);
            auto it = gt_index.find({rec.episode_id, rec.step_id});
            if (it == gt_index.end()) {
                orphans.push_back(rec.episode_id + "/" + rec.step_id);
                continue;
            }
            const auto outcome = guikit::convert(rec.raw);
            steps.push_back({guikit::evaluate_step(outcome, it->second, opts),
                             guikit::action_type_of(it->second.gt_action)});
        }
        if (!orphans.empty()) {
            std::cerr << "error: predictions without ground truth:";
            for (const auto& id : orphans) std::cerr << " " << id;
            std::cerr << "\n";
            return kExitDomain;
        }
        const auto report = guikit::aggregate(steps);
        Output out(out_path);
        out.out() << guikit::report_to_json(report).dump() << "\n";
        emit_manifest("evaluate", {pred_path, gt_path},
                      {{"format", format_flag},
                       {"low_instruction", low_instruction},
                       {"tolerance", tolerance}});
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}

int cmd_reward(const std::string& pred_path, const std::string& gt_path,
               const std::string& out_path, bool require_thought, double tolerance) {
    std::vector<std::string> pred_lines, gt_lines;
    try {
        pred_lines = guikit::read_lines(pred_path);
        gt_lines = guikit::read_lines(gt_path);
    } catch (const std::system_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEnv;
    }
    if (pred_lines.size() != gt_lines.size()) {
        std::cerr << "error: prediction/ground-truth line counts differ ("
                  << pred_lines.size() << " vs " << gt_lines.size() << ")\n";
        return kExitDomain;
    }
    try {
        guikit::RewardOptions opts;
        opts.require_thought = require_thought;
        opts.eval.point_tolerance = tolerance;
        Output out(out_path);
        for (size_t i = 0; i < pred_lines.size(); ++i) {
            auto gt = guikit::ground_truth_from_json(nlohmann::json::parse(gt_lines[i]));
            out.out() << guikit::score(pred_lines[i], gt, opts).value << "\n";
        }
        emit_manifest("reward", {pred_path, gt_path},
                      {{"require_thought", require_thought}, {"tolerance", tolerance}});
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}

guikit::ResponseTerm response_from_json(const nlohmann::json& j) {
    guikit::ResponseTerm r;
    r.logprobs.theta = j.at("theta").get<std::vector<double>>();
    r.logprobs.theta_old = j.at("theta_old").get<std::vector<double>>();
    r.logprobs.ref = j.at("ref").get<std::vector<double>>();
    r.advantage = j.at("advantage").get<double>();
    return r;
}

int cmd_advantages(const std::string& path, const std::string& out_path,
                   const std::string& objective_path) {
    try {
        Output out(out_path);
        if (!objective_path.empty()) {
            std::ifstream in(objective_path, std::ios::binary);
            if (!in) throw std::system_error(errno, std::generic_category(), objective_path);
            nlohmann::json doc = nlohmann::json::parse(in);
            guikit::GRPOConfig cfg;
            cfg.epsilon = doc.value("epsilon", 0.2);
            cfg.beta = doc.value("beta", 0.04);
            cfg.group_size = doc.value("group_size", 8);
            double total = 0.0;
            std::int64_t count = 0;
            for (const auto& gj : doc.at("groups")) {
                std::vector<guikit::ResponseTerm> group;
                for (const auto& rj : gj) group.push_back(response_from_json(rj));
                total += guikit::grpo_objective(group, cfg);
                ++count;
            }
            if (count == 0) throw std::invalid_argument("no groups in objective document");
            nlohmann::ordered_json result;
            result["objective"] = total / static_cast<double>(count);
            result["groups"] = count;
            out.out() << result.dump() << "\n";
            emit_manifest("advantages", {objective_path},
                          {{"epsilon", cfg.epsilon}, {"beta", cfg.beta}});
            return kExitOk;
        }
        const auto lines = guikit::read_lines(path);
        for (const auto& line : lines) {
            auto rewards = nlohmann::json::parse(line).get<std::vector<double>>();
            out.out() << nlohmann::json(guikit::group_advantages(rewards)).dump() << "\n";
        }
        emit_manifest("advantages", {path}, {{"mode", "rewards"}});
        return kExitOk;
    } catch (const std::system_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEnv;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 std::optional<std::uint64_t> seed, const std::string& trace_path) {
    nlohmann::json config_json;
    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw std::system_error(errno, std::generic_category(), config_path);
        config_json = nlohmann::json::parse(in);
    } catch (const std::system_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEnv;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    try {
        auto config = guikit::sim_config_from_json(config_json);
        if (seed) config.seed = *seed;
        std::vector<guikit::SimEvent> trace;
        const auto report =
            guikit::run_simulation(config, trace_path.empty() ? nullptr : &trace);
        Output out(out_path);
        out.out() << report.to_json().dump() << "\n";
        if (!trace_path.empty()) {
            std::ofstream tf(trace_path, std::ios::binary);
            if (!tf) throw std::system_error(errno, std::generic_category(), trace_path);
            for (const auto& ev : trace) {
                nlohmann::ordered_json ej;
                ej["t"] = ev.virtual_time;
                ej["kind"] = guikit::sim_event_name(ev.kind);
                ej["node"] = ev.node;
                ej["group"] = ev.group;
                ej["task"] = ev.task;
                ej["policy_version"] = ev.policy_version;
                tf << ej.dump() << "\n";
            }
        }
        nlohmann::ordered_json resolved = config_json;
        resolved["seed"] = config.seed;
        emit_manifest("simulate", {config_path}, resolved);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GUI-agent action space toolkit"};
    app.require_subcommand(1);

    std::string input, gt_path, config_path, out_path, trace_path;
    std::string format_flag, screen_flag, objective_path;
    bool low_instruction = false;
    bool require_thought = false;
    double tolerance = 140.0;
    std::optional<std::uint64_t> seed;

    auto* validate = app.add_subcommand("validate", "Validate compact unified actions");
    validate->add_option("path", input, "line-delimited action file")->required();
    validate->add_option("--output", out_path);

    auto* convert = app.add_subcommand("convert", "Convert baseline outputs to unified actions");
    convert->add_option("path", input, "line-delimited prediction records")->required();
    convert->add_option("--format", format_flag,
                        "qwen25vl|uitars|osatlas|osgenesis|odyssey|aguvis");
    convert->add_flag("--low-instruction", low_instruction);
    convert->add_option("--screen", screen_flag, "WxH pixels (qwen25vl)");
    convert->add_option("--output", out_path);

    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
    evaluate->add_option("predictions", input)->required();
    evaluate->add_option("ground_truth", gt_path)->required();
    evaluate->add_option("--format", format_flag);
    evaluate->add_flag("--low-instruction", low_instruction);
    evaluate->add_option("--tolerance", tolerance, "point tolerance without bbox");
    evaluate->add_option("--output", out_path);

    auto* reward = app.add_subcommand("reward", "Two-stage reward per line");
    reward->add_option("predictions", input)->required();
    reward->add_option("ground_truth", gt_path)->required();
    reward->add_flag("--require-thought", require_thought);
    reward->add_option("--tolerance", tolerance);
    reward->add_option("--output", out_path);

    auto* advantages = app.add_subcommand("advantages", "Group-relative advantages");
    advantages->add_option("path", input, "line-delimited reward groups");
    advantages->add_option("--objective", objective_path,
                           "evaluate the clipped objective from a JSON document");
    advantages->add_option("--output", out_path);

    auto* simulate = app.add_subcommand("simulate", "Run the rollout simulator");
    simulate->add_option("--config", config_path)->required();
    simulate->add_option("--seed", seed, "override config seed");
    simulate->add_option("--trace", trace_path, "write event trace as JSONL");
    simulate->add_option("--output", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitEnv;
    }

    try {
        if (validate->parsed()) return cmd_validate(input, out_path);
        if (convert->parsed())
            return cmd_convert(input, out_path, format_flag, low_instruction, screen_flag);
        if (evaluate->parsed())
            return cmd_evaluate(input, gt_path, out_path, format_flag, low_instruction,
                                tolerance);
        if (reward->parsed())
            return cmd_reward(input, gt_path, out_path, require_thought, tolerance);
        if (advantages->parsed()) {
            if (input.empty() && objective_path.empty()) {
                std::cerr << "error: advantages needs a rewards file or --objective\n";
                return kExitEnv;
            }
            return cmd_advantages(input, out_path, objective_path);
        }
        if (simulate->parsed()) return cmd_simulate(config_path, out_path, seed, trace_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEnv;
    }
    return kExitEnv;
}
