#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace guikit {

enum class Direction { up, down, left, right };
enum class SpecialKey { home, back, enter, recent };  // recent: evaluation-only
enum class TaskStatus { kContinue, finish, satisfied, impossible, interrupt, need_feedback };
enum class ActionType { click, long_press, swipe, type, press, wait, status_only };

struct Point {
    int x = 0;
    int y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

using SwipeTarget = std::variant<Direction, Point>;

enum class Verdict { valid, format_error, schema_violation };

struct ValidationReport {
    Verdict verdict = Verdict::valid;
    std::string detail;
};

class ActionError : public std::runtime_error {
public:
    ActionError(Verdict kind, const std::string& detail)
        : std::runtime_error(detail), kind_(kind) {}
    Verdict kind() const { return kind_; }

private:
    Verdict kind_;
};

struct ActionOptions {
    // Accept PRESS:"RECENT" (outside the canonical schema, needed when scoring
    // baselines that emit a recents-key action).
    bool evaluation_extensions = false;
    // Treat a missing "thought" as a schema violation (RFT samples whose schema
    // marks thought as required).
    bool require_thought = false;
};

// One atomic action in the compact JSON action space.
struct UnifiedAction {
    std::optional<std::string> thought;
    std::optional<Point> point;
    std::optional<SwipeTarget> to;
    std::optional<std::string> type_text;
    std::optional<SpecialKey> press;
    TaskStatus status = TaskStatus::kContinue;
    std::optional<int> duration;  // milliseconds

    bool has_payload_besides_duration() const {
        return point || to || type_text || press || status != TaskStatus::kContinue;
    }

    // duration==200 is the schema default and carries no meaning next to another
    // action; it only matters as a bare wait.
    std::optional<int> canonical_duration() const {
        if (duration && *duration == 200 && has_payload_besides_duration())
            return std::nullopt;
        return duration;
    }

    // Equality ignores the thought trace and normalizes the default duration.
    friend bool operator==(const UnifiedAction& a, const UnifiedAction& b) {
        return a.point == b.point && a.to == b.to && a.type_text == b.type_text &&
               a.press == b.press && a.status == b.status &&
               a.canonical_duration() == b.canonical_duration();
    }
};

namespace detail {

inline const char* direction_name(Direction d) {
    switch (d) {
        case Direction::up: return "up";
        case Direction::down: return "down";
        case Direction::left: return "left";
        case Direction::right: return "right";
    }
    return "";
}

inline std::optional<Direction> direction_from(const std::string& s) {
    if (s == "up") return Direction::up;
    if (s == "down") return Direction::down;
    if (s == "left") return Direction::left;
    if (s == "right") return Direction::right;
    return std::nullopt;
}

inline const char* key_name(SpecialKey k) {
    switch (k) {
        case SpecialKey::home: return "HOME";
        case SpecialKey::back: return "BACK";
        case SpecialKey::enter: return "ENTER";
        case SpecialKey::recent: return "RECENT";
    }
    return "";
}

inline std::optional<SpecialKey> key_from(const std::string& s) {
    if (s == "HOME") return SpecialKey::home;
    if (s == "BACK") return SpecialKey::back;
    if (s == "ENTER") return SpecialKey::enter;
    if (s == "RECENT") return SpecialKey::recent;
    return std::nullopt;
}

inline const char* status_name(TaskStatus s) {
    switch (s) {
        case TaskStatus::kContinue: return "continue";
        case TaskStatus::finish: return "finish";
        case TaskStatus::satisfied: return "satisfied";
        case TaskStatus::impossible: return "impossible";
        case TaskStatus::interrupt: return "interrupt";
        case TaskStatus::need_feedback: return "need_feedback";
    }
    return "";
}

inline std::optional<TaskStatus> status_from(const std::string& s) {
    if (s == "continue") return TaskStatus::kContinue;
    if (s == "finish") return TaskStatus::finish;
    if (s == "satisfied") return TaskStatus::satisfied;
    if (s == "impossible") return TaskStatus::impossible;
    if (s == "interrupt") return TaskStatus::interrupt;
    if (s == "need_feedback") return TaskStatus::need_feedback;
    return std::nullopt;
}

inline std::optional<Point> coord_from(const nlohmann::json& j, std::string& err) {
    if (!j.is_array() || j.size() != 2) {
        err = "coordinate must be an array of two integers";
        return std::nullopt;
    }
    for (const auto& v : j) {
        if (!v.is_number_integer() && !v.is_number_unsigned()) {
            err = "coordinate components must be integers";
            return std::nullopt;
        }
    }
    const auto x = j[0].get<std::int64_t>();
    const auto y = j[1].get<std::int64_t>();
    if (x < 0 || x > 1000 || y < 0 || y > 1000) {
        err = "coordinate component out of range [0,1000]";
        return std::nullopt;
    }
    return Point{static_cast<int>(x), static_cast<int>(y)};
}

}  // namespace detail

// Checks every schema invariant; empty result means the action is well formed.
inline std::optional<std::string> invariant_violation(const UnifiedAction& a,
                                                     const ActionOptions& opts = {}) {
    auto in_range = [](const Point& p) {
        return p.x >= 0 && p.x <= 1000 && p.y >= 0 && p.y <= 1000;
    };
    if (a.point && !in_range(*a.point)) return "POINT out of range [0,1000]";
    if (a.to) {
        if (!a.point) return "\"to\" requires POINT";
        if (const auto* p = std::get_if<Point>(&*a.to); p && !in_range(*p))
            return "\"to\" coordinate out of range [0,1000]";
    }
    if (a.press && a.point) return "PRESS and POINT are mutually exclusive";
    if (a.press && a.type_text) return "PRESS and TYPE are mutually exclusive";
    if (a.press && *a.press == SpecialKey::recent && !opts.evaluation_extensions)
        return "PRESS value not in {HOME,BACK,ENTER}";
    if (a.duration && *a.duration < 0) return "duration must be non-negative";
    if (opts.require_thought && !a.thought) return "missing required thought";
    return std::nullopt;
}

// Strict parse of the compact action wire format. Throws ActionError with
// kind format_error (not JSON) or schema_violation (JSON but outside the schema).
inline UnifiedAction parse_unified(const std::string& text, const ActionOptions& opts = {}) {
    using json = nlohmann::json;

    // nlohmann keeps the last duplicate silently; track keys per object depth
    // through the parser callback instead.
    std::vector<std::set<std::string>> key_stack;
    bool duplicate_key = false;
    auto cb = [&](int, json::parse_event_t event, json& parsed) {
        switch (event) {
            case json::parse_event_t::object_start:
                key_stack.emplace_back();
                break;
            case json::parse_event_t::object_end:
                key_stack.pop_back();
                break;
            case json::parse_event_t::key:
                if (!key_stack.back().insert(parsed.get<std::string>()).second)
                    duplicate_key = true;
                break;
            default:
                break;
        }
        return true;
    };

    json j;
    try {
        j = json::parse(text, cb);
    } catch (const json::parse_error& e) {
        throw ActionError(Verdict::format_error, e.what());
    }
    if (duplicate_key)
        throw ActionError(Verdict::schema_violation, "duplicate key");
    if (!j.is_object())
        throw ActionError(Verdict::schema_violation, "top-level value must be an object");

    auto fail = [](const std::string& msg) -> ActionError {
        return ActionError(Verdict::schema_violation, msg);
    };

    UnifiedAction a;
    for (const auto& [key, value] : j.items()) {
        std::string err;
        if (key == "thought") {
            if (!value.is_string()) throw fail("thought must be a string");
            a.thought = value.get<std::string>();
        } else if (key == "POINT") {
            auto p = detail::coord_from(value, err);
            if (!p) throw fail("POINT: " + err);
            a.point = *p;
        } else if (key == "to") {
            if (value.is_string()) {
                auto d = detail::direction_from(value.get<std::string>());
                if (!d) throw fail("\"to\" direction not in {up,down,left,right}");
                a.to = *d;
            } else {
                auto p = detail::coord_from(value, err);
                if (!p) throw fail("\"to\": " + err);
                a.to = *p;
            }
        } else if (key == "TYPE") {
            if (!value.is_string()) throw fail("TYPE must be a string");
            a.type_text = value.get<std::string>();
        } else if (key == "PRESS") {
            if (!value.is_string()) throw fail("PRESS must be a string");
            auto k = detail::key_from(value.get<std::string>());
            if (!k) throw fail("PRESS value not in {HOME,BACK,ENTER}");
            a.press = *k;
        } else if (key == "duration") {
            if (!value.is_number_integer() && !value.is_number_unsigned())
                throw fail("duration must be an integer");
            const auto d = value.get<std::int64_t>();
            if (d < 0) throw fail("duration must be non-negative");
            if (d > std::numeric_limits<int>::max()) throw fail("duration too large");
            a.duration = static_cast<int>(d);
        } else if (key == "STATUS") {
            if (!value.is_string()) throw fail("STATUS must be a string");
            auto s = detail::status_from(value.get<std::string>());
            if (!s) throw fail("STATUS value invalid");
            a.status = *s;
        } else {
            throw fail("unknown key \"" + key + "\"");
        }
    }

    if (auto violation = invariant_violation(a, opts))
        throw fail(*violation);
    return a;
}

inline ValidationReport validate(const std::string& text, const ActionOptions& opts = {}) {
    try {
        parse_unified(text, opts);
        return {Verdict::valid, ""};
    } catch (const ActionError& e) {
        return {e.kind(), e.what()};
    }
}

// Emits the canonical compact form: no whitespace between structural
// characters, fixed key order, defaults omitted, raw UTF-8 in strings.
inline std::string serialize_compact(const UnifiedAction& a, const ActionOptions& opts = {}) {
    if (auto violation = invariant_violation(a, opts))
        throw ActionError(Verdict::schema_violation, *violation);

    auto quote = [](const std::string& s) { return nlohmann::json(s).dump(); };

    std::string out = "{";
    auto emit = [&](const std::string& key, const std::string& rendered) {
        if (out.size() > 1) out += ',';
        out += '"';
        out += key;
        out += "\":";
        out += rendered;
    };

    if (a.thought) emit("thought", quote(*a.thought));
    if (a.point)
        emit("POINT", "[" + std::to_string(a.point->x) + "," + std::to_string(a.point->y) + "]");
    if (a.to) {
        if (const auto* d = std::get_if<Direction>(&*a.to)) {
            emit("to", quote(detail::direction_name(*d)));
        } else {
            const auto& p = std::get<Point>(*a.to);
            emit("to", "[" + std::to_string(p.x) + "," + std::to_string(p.y) + "]");
        }
    }
    if (a.type_text) emit("TYPE", quote(*a.type_text));
    if (a.press) emit("PRESS", quote(detail::key_name(*a.press)));
    if (auto d = a.canonical_duration()) emit("duration", std::to_string(*d));
    if (a.status != TaskStatus::kContinue)
        emit("STATUS", quote(detail::status_name(a.status)));
    out += '}';
    return out;
}

// Partition used by Type Match. Compound actions (payload plus a non-continue
// STATUS) are typed by their non-STATUS component; see is_status_compound.
inline ActionType action_type_of(const UnifiedAction& a) {
    if (a.point && a.to) return ActionType::swipe;
    if (a.point) {
        const int d = a.duration.value_or(200);
        return d > 200 ? ActionType::long_press : ActionType::click;
    }
    if (a.type_text) return ActionType::type;
    if (a.press) return ActionType::press;
    if (a.duration) return ActionType::wait;
    return ActionType::status_only;
}

inline bool is_status_compound(const UnifiedAction& a) {
    return a.status != TaskStatus::kContinue &&
           action_type_of(a) != ActionType::status_only;
}

inline const char* action_type_name(ActionType t) {
    switch (t) {
        case ActionType::click: return "CLICK";
        case ActionType::long_press: return "LONG_PRESS";
        case ActionType::swipe: return "SWIPE";
        case ActionType::type: return "TYPE";
        case ActionType::press: return "PRESS";
        case ActionType::wait: return "WAIT";
        case ActionType::status_only: return "STATUS";
    }
    return "";
}

}  // namespace guikit
