#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "guikit/action.hpp"

namespace guikit {

enum class SourceFormat { qwen25vl, uitars, osatlas, osgenesis, odyssey, aguvis };

inline std::optional<SourceFormat> source_format_from(const std::string& s) {
    if (s == "qwen25vl") return SourceFormat::qwen25vl;
    if (s == "uitars") return SourceFormat::uitars;
    if (s == "osatlas") return SourceFormat::osatlas;
    if (s == "osgenesis") return SourceFormat::osgenesis;
    if (s == "odyssey") return SourceFormat::odyssey;
    if (s == "aguvis") return SourceFormat::aguvis;
    return std::nullopt;
}

inline const char* source_format_name(SourceFormat f) {
    switch (f) {
        case SourceFormat::qwen25vl: return "qwen25vl";
        case SourceFormat::uitars: return "uitars";
        case SourceFormat::osatlas: return "osatlas";
        case SourceFormat::osgenesis: return "osgenesis";
        case SourceFormat::odyssey: return "odyssey";
        case SourceFormat::aguvis: return "aguvis";
    }
    return "";
}

struct ScreenSize {
    int width_px = 0;
    int height_px = 0;
};

// One baseline model's raw output plus the context needed to convert it.
struct RawPrediction {
    std::string text;
    SourceFormat format = SourceFormat::qwen25vl;
    std::optional<ScreenSize> screen;   // required for qwen25vl
    bool low_instruction_mode = false;  // AndroidControl-Low convention
};

struct ConversionOutcome {
    enum class Status { ok, dropped, parse_failure };
    Status status = Status::parse_failure;
    std::optional<UnifiedAction> action;
    std::string reason;

    static ConversionOutcome converted(UnifiedAction a) {
        return {Status::ok, std::move(a), ""};
    }
    static ConversionOutcome drop(std::string reason) {
        return {Status::dropped, std::nullopt, std::move(reason)};
    }
    static ConversionOutcome fail(std::string reason) {
        return {Status::parse_failure, std::nullopt, std::move(reason)};
    }
};

inline Direction reverse_direction(Direction d) {
    switch (d) {
        case Direction::up: return Direction::down;
        case Direction::down: return Direction::up;
        case Direction::left: return Direction::right;
        case Direction::right: return Direction::left;
    }
    return d;
}

// Dominant-axis direction between two points; ties go horizontal.
// +y points down on screen.
inline std::optional<Direction> swipe_direction(Point from, Point to) {
    const int dx = to.x - from.x;
    const int dy = to.y - from.y;
    if (dx == 0 && dy == 0) return std::nullopt;
    if (std::abs(dx) >= std::abs(dy))
        return dx > 0 ? Direction::right : Direction::left;
    return dy > 0 ? Direction::down : Direction::up;
}

// Floor-scales a pixel coordinate onto the [0,1000] grid.
inline std::optional<Point> normalize_coord(double x, double y, int width, int height) {
    if (width <= 0 || height <= 0) return std::nullopt;
    if (x < 0 || y < 0 || x > width || y > height) return std::nullopt;
    auto scale = [](double v, int extent) {
        return std::min(1000, static_cast<int>(v / extent * 1000.0));
    };
    return Point{scale(x, width), scale(y, height)};
}

namespace detail {

// Last balanced {...} block in the text that parses as JSON. Single-quoted
// pseudo-JSON (python dict repr) gets a quote-repair pass as a fallback.
inline std::optional<nlohmann::json> last_json_object(const std::string& text) {
    std::vector<std::pair<size_t, size_t>> spans;
    std::vector<size_t> stack;
    bool in_str = false;
    char quote_ch = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_str) {
            if (c == '\\') { ++i; continue; }
            if (c == quote_ch) in_str = false;
            continue;
        }
        if (c == '"' || c == '\'') { in_str = true; quote_ch = c; continue; }
        if (c == '{') stack.push_back(i);
        else if (c == '}' && !stack.empty()) {
            const size_t start = stack.back();
            stack.pop_back();
            if (stack.empty()) spans.emplace_back(start, i + 1 - start);
        }
    }
    for (auto it = spans.rbegin(); it != spans.rend(); ++it) {
        const std::string block = text.substr(it->first, it->second);
        if (auto j = nlohmann::json::parse(block, nullptr, false); !j.is_discarded())
            return j;
        std::string repaired;
        repaired.reserve(block.size());
        for (char c : block) repaired += (c == '\'') ? '"' : c;
        if (auto j = nlohmann::json::parse(repaired, nullptr, false); !j.is_discarded())
            return j;
    }
    return std::nullopt;
}

struct Match {
    size_t pos = std::string::npos;
    std::smatch groups;
};

// Position of the last occurrence of any pattern; baselines emit reasoning
// before the action, so the final expression wins.
inline std::optional<std::pair<int, Match>> last_match(
    const std::string& text, const std::vector<std::regex>& patterns) {
    std::optional<std::pair<int, Match>> best;
    for (size_t pi = 0; pi < patterns.size(); ++pi) {
        auto begin = std::sregex_iterator(text.begin(), text.end(), patterns[pi]);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            const size_t pos = static_cast<size_t>(it->position());
            if (!best || pos >= best->second.pos)
                best = {static_cast<int>(pi), Match{pos, *it}};
        }
    }
    return best;
}

inline int scale_unit_coord(double v) {
    // [0,1] coordinate, rounded half-up after x1000
    return static_cast<int>(std::floor(v * 1000.0 + 0.5));
}

inline ConversionOutcome convert_qwen(const RawPrediction& raw) {
    if (!raw.screen)
        return ConversionOutcome::fail("qwen25vl requires screen dimensions");

    // Prefer the payload inside the last <tool_call> block; fall back to the
    // last JSON object anywhere in the text.
    std::optional<nlohmann::json> call;
    {
        static const std::regex tag(R"(<tool_call>([\s\S]*?)</tool_call>)");
        auto begin = std::sregex_iterator(raw.text.begin(), raw.text.end(), tag);
        std::optional<std::string> inner;
        for (auto it = begin; it != std::sregex_iterator(); ++it) inner = (*it)[1].str();
        if (inner) call = last_json_object(*inner);
    }
    if (!call) call = last_json_object(raw.text);
    if (!call || !call->is_object())
        return ConversionOutcome::fail("no tool call found");

    nlohmann::json args = *call;
    if (args.contains("arguments") && args["arguments"].is_object())
        args = args["arguments"];
    if (!args.contains("action") || !args["action"].is_string())
        return ConversionOutcome::fail("tool call has no action field");
    const std::string op = args["action"].get<std::string>();

    auto point_arg = [&](const char* key) -> std::optional<Point> {
        if (!args.contains(key) || !args[key].is_array() || args[key].size() != 2)
            return std::nullopt;
        const auto& c = args[key];
        if (!c[0].is_number() || !c[1].is_number()) return std::nullopt;
        return normalize_coord(c[0].get<double>(), c[1].get<double>(),
                               raw.screen->width_px, raw.screen->height_px);
    };
    auto time_ms = [&]() -> std::optional<int> {
        if (!args.contains("time") || !args["time"].is_number()) return std::nullopt;
        return static_cast<int>(std::llround(args["time"].get<double>() * 1000.0));
    };

    UnifiedAction a;
    if (op == "click") {
        auto p = point_arg("coordinate");
        if (!p) return ConversionOutcome::fail("click: bad coordinate");
        a.point = *p;
    } else if (op == "long_press") {
        auto p = point_arg("coordinate");
        if (!p) return ConversionOutcome::fail("long_press: bad coordinate");
        a.point = *p;
        a.duration = time_ms().value_or(1000);
    } else if (op == "swipe") {
        auto p1 = point_arg("coordinate");
        auto p2 = point_arg("coordinate2");
        if (!p1 || !p2) return ConversionOutcome::fail("swipe: bad coordinates");
        auto dir = swipe_direction(*p1, *p2);
        if (!dir) return ConversionOutcome::fail("swipe: zero displacement");
        a.point = *p1;
        a.to = *dir;
    } else if (op == "type") {
        if (!args.contains("text") || !args["text"].is_string())
            return ConversionOutcome::fail("type: missing text");
        a.type_text = args["text"].get<std::string>();
    } else if (op == "system_button") {
        const std::string button =
            args.value("button", std::string());
        if (button == "Back") a.press = SpecialKey::back;
        else if (button == "Home") a.press = SpecialKey::home;
        else if (button == "Enter") a.press = SpecialKey::enter;
        else return ConversionOutcome::drop("system_button " + button + " has no mapping");
    } else if (op == "terminate") {
        a.status = TaskStatus::finish;
    } else if (op == "wait") {
        auto t = time_ms();
        if (!t) return ConversionOutcome::fail("wait: missing time");
        a.duration = *t;
    } else if (op == "key" || op == "open") {
        return ConversionOutcome::drop("action \"" + op + "\" has no mapping");
    } else {
        return ConversionOutcome::fail("unknown action \"" + op + "\"");
    }
    return ConversionOutcome::converted(std::move(a));
}

inline ConversionOutcome convert_uitars(const RawPrediction& raw) {
    static const std::vector<std::regex> patterns = {
        std::regex(R"(click\(start_box=)"),                              // 0
        std::regex(R"(long_press\(start_box=)"),                         // 1
        std::regex(R"(type\(content=(['"])([\s\S]*?)\1\))"),             // 2
        std::regex(R"(scroll\(direction=['"](up|down|left|right)['"]\))"),  // 3
        std::regex(R"(press_back\(\))"),                                 // 4
        std::regex(R"(press_home\(\))"),                                 // 5
        std::regex(R"(wait\(\))"),                                       // 6
        std::regex(R"(finished\()"),                                     // 7
    };
    auto m = last_match(raw.text, patterns);
    if (!m) return ConversionOutcome::fail("no recognizable action");

    // Coordinates appear as (x,y), possibly wrapped in box tokens.
    auto coords_after = [&](size_t pos) -> std::optional<Point> {
        static const std::regex coord(R"(\((\d+)\s*,\s*(\d+)\))");
        std::smatch cm;
        const std::string tail = raw.text.substr(pos);
        if (!std::regex_search(tail, cm, coord)) return std::nullopt;
        const int x = std::atoi(cm[1].str().c_str());
        const int y = std::atoi(cm[2].str().c_str());
        if (x > 1000 || y > 1000) return std::nullopt;
        return Point{x, y};
    };

    UnifiedAction a;
    switch (m->first) {
        case 0: {
            auto p = coords_after(m->second.pos);
            if (!p) return ConversionOutcome::fail("click: bad start_box");
            a.point = *p;
            break;
        }
        case 1: {
            auto p = coords_after(m->second.pos);
            if (!p) return ConversionOutcome::fail("long_press: bad start_box");
            a.point = *p;
            static const std::regex time_re(R"(time=['"]?([0-9]+))");
            std::smatch tm;
            const std::string tail = raw.text.substr(m->second.pos);
            a.duration = std::regex_search(tail, tm, time_re)
                             ? std::atoi(tm[1].str().c_str())
                             : 1000;
            break;
        }
        case 2:
            a.type_text = m->second.groups[2].str();
            break;
        case 3: {
            auto d = direction_from(m->second.groups[1].str());
            a.point = Point{500, 500};
            a.to = reverse_direction(*d);  // UI-TARS scroll is defined oppositely
            break;
        }
        case 4: a.press = SpecialKey::back; break;
        case 5: a.press = SpecialKey::home; break;
        case 6: a.duration = 200; break;
        case 7: a.status = TaskStatus::finish; break;
    }
    return ConversionOutcome::converted(std::move(a));
}

inline ConversionOutcome convert_osatlas(const RawPrediction& raw) {
    static const std::vector<std::regex> patterns = {
        std::regex(R"(CLICK\s*<point>\[\[(\d+)\s*,\s*(\d+)\]\]</point>)"),       // 0
        std::regex(R"(LONG_PRESS\s*<point>\[\[(\d+)\s*,\s*(\d+)\]\]</point>)"),  // 1
        std::regex(R"(TYPE \[([\s\S]*?)\])"),                                    // 2
        std::regex(R"(SCROLL \[(UP|DOWN|LEFT|RIGHT)\])"),                        // 3
        std::regex(R"(PRESS_BACK)"),                                             // 4
        std::regex(R"(PRESS_HOME)"),                                             // 5
        std::regex(R"(PRESS_RECENT)"),                                           // 6
        std::regex(R"(WAIT)"),                                                   // 7
        std::regex(R"(COMPLETE)"),                                               // 8
    };
    auto m = last_match(raw.text, patterns);
    if (!m) return ConversionOutcome::fail("no recognizable action");

    auto point_of = [&](const std::smatch& g) -> std::optional<Point> {
        const int x = std::atoi(g[1].str().c_str());
        const int y = std::atoi(g[2].str().c_str());
        if (x > 1000 || y > 1000) return std::nullopt;
        return Point{x, y};
    };

    UnifiedAction a;
    switch (m->first) {
        case 0: {
            auto p = point_of(m->second.groups);
            if (!p) return ConversionOutcome::fail("CLICK: coordinate out of range");
            a.point = *p;
            break;
        }
        case 1: {
            auto p = point_of(m->second.groups);
            if (!p) return ConversionOutcome::fail("LONG_PRESS: coordinate out of range");
            a.point = *p;
            a.duration = 1000;
            break;
        }
        case 2: a.type_text = m->second.groups[1].str(); break;
        case 3: {
            std::string dir = m->second.groups[1].str();
            std::transform(dir.begin(), dir.end(), dir.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            auto d = direction_from(dir);
            a.point = Point{500, 500};
            a.to = raw.low_instruction_mode ? reverse_direction(*d) : *d;
            break;
        }
        case 4: a.press = SpecialKey::back; break;
        case 5: a.press = SpecialKey::home; break;
        case 6: a.press = SpecialKey::recent; break;
        case 7: a.duration = 200; break;
        case 8: a.status = TaskStatus::finish; break;
    }
    return ConversionOutcome::converted(std::move(a));
}

inline ConversionOutcome convert_osgenesis(const RawPrediction& raw) {
    auto obj = last_json_object(raw.text);
    if (!obj || !obj->is_object())
        return ConversionOutcome::fail("no action object found");
    const nlohmann::json& j = *obj;

    std::string op;
    if (j.contains("action_type") && j["action_type"].is_string())
        op = j["action_type"].get<std::string>();
    else if (j.contains("action") && j["action"].is_string())
        op = j["action"].get<std::string>();
    else
        return ConversionOutcome::fail("missing action_type");

    auto point_of = [&]() -> std::optional<Point> {
        if (!j.contains("x") || !j.contains("y") || !j["x"].is_number() || !j["y"].is_number())
            return std::nullopt;
        const int x = static_cast<int>(std::llround(j["x"].get<double>()));
        const int y = static_cast<int>(std::llround(j["y"].get<double>()));
        if (x < 0 || x > 1000 || y < 0 || y > 1000) return std::nullopt;
        return Point{x, y};
    };

    UnifiedAction a;
    if (op == "click" || op == "dismiss" || op == "get_text" || op == "long_press") {
        auto p = point_of();
        if (!p) return ConversionOutcome::fail(op + ": bad coordinate");
        a.point = *p;
        if (op == "long_press") a.duration = 1000;
    } else if (op == "type") {
        if (!j.contains("text") || !j["text"].is_string())
            return ConversionOutcome::fail("type: missing text");
        a.type_text = j["text"].get<std::string>();
    } else if (op == "navigate_home") {
        a.press = SpecialKey::home;
    } else if (op == "navigate_back") {
        a.press = SpecialKey::back;
    } else if (op == "scroll") {
        if (!j.contains("direction") || !j["direction"].is_string())
            return ConversionOutcome::fail("scroll: missing direction");
        auto d = direction_from(j["direction"].get<std::string>());
        if (!d) return ConversionOutcome::fail("scroll: bad direction");
        a.point = Point{500, 500};
        a.to = raw.low_instruction_mode ? reverse_direction(*d) : *d;
    } else if (op == "wait") {
        a.duration = 200;
    } else {
        return ConversionOutcome::fail("unknown action_type \"" + op + "\"");
    }
    return ConversionOutcome::converted(std::move(a));
}

inline ConversionOutcome convert_odyssey(const RawPrediction& raw) {
    static const std::vector<std::regex> patterns = {
        std::regex(R"(CLICK:?\s*\((\d+)\s*,\s*(\d+)\))"),       // 0
        std::regex(R"(LONG_PRESS:?\s*\((\d+)\s*,\s*(\d+)\))"),  // 1
        std::regex(R"(SCROLL:?\s*(UP|DOWN|LEFT|RIGHT|up|down|left|right))"),  // 2
        std::regex(R"(TYPE:?\s*([^\r\n]+))"),                   // 3
        std::regex(R"(\bHOME\b)"),                              // 4
        std::regex(R"(\bBACK\b)"),                              // 5
        std::regex(R"(\bCOMPLETE\b)"),                          // 6
        std::regex(R"(\bIMPOSSIBLE\b)"),                        // 7
        std::regex(R"(\bRECENT\b)"),                            // 8
    };
    auto m = last_match(raw.text, patterns);
    if (!m) return ConversionOutcome::fail("no recognizable action");

    UnifiedAction a;
    switch (m->first) {
        case 0:
        case 1: {
            const int x = std::atoi(m->second.groups[1].str().c_str());
            const int y = std::atoi(m->second.groups[2].str().c_str());
            if (x > 1000 || y > 1000)
                return ConversionOutcome::fail("coordinate out of range");
            a.point = Point{x, y};
            if (m->first == 1) a.duration = 1000;
            break;
        }
        case 2: {
            std::string dir = m->second.groups[1].str();
            std::transform(dir.begin(), dir.end(), dir.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            a.point = Point{500, 500};
            a.to = *direction_from(dir);
            break;
        }
        case 3: {
            std::string text = m->second.groups[1].str();
            while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
                text.pop_back();
            a.type_text = text;
            break;
        }
        case 4: a.press = SpecialKey::home; break;
        case 5: a.press = SpecialKey::back; break;
        case 6: a.status = TaskStatus::finish; break;
        case 7: a.status = TaskStatus::impossible; break;
        case 8: return ConversionOutcome::drop("RECENT has no mapping");
    }
    return ConversionOutcome::converted(std::move(a));
}

inline ConversionOutcome convert_aguvis(const RawPrediction& raw) {
    static const std::vector<std::regex> patterns = {
        std::regex(R"(pyautogui\.click\(x=([0-9.]+),\s*y=([0-9.]+)\))"),          // 0
        std::regex(R"(mobile\.long_press\(x=([0-9.]+),\s*y=([0-9.]+)\))"),        // 1
        std::regex(R"(pyautogui\.scroll\(\s*(?:page\s*=\s*)?(-?[0-9.]+)\s*\))"),  // 2
        std::regex(R"(pyautogui\.hscroll\(\s*(?:page\s*=\s*)?(-?[0-9.]+)\s*\))"), // 3
        std::regex(R"(pyautogui\.write\((?:message=)?(['"])([\s\S]*?)\1\))"),     // 4
        std::regex(R"(mobile\.home\(\))"),                                        // 5
        std::regex(R"(mobile\.back\(\))"),                                        // 6
        std::regex(R"(mobile\.terminate\()"),                                     // 7
        std::regex(R"(mobile\.open_app\()"),                                      // 8
        std::regex(R"(mobile\.wait\()"),                                          // 9
        std::regex(R"(mobile\.swipe\(from_coord=\[([0-9.]+),\s*([0-9.]+)\],\s*to_coord=\[([0-9.]+),\s*([0-9.]+)\]\))"),  // 10
    };
    auto m = last_match(raw.text, patterns);
    if (!m) return ConversionOutcome::fail("no recognizable action");

    auto unit_point = [&](const std::string& xs, const std::string& ys)
        -> std::optional<Point> {
        const double x = std::atof(xs.c_str());
        const double y = std::atof(ys.c_str());
        if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) return std::nullopt;
        return Point{scale_unit_coord(x), scale_unit_coord(y)};
    };

    UnifiedAction a;
    switch (m->first) {
        case 0:
        case 1: {
            auto p = unit_point(m->second.groups[1].str(), m->second.groups[2].str());
            if (!p) return ConversionOutcome::fail("coordinate outside [0,1]");
            a.point = *p;
            if (m->first == 1) a.duration = 1000;
            break;
        }
        case 2: {
            // pyautogui: positive vertical scroll amount scrolls up
            const double amount = std::atof(m->second.groups[1].str().c_str());
            if (amount == 0.0) return ConversionOutcome::fail("scroll: zero amount");
            a.point = Point{500, 500};
            a.to = amount > 0 ? Direction::up : Direction::down;
            break;
        }
        case 3: {
            const double amount = std::atof(m->second.groups[1].str().c_str());
            if (amount == 0.0) return ConversionOutcome::fail("hscroll: zero amount");
            a.point = Point{500, 500};
            a.to = amount > 0 ? Direction::right : Direction::left;
            break;
        }
        case 4: a.type_text = m->second.groups[2].str(); break;
        case 5: a.press = SpecialKey::home; break;
        case 6: a.press = SpecialKey::back; break;
        case 7: a.status = TaskStatus::finish; break;
        case 8: return ConversionOutcome::drop("open_app has no mapping");
        case 9: a.duration = 3000; break;
        case 10: {
            auto from = unit_point(m->second.groups[1].str(), m->second.groups[2].str());
            auto to = unit_point(m->second.groups[3].str(), m->second.groups[4].str());
            if (!from || !to) return ConversionOutcome::fail("swipe: coordinate outside [0,1]");
            auto dir = swipe_direction(*from, *to);
            if (!dir) return ConversionOutcome::fail("swipe: zero displacement");
            a.point = *from;
            a.to = *dir;
            break;
        }
    }
    return ConversionOutcome::converted(std::move(a));
}

}  // namespace detail

// Converts one baseline model's raw output into the unified action space.
inline ConversionOutcome convert(const RawPrediction& raw) {
    switch (raw.format) {
        case SourceFormat::qwen25vl: return detail::convert_qwen(raw);
        case SourceFormat::uitars: return detail::convert_uitars(raw);
        case SourceFormat::osatlas: return detail::convert_osatlas(raw);
        case SourceFormat::osgenesis: return detail::convert_osgenesis(raw);
        case SourceFormat::odyssey: return detail::convert_odyssey(raw);
        case SourceFormat::aguvis: return detail::convert_aguvis(raw);
    }
    return ConversionOutcome::fail("unrecognized format");
}

}  // namespace guikit
