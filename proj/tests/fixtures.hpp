#pragma once

// Curated raw-output corpus for the six baseline formats, paired with the
// compact unified action each one must convert to ("-" marks a drop).

#include <optional>
#include <string>
#include <vector>

#include "guikit/adapters.hpp"

namespace guikit::fixtures {

struct AdapterCase {
    SourceFormat format;
    std::string text;
    std::string expected;  // compact unified action, or "-" for dropped
    bool low_instruction = false;
    std::optional<ScreenSize> screen;
};

inline const std::vector<AdapterCase>& adapter_corpus() {
    static const ScreenSize phone{1092, 2408};
    static const std::vector<AdapterCase> cases = {
        // qwen25vl: absolute pixels, seconds
        {SourceFormat::qwen25vl,
         R"(<tool_call>{"name":"mobile_use","arguments":{"action":"click","coordinate":[546,1204]}}</tool_call>)",
         R"({"POINT":[500,500]})", false, phone},
        {SourceFormat::qwen25vl,
         R"(Let me check the screen first. <tool_call>{"name":"mobile_use","arguments":{"action":"long_press","coordinate":[273,602],"time":3}}</tool_call>)",
         R"({"POINT":[250,250],"duration":3000})", false, phone},
        {SourceFormat::qwen25vl,
         R"(<tool_call>{"name":"mobile_use","arguments":{"action":"swipe","coordinate":[546,1806],"coordinate2":[546,602]}}</tool_call>)",
         R"({"POINT":[500,750],"to":"up"})", false, phone},
        {SourceFormat::qwen25vl, R"({"action":"wait","time":2})",
         R"({"duration":2000})", false, phone},
        {SourceFormat::qwen25vl,
         R"(<tool_call>{"name":"mobile_use","arguments":{"action":"system_button","button":"Enter"}}</tool_call>)",
         R"({"PRESS":"ENTER"})", false, phone},
        {SourceFormat::qwen25vl,
         R"(<tool_call>{"name":"mobile_use","arguments":{"action":"type","text":"QQ音乐"}}</tool_call>)",
         R"({"TYPE":"QQ音乐"})", false, phone},
        {SourceFormat::qwen25vl,
         R"(<tool_call>{"name":"mobile_use","arguments":{"action":"terminate","status":"success"}}</tool_call>)",
         R"({"STATUS":"finish"})", false, phone},
        {SourceFormat::qwen25vl,
         R"(<tool_call>{"name":"mobile_use","arguments":{"action":"key","text":"volume_up"}}</tool_call>)",
         "-", false, phone},

        // uitars: normalized coords, ms, reversed scroll
        {SourceFormat::uitars,
         "Thought: Tap the settings icon.\nAction: click(start_box='<|box_start|>(231,516)<|box_end|>')",
         R"({"POINT":[231,516]})"},
        {SourceFormat::uitars, "Action: long_press(start_box='(100,200)')",
         R"({"POINT":[100,200],"duration":1000})"},
        {SourceFormat::uitars, "Action: long_press(start_box='(100,200)', time='1500')",
         R"({"POINT":[100,200],"duration":1500})"},
        {SourceFormat::uitars, "Thought: Scroll up to see more.\nAction: scroll(direction='up')",
         R"({"POINT":[500,500],"to":"down"})"},
        {SourceFormat::uitars, "Action: type(content='Hello, world!')",
         R"({"TYPE":"Hello, world!"})"},
        {SourceFormat::uitars, "Action: press_back()", R"({"PRESS":"BACK"})"},
        {SourceFormat::uitars, "Action: wait()", R"({"duration":200})"},
        {SourceFormat::uitars, "Action: finished()", R"({"STATUS":"finish"})"},

        // osatlas: scroll reversed only in low-instruction mode
        {SourceFormat::osatlas,
         "Thoughts: The target button is visible.\nActions: CLICK <point>[[101, 872]]</point>",
         R"({"POINT":[101,872]})"},
        {SourceFormat::osatlas, "Actions: LONG_PRESS <point>[[320, 400]]</point>",
         R"({"POINT":[320,400],"duration":1000})"},
        {SourceFormat::osatlas, "Actions: TYPE [Shanghai shopping mall]",
         R"({"TYPE":"Shanghai shopping mall"})"},
        {SourceFormat::osatlas, "Actions: SCROLL [UP]",
         R"({"POINT":[500,500],"to":"up"})", false},
        {SourceFormat::osatlas, "Actions: SCROLL [UP]",
         R"({"POINT":[500,500],"to":"down"})", true},
        {SourceFormat::osatlas, "Actions: PRESS_RECENT", R"({"PRESS":"RECENT"})"},
        {SourceFormat::osatlas, "Actions: WAIT", R"({"duration":200})"},
        {SourceFormat::osatlas, "Actions: COMPLETE", R"({"STATUS":"finish"})"},

        // osgenesis: JSON-ish dicts, scroll reversed only in low-instruction mode
        {SourceFormat::osgenesis,
         R"(The next step is clicking the icon. {"action_type": "click", "x": 150, "y": 300})",
         R"({"POINT":[150,300]})"},
        {SourceFormat::osgenesis, "{'action_type': 'long_press', 'x': 500, 'y': 250}",
         R"({"POINT":[500,250],"duration":1000})"},
        {SourceFormat::osgenesis, R"({"action_type": "scroll", "direction": "up"})",
         R"({"POINT":[500,500],"to":"up"})", false},
        {SourceFormat::osgenesis, R"({"action_type": "scroll", "direction": "up"})",
         R"({"POINT":[500,500],"to":"down"})", true},
        {SourceFormat::osgenesis, R"({"action_type": "type", "text": "hello"})",
         R"({"TYPE":"hello"})"},
        {SourceFormat::osgenesis, R"({"action_type": "navigate_back"})",
         R"({"PRESS":"BACK"})"},
        {SourceFormat::osgenesis, R"({"action_type": "dismiss", "x": 10, "y": 20})",
         R"({"POINT":[10,20]})"},
        {SourceFormat::osgenesis, R"({"action_type": "wait"})", R"({"duration":200})"},

        // odyssey: near-native action strings, no scroll reversal
        {SourceFormat::odyssey, "CLICK: (54, 112)", R"({"POINT":[54,112]})"},
        {SourceFormat::odyssey, "LONG_PRESS: (500, 500)",
         R"({"POINT":[500,500],"duration":1000})"},
        {SourceFormat::odyssey, "SCROLL: UP", R"({"POINT":[500,500],"to":"up"})"},
        {SourceFormat::odyssey, "TYPE: best pizza near me",
         R"({"TYPE":"best pizza near me"})"},
        {SourceFormat::odyssey, "HOME", R"({"PRESS":"HOME"})"},
        {SourceFormat::odyssey, "COMPLETE", R"({"STATUS":"finish"})"},
        {SourceFormat::odyssey, "IMPOSSIBLE", R"({"STATUS":"impossible"})"},
        {SourceFormat::odyssey, "RECENT", "-"},

        // aguvis: [0,1] coordinates, pyautogui scroll sign convention
        {SourceFormat::aguvis, "pyautogui.click(x=0.5, y=0.25)", R"({"POINT":[500,250]})"},
        {SourceFormat::aguvis, "mobile.long_press(x=0.5, y=0.25)",
         R"({"POINT":[500,250],"duration":1000})"},
        {SourceFormat::aguvis, "pyautogui.scroll(page=-0.5)",
         R"({"POINT":[500,500],"to":"down"})"},
        {SourceFormat::aguvis, "pyautogui.hscroll(page=0.25)",
         R"({"POINT":[500,500],"to":"right"})"},
        {SourceFormat::aguvis, "pyautogui.write(message='Hello, world!')",
         R"({"TYPE":"Hello, world!"})"},
        {SourceFormat::aguvis, "mobile.home()", R"({"PRESS":"HOME"})"},
        {SourceFormat::aguvis, "mobile.wait(3)", R"({"duration":3000})"},
        {SourceFormat::aguvis, "mobile.swipe(from_coord=[0.5, 0.2], to_coord=[0.5, 0.8])",
         R"({"POINT":[500,200],"to":"down"})"},
        {SourceFormat::aguvis, "mobile.terminate(status='success')",
         R"({"STATUS":"finish"})"},
        {SourceFormat::aguvis, "mobile.open_app(app_name='Chrome')", "-"},
    };
    return cases;
}

}  // namespace guikit::fixtures
