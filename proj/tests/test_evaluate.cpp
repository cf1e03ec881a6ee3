#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "guikit/evaluate.hpp"

using namespace guikit;

namespace {

GroundTruthStep gt_of(const std::string& compact,
                      std::optional<BBox> bbox = std::nullopt) {
    GroundTruthStep gt;
    ActionOptions opts;
    opts.evaluation_extensions = true;
    gt.gt_action = parse_unified(compact, opts);
    gt.gt_bbox = bbox;
    return gt;
}

ConversionOutcome pred_of(const std::string& compact) {
    ActionOptions opts;
    opts.evaluation_extensions = true;
    return ConversionOutcome::converted(parse_unified(compact, opts));
}

}  // namespace

TEST_CASE("match_point uses inclusive bbox containment") {
    auto gt = gt_of(R"({"POINT":[480,320]})", BBox{400, 280, 560, 360});
    REQUIRE(match_point({480, 320}, gt));
    REQUIRE(match_point({400, 280}, gt));  // boundary inclusive
    REQUIRE(match_point({560, 360}, gt));
    REQUIRE_FALSE(match_point({561, 360}, gt));
}

TEST_CASE("match_point falls back to Euclidean tolerance without a bbox") {
    auto gt = gt_of(R"({"POINT":[500,500]})");
    REQUIRE_FALSE(match_point({0, 0}, gt));  // distance ~707 > 140
    REQUIRE(match_point({500, 640}, gt));    // exactly 140
    REQUIRE_FALSE(match_point({500, 641}, gt));
}

TEST_CASE("match_point monotonicity under bbox enlargement") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> coord(0, 1000);
    std::uniform_real_distribution<double> grow(0.0, 200.0);
    for (int i = 0; i < 500; ++i) {
        Point p{coord(rng), coord(rng)};
        double x0 = coord(rng), y0 = coord(rng);
        BBox box{x0, y0, x0 + grow(rng), y0 + grow(rng)};
        BBox bigger{box.x_min - grow(rng), box.y_min - grow(rng),
                    box.x_max + grow(rng), box.y_max + grow(rng)};
        auto gt_small = gt_of(R"({"POINT":[500,500]})", box);
        auto gt_big = gt_of(R"({"POINT":[500,500]})", bigger);
        if (match_point(p, gt_small)) REQUIRE(match_point(p, gt_big));
    }
}

TEST_CASE("type match requires same taxonomy class") {
    auto ev = evaluate_step(pred_of(R"({"PRESS":"BACK"})"), gt_of(R"({"PRESS":"HOME"})"));
    REQUIRE(ev.type_match);
    REQUIRE_FALSE(ev.exact_match);

    ev = evaluate_step(pred_of(R"({"POINT":[480,320],"to":"down"})"),
                       gt_of(R"({"POINT":[480,320]})", BBox{400, 280, 560, 360}));
    REQUIRE_FALSE(ev.type_match);
}

TEST_CASE("exact match on text, swipes, status and waits") {
    auto ev = evaluate_step(pred_of(R"({"TYPE":"Hello, world!"})"),
                            gt_of(R"({"TYPE":"Hello, world!"})"));
    REQUIRE(ev.exact_match);

    // whitespace and ASCII case are normalized
    ev = evaluate_step(pred_of(R"({"TYPE":" hello, WORLD! "})"),
                       gt_of(R"({"TYPE":"Hello, world!"})"));
    REQUIRE(ev.exact_match);

    ev = evaluate_step(pred_of(R"({"TYPE":"QQ"})"), gt_of(R"({"TYPE":"QQ音乐"})"));
    REQUIRE_FALSE(ev.exact_match);

    // swipe EM is direction equality only; synthesized starts don't matter
    ev = evaluate_step(pred_of(R"({"POINT":[500,500],"to":"down"})"),
                       gt_of(R"({"POINT":[100,100],"to":"down"})"));
    REQUIRE(ev.exact_match);

    // coordinate-valued swipe targets reduce to their dominant direction
    ev = evaluate_step(pred_of(R"({"POINT":[500,200],"to":[500,800]})"),
                       gt_of(R"({"POINT":[100,100],"to":"down"})"));
    REQUIRE(ev.exact_match);

    ev = evaluate_step(pred_of(R"({"STATUS":"finish"})"), gt_of(R"({"STATUS":"impossible"})"));
    REQUIRE(ev.type_match);
    REQUIRE_FALSE(ev.exact_match);

    ev = evaluate_step(pred_of(R"({"duration":500})"), gt_of(R"({"duration":500})"));
    REQUIRE(ev.exact_match);
    ev = evaluate_step(pred_of(R"({"duration":500})"), gt_of(R"({"duration":3000})"));
    REQUIRE_FALSE(ev.exact_match);
}

TEST_CASE("dropped and unparseable predictions score false") {
    auto gt = gt_of(R"({"PRESS":"HOME"})");
    auto ev = evaluate_step(ConversionOutcome::drop("no mapping"), gt);
    REQUIRE_FALSE(ev.type_match);
    ev = evaluate_step(ConversionOutcome::fail("garbled"), gt);
    REQUIRE_FALSE(ev.type_match);
}

TEST_CASE("self-evaluation with a degenerate bbox is a full match") {
    auto pred = pred_of(R"({"POINT":[123,456]})");
    auto gt = gt_of(R"({"POINT":[123,456]})", BBox{123, 456, 123, 456});
    auto ev = evaluate_step(pred, gt);
    REQUIRE(ev.type_match);
    REQUIRE(ev.exact_match);
}

TEST_CASE("compound status actions are scored by their payload and flagged") {
    auto ev = evaluate_step(pred_of(R"({"POINT":[10,10],"STATUS":"finish"})"),
                            gt_of(R"({"POINT":[10,10]})", BBox{0, 0, 20, 20}));
    REQUIRE(ev.type_match);
    REQUIRE(ev.exact_match);
    REQUIRE(ev.status_compound);
}

TEST_CASE("exact match implies type match over randomized steps") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> coord(0, 1000);
    std::uniform_int_distribution<int> kind(0, 4);
    auto random_compact = [&]() -> std::string {
        switch (kind(rng)) {
            case 0: return "{\"POINT\":[" + std::to_string(coord(rng)) + "," +
                           std::to_string(coord(rng)) + "]}";
            case 1: return R"({"POINT":[500,500],"to":"down"})";
            case 2: return R"({"PRESS":"HOME"})";
            case 3: return R"({"TYPE":"abc"})";
            default: return R"({"STATUS":"finish"})";
        }
    };
    for (int i = 0; i < 2000; ++i) {
        auto ev = evaluate_step(pred_of(random_compact()),
                                gt_of(random_compact(), BBox{200, 200, 800, 800}));
        if (ev.exact_match) REQUIRE(ev.type_match);
    }
}

TEST_CASE("aggregate produces exact fractions and a partitioning breakdown") {
    std::vector<EvaluatedStep> steps;
    steps.push_back({{true, true, ""}, ActionType::click});
    steps.push_back({{true, false, "point outside target"}, ActionType::click});
    auto r = aggregate(steps);
    REQUIRE(r.tm_rate == 1.0);
    REQUIRE(r.em_rate == 0.5);
    REQUIRE(r.by_type.at("CLICK").n == 2);

    REQUIRE_THROWS_AS(aggregate({}), std::invalid_argument);

    steps.clear();
    steps.push_back({{false, false, "x"}, ActionType::press});
    steps.push_back({{false, false, "x"}, ActionType::swipe});
    r = aggregate(steps);
    REQUIRE(r.tm_rate == 0.0);
    REQUIRE(r.em_rate == 0.0);
}

TEST_CASE("aggregate equals a brute-force recount on random fixtures") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> type_pick(0, 6);
    std::vector<EvaluatedStep> steps;
    for (int i = 0; i < 1000; ++i) {
        const bool tm = coin(rng) == 1;
        const bool em = tm && coin(rng) == 1;
        steps.push_back({{tm, em, ""}, static_cast<ActionType>(type_pick(rng))});
    }
    const auto r = aggregate(steps);

    // independent recount
    std::int64_t tm = 0, em = 0, n = 0;
    for (const auto& s : steps) {
        ++n;
        tm += s.eval.type_match ? 1 : 0;
        em += s.eval.exact_match ? 1 : 0;
    }
    REQUIRE(r.n_steps == n);
    REQUIRE(r.tm_count == tm);
    REQUIRE(r.em_count == em);
    REQUIRE(r.em_rate <= r.tm_rate);
    std::int64_t bucket_total = 0;
    for (const auto& [_, b] : r.by_type) bucket_total += b.n;
    REQUIRE(bucket_total == n);
}

TEST_CASE("grounding point containment is inclusive") {
    BBox box{643, 462, 849, 744};
    REQUIRE(eval_grounding_point({700, 600}, box));
    REQUIRE(eval_grounding_point({643, 462}, box));  // corner on boundary
    REQUIRE(eval_grounding_point({849, 744}, box));
    REQUIRE_FALSE(eval_grounding_point({0, 0}, box));
}

TEST_CASE("IoU threshold behavior at exactly 0.5") {
    BBox a{0, 0, 100, 100};
    REQUIRE(eval_grounding_bbox(a, a));                      // IoU 1
    REQUIRE_FALSE(eval_grounding_bbox(a, {200, 200, 300, 300}));  // disjoint
    BBox half{0, 0, 100, 50};
    REQUIRE(iou(a, half) == 0.5);
    REQUIRE(eval_grounding_bbox(a, half));  // boundary accepted
}

TEST_CASE("IoU is symmetric, bounded and 1 on identity") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1000.0);
    for (int i = 0; i < 500; ++i) {
        double ax = u(rng), ay = u(rng), bx = u(rng), by = u(rng);
        BBox a{std::min(ax, bx), std::min(ay, by), std::max(ax, bx), std::max(ay, by)};
        double cx = u(rng), cy = u(rng), dx = u(rng), dy = u(rng);
        BBox b{std::min(cx, dx), std::min(cy, dy), std::max(cx, dx), std::max(cy, dy)};
        const double ab = iou(a, b);
        REQUIRE(ab == iou(b, a));
        REQUIRE(ab >= 0.0);
        REQUIRE(ab <= 1.0);
        if (a.area() > 0) REQUIRE(iou(a, a) == 1.0);
    }
}

TEST_CASE("bbox2text equality uses trimmed normalized text") {
    REQUIRE(eval_bbox2text("返回", "返回"));
    REQUIRE(eval_bbox2text(" 返回 ", "返回"));
    REQUIRE_FALSE(eval_bbox2text("QQ音乐", "QQ"));
}

TEST_CASE("pixel bboxes convert to normalized units at ingestion") {
    // <643, 462, 849, 744> on a 1092x2408 screen
    const BBox b = normalize_bbox(643, 462, 849, 744, 1092, 2408);
    REQUIRE(b.x_min == Catch::Approx(643 * 1000.0 / 1092));
    REQUIRE(b.y_max == Catch::Approx(744 * 1000.0 / 2408));
    REQUIRE_THROWS_AS(normalize_bbox(0, 0, 1, 1, 0, 10), std::invalid_argument);
}
