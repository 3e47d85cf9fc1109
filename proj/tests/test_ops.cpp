#include "roht/ops.hpp"

#include "roht/errors.hpp"

#include "doctest.h"

#include <string>
#include <vector>

using namespace roht;

namespace {

ScoredAnswer qty(double n, const std::string& unit, const std::string& companion, double score) {
    return {AnswerValue::quantity(n, unit, companion), score, Source::Kb};
}

ScoredAnswer ent(const std::string& name, double score) {
    return {AnswerValue::entity(name), score, Source::Text};
}

AnswerList list(std::vector<ScoredAnswer> answers) { return AnswerList{std::move(answers)}; }

}  // namespace

TEST_CASE("verification maps each input value against the target") {
    SUBCASE("output score averages the node confidence with the input score") {
        AnswerList out = apply_operation(OpName::Verify, {"2005", "<"},
                                         {list({{AnswerValue::count(1998), 0.8, Source::Kb}})},
                                         0.6);
        REQUIRE(out.size() == 1);
        CHECK(out.top().value.surface() == "yes");
        CHECK(out.top().score == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(out.top().source == Source::Child);
    }
    SUBCASE("each input maps to its own verdict") {
        AnswerList out = apply_operation(OpName::Verify, {"2005", "<"},
                                         {list({{AnswerValue::count(2010), 0.8, Source::Kb},
                                                {AnswerValue::count(1998), 0.4, Source::Kb}})},
                                         0.6);
        REQUIRE(out.size() == 2);
        CHECK(out.answers[0].value.surface() == "no");
        CHECK(out.answers[0].score == doctest::Approx(0.7));
        CHECK(out.answers[1].value.surface() == "yes");
        CHECK(out.answers[1].score == doctest::Approx(0.5));
    }
    SUBCASE("identical verdicts merge keeping the best score") {
        AnswerList out = apply_operation(OpName::Verify, {"2005", "<"},
                                         {list({{AnswerValue::count(1998), 0.8, Source::Kb},
                                                {AnswerValue::count(2000), 0.4, Source::Kb}})},
                                         0.6);
        REQUIRE(out.size() == 1);
        CHECK(out.top().value.surface() == "yes");
        CHECK(out.top().score == doctest::Approx(0.7));
    }
    SUBCASE("unit-aware comparison") {
        UnitTable units;
        units.declare("km", "metre", 1000.0);
        AnswerList out = apply_operation(OpName::Verify, {"1500 metre", ">"},
                                         {list({qty(2, "km", "River", 0.5)})}, 0.6, units);
        REQUIRE(out.size() == 1);
        CHECK(out.top().value.surface() == "yes");
        CHECK(out.top().score == doctest::Approx(0.55));
    }
    SUBCASE("all four comparators") {
        auto verdict = [](const std::string& target, const std::string& cmp, double value) {
            AnswerList out = apply_operation(OpName::Verify, {target, cmp},
                                             {list({{AnswerValue::count(value), 1.0, Source::Kb}})},
                                             1.0);
            return out.top().value.surface();
        };
        CHECK(verdict("5", ">", 6) == "yes");
        CHECK(verdict("5", "<", 6) == "no");
        CHECK(verdict("5", "=", 5) == "yes");
        CHECK(verdict("5", "!=", 5) == "no");
    }
    SUBCASE("an empty input yields an empty verdict list") {
        CHECK(apply_operation(OpName::Verify, {"5", "<"}, {AnswerList{}}, 1.0).empty());
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(apply_operation(OpName::Verify, {"5"}, {AnswerList{}}, 1.0), OpError);
        CHECK_THROWS_AS(apply_operation(OpName::Verify, {"5", "<"}, {}, 1.0), OpError);
        CHECK_THROWS_AS(apply_operation(OpName::Verify, {"apple", "<"}, {AnswerList{}}, 1.0),
                        OpError);
        CHECK_THROWS_AS(apply_operation(OpName::Verify, {"5", ">="}, {AnswerList{}}, 1.0),
                        OpError);
        CHECK_THROWS_AS(apply_operation(OpName::Verify, {"5", "<"},
                                        {list({ent("Everest", 0.5)})}, 1.0),
                        OpError);
        CHECK_THROWS_AS(apply_operation(OpName::Verify, {"3 metre", "<"},
                                        {list({qty(5, "second", "X", 0.5)})}, 1.0),
                        OpError);
    }
}

TEST_CASE("selecting between two described quantities") {
    AnswerList nile = list({qty(6670, "km", "Nile River", 0.9)});
    AnswerList amazon = list({qty(6440, "km", "Amazon River", 0.7)});

    SUBCASE("smaller picks the lower value and keeps its score") {
        AnswerList out = apply_operation(OpName::SelectBetween, {"smaller"}, {nile, amazon}, 1.0);
        REQUIRE(out.size() == 1);
        CHECK(out.top().value.surface() == "Amazon River");
        CHECK(out.top().score == doctest::Approx(0.85));
    }
    SUBCASE("greater picks the higher value") {
        AnswerList out = apply_operation(OpName::SelectBetween, {"greater"}, {nile, amazon}, 0.8);
        CHECK(out.top().value.surface() == "Nile River");
        CHECK(out.top().score == doctest::Approx(0.85));
    }
    SUBCASE("only the top answer of each side is considered") {
        AnswerList left = list({qty(10, "km", "Short", 0.9), qty(9999, "km", "Ignored", 0.8)});
        AnswerList out = apply_operation(OpName::SelectBetween, {"greater"}, {left, amazon}, 1.0);
        CHECK(out.top().value.surface() == "Amazon River");
    }
    SUBCASE("value ties fall back to the better score, then the earlier name") {
        AnswerList a = list({qty(5, "", "Beta", 0.6)});
        AnswerList b = list({qty(5, "", "Alpha", 0.9)});
        CHECK(apply_operation(OpName::SelectBetween, {"greater"}, {a, b}, 1.0)
                  .top().value.surface() == "Alpha");
        AnswerList c = list({qty(5, "", "Beta", 0.6)});
        AnswerList d = list({qty(5, "", "Alpha", 0.6)});
        CHECK(apply_operation(OpName::SelectBetween, {"greater"}, {c, d}, 1.0)
                  .top().value.surface() == "Alpha");
    }
    SUBCASE("an empty side yields no selection") {
        CHECK(apply_operation(OpName::SelectBetween, {"greater"}, {nile, AnswerList{}}, 1.0)
                  .empty());
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(apply_operation(OpName::SelectBetween, {"biggest"}, {nile, amazon}, 1.0),
                        OpError);
        CHECK_THROWS_AS(apply_operation(OpName::SelectBetween, {"greater"}, {nile}, 1.0), OpError);
        AnswerList no_companion = list({{AnswerValue::quantity(5, "km"), 0.5, Source::Kb}});
        CHECK_THROWS_AS(
            apply_operation(OpName::SelectBetween, {"greater"}, {nile, no_companion}, 1.0),
            OpError);
        AnswerList seconds = list({qty(5, "second", "X", 0.5)});
        CHECK_THROWS_AS(apply_operation(OpName::SelectBetween, {"greater"}, {nile, seconds}, 1.0),
                        OpError);
        AnswerList entity_side = list({ent("Everest", 0.5)});
        CHECK_THROWS_AS(
            apply_operation(OpName::SelectBetween, {"greater"}, {entity_side, amazon}, 1.0),
            OpError);
    }
}

TEST_CASE("selecting the extreme among described quantities") {
    AnswerList heights = list({qty(8848, "m", "Everest", 0.9), qty(8611, "m", "K2", 0.8),
                               qty(8516, "m", "Makalu", 0.7)});

    SUBCASE("largest and smallest") {
        AnswerList out = apply_operation(OpName::SelectAmong, {"largest"}, {heights}, 0.7);
        REQUIRE(out.size() == 1);
        CHECK(out.top().value.surface() == "Everest");
        CHECK(out.top().score == doctest::Approx(0.8));  // (0.7 + 0.9) / 2
        CHECK(apply_operation(OpName::SelectAmong, {"smallest"}, {heights}, 1.0)
                  .top().value.surface() == "Makalu");
    }
    SUBCASE("value ties prefer the better score, then the earlier name") {
        AnswerList tied = list({qty(5, "", "Beta", 0.5), qty(5, "", "Alpha", 0.9)});
        CHECK(apply_operation(OpName::SelectAmong, {"largest"}, {tied}, 1.0)
                  .top().value.surface() == "Alpha");
        AnswerList fully_tied = list({qty(5, "", "Beta", 0.5), qty(5, "", "Alpha", 0.5)});
        CHECK(apply_operation(OpName::SelectAmong, {"largest"}, {fully_tied}, 1.0)
                  .top().value.surface() == "Alpha");
    }
    SUBCASE("units convert before comparing") {
        UnitTable units;
        units.declare("km", "metre", 1000.0);
        AnswerList mixed = list({qty(2, "km", "Long", 0.5), qty(1500, "metre", "Short", 0.5)});
        CHECK(apply_operation(OpName::SelectAmong, {"largest"}, {mixed}, 1.0, units)
                  .top().value.surface() == "Long");
    }
    SUBCASE("an empty input yields no selection") {
        CHECK(apply_operation(OpName::SelectAmong, {"largest"}, {AnswerList{}}, 1.0).empty());
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(apply_operation(OpName::SelectAmong, {"best"}, {heights}, 1.0), OpError);
        CHECK_THROWS_AS(apply_operation(OpName::SelectAmong, {"largest"}, {heights, heights}, 1.0),
                        OpError);
        AnswerList mixed_units = list({qty(5, "second", "A", 0.5), qty(5, "metre", "B", 0.5)});
        CHECK_THROWS_AS(apply_operation(OpName::SelectAmong, {"largest"}, {mixed_units}, 1.0),
                        OpError);
        AnswerList entities = list({ent("Everest", 0.5)});
        CHECK_THROWS_AS(apply_operation(OpName::SelectAmong, {"largest"}, {entities}, 1.0),
                        OpError);
    }
}

TEST_CASE("counting distinct answers") {
    SUBCASE("duplicates collapse; the score averages the confidence with the mean input score") {
        AnswerList kids = list({ent("Bronny", 0.8), ent("Bryce", 0.6), ent("bronny ", 0.4),
                                ent("Zhuri", 0.2)});
        AnswerList out = apply_operation(OpName::Count, {}, {kids}, 0.7);
        REQUIRE(out.size() == 1);
        CHECK(out.top().value.surface() == "3");
        CHECK(out.top().score == doctest::Approx((0.7 + 0.5) / 2.0));
    }
    SUBCASE("an empty input yields no count") {
        CHECK(apply_operation(OpName::Count, {}, {AnswerList{}}, 1.0).empty());
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(apply_operation(OpName::Count, {"x"}, {AnswerList{}}, 1.0), OpError);
        CHECK_THROWS_AS(apply_operation(OpName::Count, {}, {AnswerList{}, AnswerList{}}, 1.0),
                        OpError);
    }
}

TEST_CASE("set intersection over normalized surfaces") {
    AnswerList left = list({ent("apple", 0.9), ent("orange", 0.3)});
    AnswerList right = list({ent("Orange", 0.5), ent("plum", 0.2)});

    SUBCASE("common members keep the best occurrence") {
        AnswerList out = apply_operation(OpName::Intersection, {}, {left, right}, 1.0);
        REQUIRE(out.size() == 1);
        CHECK(out.top().value.surface() == "Orange");  // the 0.5 occurrence
        CHECK(out.top().score == doctest::Approx(0.75));
    }
    SUBCASE("no overlap yields an empty list") {
        AnswerList other = list({ent("pear", 0.9)});
        CHECK(apply_operation(OpName::Intersection, {}, {left, other}, 1.0).empty());
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(apply_operation(OpName::Intersection, {"x"}, {left, right}, 1.0), OpError);
        CHECK_THROWS_AS(apply_operation(OpName::Intersection, {}, {left}, 1.0), OpError);
    }
}

TEST_CASE("set union over normalized surfaces") {
    AnswerList left = list({ent("apple", 0.4), ent("orange", 0.9)});
    AnswerList right = list({ent("orange", 0.5), ent("peach", 0.7)});

    AnswerList out = apply_operation(OpName::Union, {}, {left, right}, 1.0);
    REQUIRE(out.size() == 3);
    // Scores: orange keeps its 0.9 occurrence -> 0.95, peach 0.85, apple 0.7.
    CHECK(out.answers[0].value.surface() == "orange");
    CHECK(out.answers[0].score == doctest::Approx(0.95));
    CHECK(out.answers[1].value.surface() == "peach");
    CHECK(out.answers[2].value.surface() == "apple");

    CHECK_THROWS_AS(apply_operation(OpName::Union, {}, {left}, 1.0), OpError);

    SUBCASE("one empty side passes the other through") {
        AnswerList solo = apply_operation(OpName::Union, {}, {left, AnswerList{}}, 1.0);
        CHECK(solo.size() == 2);
    }
}
