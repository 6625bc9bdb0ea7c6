#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "rtplan/errors.hpp"
#include "rtplan/planner.hpp"
#include "../support/generators.hpp"

using namespace rtplan;

namespace {

AnswerMap automate_answers() {
    // default tree: 1=H then 9=H ends at an automate leaf
    AnswerMap answers;
    answers.emplace(QuestionId(1), Answer::High);
    answers.emplace(QuestionId(9), Answer::High);
    return answers;
}

AnswerMap manual_answers() {
    // default tree: 1=M then 3=L ends at a manual leaf
    AnswerMap answers;
    answers.emplace(QuestionId(1), Answer::Medium);
    answers.emplace(QuestionId(3), Answer::Low);
    return answers;
}

TestCase make_test(std::string id, int cost, AnswerMap answers,
                   std::initializer_list<int> severities = {}) {
    TestCase test;
    test.id = std::move(id);
    test.cost = cost;
    test.answers = std::move(answers);
    int i = 0;
    for (const int severity : severities)
        test.defects.push_back({"D" + std::to_string(++i), severity, "v1"});
    return test;
}

// Four tests mirroring the cost/defect reference rows.
TestSuite reference_suite() {
    TestSuite suite;
    suite.name = "reference";
    suite.tests.push_back(make_test("1000", 5, manual_answers(), {2}));
    suite.tests.push_back(make_test("1010", 5, manual_answers(), {3}));
    suite.tests.push_back(make_test("1020", 4, manual_answers(), {3, 3}));
    suite.tests.push_back(make_test("1030", 3, manual_answers()));
    return suite;
}

std::map<std::string, const PlanEntry*> entries_by_id(const Plan& plan) {
    std::map<std::string, const PlanEntry*> map;
    for (const auto& entry : plan.entries) map[entry.test_id] = &entry;
    return map;
}

void check_partition(const Plan& plan, const TestSuite& suite) {
    const auto active = active_tests(suite);
    REQUIRE(plan.entries.size() == active.size());
    std::set<std::string> seen;
    for (const auto& entry : plan.entries) CHECK(seen.insert(entry.test_id).second);
    for (const auto& test : active) CHECK(seen.contains(test.id));
}

void check_rationale_consistency(const Plan& plan) {
    for (const auto& entry : plan.entries) {
        switch (entry.disposition) {
            case Disposition::Automate:
                CHECK(entry.rationale == Rationale::TreeYes);
                break;
            case Disposition::SelectManual:
                CHECK((entry.rationale == Rationale::RiskSelected ||
                       entry.rationale == Rationale::TreeNoRiskSelected));
                break;
            case Disposition::RunManual:
                CHECK(entry.rationale == Rationale::PolicyAll);
                break;
            case Disposition::Skip:
                CHECK((entry.rationale == Rationale::RiskSkipped ||
                       entry.rationale == Rationale::TreeNoRiskSkipped));
                break;
        }
    }
}

}  // namespace

TEST_CASE("plan_retest_all runs every active test manually") {
    TestSuite suite = reference_suite();
    const Plan plan = plan_retest_all(suite);
    REQUIRE(plan.entries.size() == 4);
    for (const auto& entry : plan.entries) {
        CHECK(entry.disposition == Disposition::RunManual);
        CHECK(entry.rationale == Rationale::PolicyAll);
    }

    SUBCASE("obsolete tests are absent") {
        suite.tests[1].status = TestStatus::Obsolete;
        const Plan filtered = plan_retest_all(suite);
        CHECK(filtered.entries.size() == 3);
        CHECK_FALSE(entries_by_id(filtered).contains("1010"));
    }
    SUBCASE("empty suite gives an empty plan") {
        CHECK(plan_retest_all(TestSuite{}).entries.empty());
    }
}

TEST_CASE("plan_tsra selects the top fraction by exposure") {
    const TestSuite suite = reference_suite();
    const Plan plan = plan_tsra(suite, Rational(7, 10));
    check_partition(plan, suite);
    check_rationale_consistency(plan);

    const auto by_id = entries_by_id(plan);
    // quota = ceil(0.7 * 4) = 3; the only zero-exposure test is skipped
    CHECK(by_id.at("1000")->disposition == Disposition::SelectManual);
    CHECK(by_id.at("1010")->disposition == Disposition::SelectManual);
    CHECK(by_id.at("1020")->disposition == Disposition::SelectManual);
    CHECK(by_id.at("1030")->disposition == Disposition::Skip);
    CHECK(by_id.at("1030")->rationale == Rationale::RiskSkipped);

    SUBCASE("audit carries the risk rows") {
        for (const auto& entry : plan.entries) {
            REQUIRE(entry.risk.has_value());
            CHECK(entry.risk->test_id == entry.test_id);
        }
    }
    SUBCASE("fraction 1 skips nothing") {
        const Plan all = plan_tsra(suite, Rational(1));
        for (const auto& entry : all.entries) CHECK(entry.disposition == Disposition::SelectManual);
    }
    SUBCASE("zero-defect suite with exclude_zero_risk skips everything") {
        TestSuite zeroes;
        for (int i = 0; i < 4; ++i)
            zeroes.tests.push_back(make_test("z" + std::to_string(i), 3, manual_answers()));
        const Plan plan_z = plan_tsra(zeroes, Rational(7, 10), true);
        for (const auto& entry : plan_z.entries) CHECK(entry.disposition == Disposition::Skip);
    }
}

TEST_CASE("plan_atvm automates tree-automate tests and runs the rest") {
    TestSuite suite;
    suite.tests.push_back(make_test("auto1", 3, automate_answers()));
    suite.tests.push_back(make_test("man1", 3, manual_answers()));
    suite.tests.push_back(make_test("walkthrough", 3, AnswerMap{}));
    suite.tests.back().answers.emplace(QuestionId(1), Answer::Low);
    suite.tests.back().answers.emplace(QuestionId(2), Answer::Medium);
    suite.tests.back().answers.emplace(QuestionId(3), Answer::High);
    suite.tests.back().answers.emplace(QuestionId(7), Answer::High);

    const Plan plan = plan_atvm(suite, default_tree());
    check_partition(plan, suite);
    const auto by_id = entries_by_id(plan);
    CHECK(by_id.at("auto1")->disposition == Disposition::Automate);
    CHECK(by_id.at("walkthrough")->disposition == Disposition::Automate);
    CHECK(by_id.at("man1")->disposition == Disposition::RunManual);

    SUBCASE("nothing is skipped") {
        for (const auto& entry : plan.entries) CHECK(entry.disposition != Disposition::Skip);
    }
    SUBCASE("every entry carries its classification path") {
        for (const auto& entry : plan.entries) {
            REQUIRE(entry.classification.has_value());
            CHECK_FALSE(entry.classification->path.empty());
        }
    }
    SUBCASE("missing answers abort with the offender named") {
        suite.tests.push_back(make_test("gap", 3, AnswerMap{}));
        suite.tests.back().answers.emplace(QuestionId(1), Answer::Low);
        try {
            plan_atvm(suite, default_tree());
            FAIL("expected MissingAnswerError");
        } catch (const MissingAnswerError& e) {
            REQUIRE(e.offenders().size() == 1);
            CHECK(e.offenders()[0].test_id == "gap");
            CHECK(e.offenders()[0].question == 2);
        }
    }
}

TEST_CASE("plan_pt: tree routes, pool is scored, fraction selects") {
    // 4 automate + 6 manual tests
    TestSuite suite;
    for (int i = 0; i < 4; ++i)
        suite.tests.push_back(make_test("a" + std::to_string(i), 3, automate_answers()));
    for (int i = 0; i < 6; ++i)
        suite.tests.push_back(
            make_test("m" + std::to_string(i), (i % 5) + 1, manual_answers(), {(i % 5) + 1}));

    const Plan plan = plan_pt(suite, default_tree(), Rational(7, 10));
    check_partition(plan, suite);
    check_rationale_consistency(plan);

    const PlanSummary summary = summarize(plan);
    CHECK(summary.automate == 4);
    CHECK(summary.select_manual == 5);  // ceil(0.7 * 6)
    CHECK(summary.skip == 1);
    CHECK(summary.run_manual == 0);

    SUBCASE("audit: pool entries carry risk rows, every entry carries its path") {
        for (const auto& entry : plan.entries) {
            REQUIRE(entry.classification.has_value());
            if (entry.disposition == Disposition::SelectManual ||
                entry.disposition == Disposition::Skip)
                CHECK(entry.risk.has_value());
            else
                CHECK_FALSE(entry.risk.has_value());
        }
    }
    SUBCASE("total basis widens the quota") {
        // quota = ceil(0.7 * 10) = 7 > pool size 6, so nothing is skipped
        const Plan plan_total =
            plan_pt(suite, default_tree(), Rational(7, 10), FractionBasis::Total);
        CHECK(summarize(plan_total).skip == 0);
        CHECK(summarize(plan_total).select_manual == 6);
    }
    SUBCASE("fraction 0 skips the whole pool") {
        const Plan plan_zero = plan_pt(suite, default_tree(), Rational(0));
        CHECK(summarize(plan_zero).select_manual == 0);
        CHECK(summarize(plan_zero).skip == 6);
        CHECK(summarize(plan_zero).automate == 4);
    }
}

TEST_CASE("plan_pt with an all-automate suite has no pool") {
    TestSuite suite;
    for (int i = 0; i < 5; ++i)
        suite.tests.push_back(make_test("a" + std::to_string(i), 3, automate_answers()));
    const Plan plan = plan_pt(suite, default_tree(), Rational(7, 10));
    const PlanSummary summary = summarize(plan);
    CHECK(summary.automate == 5);
    CHECK(summary.select_manual == 0);
    CHECK(summary.skip == 0);
}

TEST_CASE("pt and atvm agree on the automate set; pt never skips more than tsra") {
    std::mt19937_64 rng(777);
    for (int iteration = 0; iteration < 100; ++iteration) {
        const TestSuite suite = testsupport::random_answered_suite(rng, 1 + static_cast<int>(rng() % 25));
        const DecisionTree tree = testsupport::random_tree(rng);
        const Rational fraction(static_cast<std::int64_t>(rng() % 101), 100);

        const Plan pt = plan_pt(suite, tree, fraction);
        const Plan atvm = plan_atvm(suite, tree);
        const Plan tsra = plan_tsra(suite, fraction);

        std::set<std::string> pt_auto;
        std::set<std::string> atvm_auto;
        for (const auto& entry : pt.entries)
            if (entry.disposition == Disposition::Automate) pt_auto.insert(entry.test_id);
        for (const auto& entry : atvm.entries)
            if (entry.disposition == Disposition::Automate) atvm_auto.insert(entry.test_id);
        REQUIRE(pt_auto == atvm_auto);

        CHECK(summarize(pt).skip <= summarize(tsra).skip);
        check_partition(pt, suite);
        check_partition(atvm, suite);
        check_partition(tsra, suite);
        check_rationale_consistency(pt);
    }
}

TEST_CASE("plans serialize deterministically") {
    const TestSuite suite = reference_suite();
    const Plan a = plan_tsra(suite, Rational(7, 10));
    const Plan b = plan_tsra(suite, Rational(7, 10));
    CHECK(serialize_plan(a) == serialize_plan(b));

    const std::string document = serialize_plan(a);
    CHECK(document.find("\"policy\": \"tsra\"") != std::string::npos);
    CHECK(document.find("\"fraction\": 0.7") != std::string::npos);
    CHECK(document.find("\"re\"") != std::string::npos);
}

TEST_CASE("make_plan dispatches and validates") {
    const TestSuite suite = reference_suite();
    PlanParameters parameters;
    CHECK(make_plan(Policy::RetestAll, suite, nullptr, parameters).policy == Policy::RetestAll);
    CHECK(make_plan(Policy::Tsra, suite, nullptr, parameters).policy == Policy::Tsra);
    CHECK_THROWS_AS(make_plan(Policy::Atvm, suite, nullptr, parameters), ValidationError);
    CHECK_THROWS_AS(make_plan(Policy::Pt, suite, nullptr, parameters), ValidationError);
    const DecisionTree& tree = default_tree();
    CHECK(make_plan(Policy::Pt, suite, &tree, parameters).policy == Policy::Pt);
}

TEST_CASE("policy and basis names round-trip") {
    for (const Policy policy : {Policy::RetestAll, Policy::Tsra, Policy::Atvm, Policy::Pt})
        CHECK(policy_from_name(policy_name(policy)) == policy);
    CHECK_FALSE(policy_from_name("bogus").has_value());
    for (const FractionBasis basis : {FractionBasis::Pool, FractionBasis::Total})
        CHECK(fraction_basis_from_name(fraction_basis_name(basis)) == basis);
}
