#include <doctest.h>

#include <random>

#include "rtplan/campaign.hpp"
#include "rtplan/errors.hpp"
#include "rtplan/io.hpp"
#include "../support/generators.hpp"

using namespace rtplan;

namespace {

TestCase make_test(std::string id, int cost, std::initializer_list<int> severities,
                   int manual_min = 30, int automated_min = 3, int deploy_min = 60) {
    TestCase test;
    test.id = std::move(id);
    test.cost = cost;
    // answers put every test on the manual side of the default tree unless
    // changed by the caller
    test.answers.emplace(QuestionId(1), Answer::Medium);
    test.answers.emplace(QuestionId(3), Answer::Low);
    int i = 0;
    for (const int severity : severities)
        test.defects.push_back({"D-" + test.id + "-" + std::to_string(++i), severity, "history"});
    test.timing.manual_minutes = Rational(manual_min);
    test.timing.automated_minutes = Rational(automated_min);
    test.timing.automation_deploy_minutes = Rational(deploy_min);
    return test;
}

void make_automatable(TestCase& test) {
    test.answers.clear();
    test.answers.emplace(QuestionId(1), Answer::High);
    test.answers.emplace(QuestionId(9), Answer::High);
}

Scenario small_scenario() {
    Scenario scenario;
    scenario.suite.name = "small";
    scenario.suite.tests.push_back(make_test("t1", 5, {3, 3}));
    scenario.suite.tests.push_back(make_test("t2", 4, {2}));
    scenario.suite.tests.push_back(make_test("t3", 3, {}));
    make_automatable(scenario.suite.tests[1]);
    scenario.versions.push_back({"v1", {{"F1", 4, {"t1"}}}});
    scenario.versions.push_back({"v2", {}});
    scenario.params.tree = default_tree();
    return scenario;
}

}  // namespace

TEST_CASE("validate_scenario rejects broken scenarios") {
    Scenario scenario = small_scenario();
    SUBCASE("valid as built") { CHECK_NOTHROW(validate_scenario(scenario)); }
    SUBCASE("unknown detected_by id") {
        scenario.versions[0].faults[0].detected_by.push_back("ghost");
        CHECK_THROWS_AS(validate_scenario(scenario), ValidationError);
    }
    SUBCASE("duplicate fault id within a version") {
        scenario.versions[0].faults.push_back({"F1", 2, {"t2"}});
        CHECK_THROWS_AS(validate_scenario(scenario), ValidationError);
    }
    SUBCASE("empty detected_by") {
        scenario.versions[0].faults[0].detected_by.clear();
        CHECK_THROWS_AS(validate_scenario(scenario), ValidationError);
    }
    SUBCASE("lanes must be positive") {
        scenario.params.lanes = 0;
        CHECK_THROWS_AS(validate_scenario(scenario), ValidationError);
    }
    SUBCASE("severity range") {
        scenario.versions[0].faults[0].severity = 9;
        CHECK_THROWS_AS(validate_scenario(scenario), ValidationError);
    }
}

TEST_CASE("retest-all misses nothing and pays no deployment") {
    const Scenario scenario = small_scenario();
    const CampaignMetrics metrics = run_campaign(scenario, Policy::RetestAll);
    CHECK(metrics.totals.faults_missed == Rational(0));
    CHECK(metrics.totals.deploy_minutes == Rational(0));
    for (const auto& row : metrics.per_version) {
        CHECK(row.inclusiveness == Rational(1));
        CHECK(row.deploy_share == Rational(0));
    }
    // exec = sum of manual minutes, every version
    CHECK(metrics.per_version[0].exec_minutes == Rational(90));
    CHECK(metrics.per_version[1].exec_minutes == Rational(90));
}

TEST_CASE("atvm executes everything, split between lanes and hands") {
    Scenario scenario = small_scenario();
    scenario.params.lanes = 2;
    const CampaignMetrics metrics = run_campaign(scenario, Policy::Atvm);

    CHECK(metrics.totals.faults_missed == Rational(0));
    CHECK(metrics.totals.inclusiveness == Rational(1));
    // t2 automated (3 min / 2 lanes), t1 + t3 manual (60)
    CHECK(metrics.per_version[0].exec_minutes == Rational(60) + Rational(3, 2));
    // deployment paid once for t2, nothing in v2
    CHECK(metrics.per_version[0].deploy_minutes == Rational(60));
    CHECK(metrics.per_version[1].deploy_minutes == Rational(0));
}

TEST_CASE("a fault-free version detects and misses nothing under every policy") {
    const Scenario scenario = small_scenario();
    for (const Policy policy : {Policy::RetestAll, Policy::Tsra, Policy::Atvm, Policy::Pt}) {
        const CampaignMetrics metrics = run_campaign(scenario, policy);
        CHECK(metrics.per_version[1].faults_detected == Rational(0));
        CHECK(metrics.per_version[1].faults_missed == Rational(0));
    }
}

TEST_CASE("tsra pays risk overhead for every active test, every version") {
    Scenario scenario = small_scenario();
    scenario.params.risk_overhead_minutes_per_test = Rational(2);
    const CampaignMetrics metrics = run_campaign(scenario, Policy::Tsra);
    // 3 active tests * 2 minutes * 2 versions, no automation deployment
    CHECK(metrics.totals.deploy_minutes == Rational(12));
    CHECK(metrics.per_version[0].deploy_minutes == Rational(6));
}

TEST_CASE("pt pays automation once plus pool overhead") {
    Scenario scenario = small_scenario();
    scenario.params.risk_overhead_minutes_per_test = Rational(2);
    const CampaignMetrics metrics = run_campaign(scenario, Policy::Pt);
    // pool = {t1, t3}: overhead 4 per version; t2 deployment 60 in v1 only
    CHECK(metrics.per_version[0].deploy_minutes == Rational(64));
    CHECK(metrics.per_version[1].deploy_minutes == Rational(4));
}

TEST_CASE("detected faults feed the next version's selection") {
    // Five tests, quota 2. tX is selected and its detected fault raises its
    // defect history; the band shift demotes tY below tZ, so version 2
    // selects {tX, tZ} and catches F2. Planning v2 against the initial
    // history would select {tX, tY} and miss F2.
    Scenario scenario;
    scenario.suite.name = "accumulation";
    scenario.suite.tests.push_back(make_test("tX", 5, {3, 3}));
    scenario.suite.tests.push_back(make_test("tY", 3, {5, 5}));
    scenario.suite.tests.push_back(make_test("tZ", 5, {2}));
    scenario.suite.tests.push_back(make_test("tW1", 1, {1}));
    scenario.suite.tests.push_back(make_test("tW2", 1, {1}));
    scenario.versions.push_back({"v1", {{"F1", 5, {"tX"}}}});
    scenario.versions.push_back({"v2", {{"F2", 3, {"tZ"}}}});
    scenario.params.tree = default_tree();
    scenario.params.fraction = Rational(2, 5);

    const CampaignMetrics metrics = run_campaign(scenario, Policy::Tsra);
    CHECK(metrics.per_version[0].faults_detected == Rational(1));
    CHECK(metrics.per_version[0].faults_missed == Rational(0));
    CHECK(metrics.per_version[1].faults_detected == Rational(1));
    CHECK(metrics.per_version[1].faults_missed == Rational(0));
}

TEST_CASE("inclusiveness and precision count revealing and non-revealing tests") {
    Scenario scenario;
    scenario.suite.name = "rothermel";
    scenario.suite.tests.push_back(make_test("s1", 5, {5}));   // selected, revealing
    scenario.suite.tests.push_back(make_test("s2", 5, {4}));   // selected, non-revealing
    scenario.suite.tests.push_back(make_test("s3", 1, {}));    // skipped, revealing
    scenario.suite.tests.push_back(make_test("s4", 1, {}));    // skipped, non-revealing
    scenario.versions.push_back({"v1",
                                 {{"F1", 3, {"s1"}},            // caught
                                  {"F2", 3, {"s3"}}}});         // missed
    scenario.params.tree = default_tree();
    scenario.params.fraction = Rational(1, 2);

    const CampaignMetrics metrics = run_campaign(scenario, Policy::Tsra);
    const MetricsRow& row = metrics.per_version[0];
    CHECK(row.faults_detected == Rational(1));
    CHECK(row.faults_missed == Rational(1));
    // revealing: {s1, s3}, executed: {s1, s2} -> 1 of 2
    CHECK(row.inclusiveness == Rational(1, 2));
    // non-revealing: {s2, s4}, not executed: {s4} -> 1 of 2
    CHECK(row.precision == Rational(1, 2));
}

TEST_CASE("metrics identities hold on random scenarios") {
    std::mt19937_64 rng(2024);
    for (int iteration = 0; iteration < 60; ++iteration) {
        GenerateParams params;
        params.n_tests = 5 + static_cast<int>(rng() % 26);
        params.n_versions = 1 + static_cast<int>(rng() % 4);
        params.fault_rate = 0.25;
        params.seed = rng();
        const Scenario scenario = generate_scenario(params);

        const CampaignMetrics retest = run_campaign(scenario, Policy::RetestAll);
        const CampaignMetrics atvm = run_campaign(scenario, Policy::Atvm);
        const CampaignMetrics pt = run_campaign(scenario, Policy::Pt);
        const CampaignMetrics tsra = run_campaign(scenario, Policy::Tsra);

        std::int64_t total_faults = 0;
        for (const auto& version : scenario.versions)
            total_faults += static_cast<std::int64_t>(version.faults.size());

        for (const CampaignMetrics* metrics : {&retest, &atvm, &pt, &tsra}) {
            CHECK(metrics->totals.faults_detected + metrics->totals.faults_missed ==
                  Rational(total_faults));
            for (const auto& row : metrics->per_version) {
                CHECK(row.inclusiveness >= Rational(0));
                CHECK(row.inclusiveness <= Rational(1));
                CHECK(row.precision >= Rational(0));
                CHECK(row.precision <= Rational(1));
                CHECK(row.deploy_share >= Rational(0));
                CHECK(row.deploy_share <= Rational(1));
            }
        }

        // full-execution policies miss nothing
        CHECK(retest.totals.faults_missed == Rational(0));
        CHECK(atvm.totals.faults_missed == Rational(0));
        CHECK(retest.totals.inclusiveness == Rational(1));
        CHECK(atvm.totals.inclusiveness == Rational(1));

        // pt executes a subset of atvm's manual work on the same automate set
        CHECK(pt.totals.exec_minutes <= atvm.totals.exec_minutes);

        // deployment identities
        CHECK(retest.totals.deploy_minutes == Rational(0));
        const Rational expected_tsra_overhead =
            scenario.params.risk_overhead_minutes_per_test *
            Rational(static_cast<std::int64_t>(active_tests(scenario.suite).size())) *
            Rational(static_cast<std::int64_t>(scenario.versions.size()));
        CHECK(tsra.totals.deploy_minutes == expected_tsra_overhead);
    }
}

TEST_CASE("campaigns are deterministic") {
    const Scenario scenario = small_scenario();
    const ComparisonReport a =
        compare(scenario, {Policy::RetestAll, Policy::Tsra, Policy::Atvm, Policy::Pt});
    const ComparisonReport b =
        compare(scenario, {Policy::RetestAll, Policy::Tsra, Policy::Atvm, Policy::Pt});
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].exec_minutes == b.rows[i].exec_minutes);
        CHECK(a.rows[i].deploy_minutes == b.rows[i].deploy_minutes);
        CHECK(a.rows[i].faults_detected == b.rows[i].faults_detected);
    }
}

TEST_CASE("compare layout: one row per version plus an average, per policy") {
    const Scenario scenario = small_scenario();
    const ComparisonReport single = compare(scenario, {Policy::RetestAll});
    REQUIRE(single.rows.size() == 3);  // v1, v2, average
    CHECK(single.rows[0].version == "v1");
    CHECK(single.rows[1].version == "v2");
    CHECK(single.rows[2].version == "average");

    const ComparisonReport all =
        compare(scenario, {Policy::RetestAll, Policy::Tsra, Policy::Atvm, Policy::Pt});
    CHECK(all.rows.size() == 12);

    CHECK_THROWS_AS(compare(scenario, {}), ValidationError);
}

TEST_CASE("generate_scenario is deterministic and honors parameters") {
    GenerateParams params;
    params.n_tests = 12;
    params.n_versions = 3;
    params.fault_rate = 0.3;
    params.seed = 99;

    const Scenario a = generate_scenario(params);
    const Scenario b = generate_scenario(params);
    CHECK(serialize_scenario(a, "default") == serialize_scenario(b, "default"));
    CHECK(a.suite.tests.size() == 12);
    CHECK(a.versions.size() == 3);
    for (const auto& test : a.suite.tests) {
        CHECK(test.cost >= 1);
        CHECK(test.cost <= 5);
        CHECK(test.answers.size() == 9);
        CHECK(test.timing.manual_minutes >= Rational(10));
        CHECK(test.timing.manual_minutes <= Rational(60));
        CHECK(test.timing.automated_minutes >= Rational(1));
        CHECK(test.timing.automated_minutes <= Rational(6));
        CHECK(test.timing.automation_deploy_minutes >= Rational(30));
        CHECK(test.timing.automation_deploy_minutes <= Rational(240));
    }
    CHECK_NOTHROW(validate_scenario(a));

    SUBCASE("another seed gives another scenario") {
        params.seed = 100;
        const Scenario c = generate_scenario(params);
        CHECK(serialize_scenario(a, "default") != serialize_scenario(c, "default"));
    }
    SUBCASE("fault rate zero seeds no faults") {
        params.fault_rate = 0.0;
        const Scenario c = generate_scenario(params);
        for (const auto& version : c.versions) CHECK(version.faults.empty());
    }
    SUBCASE("scales to the training-population size") {
        params.n_tests = 500;
        const Scenario c = generate_scenario(params);
        CHECK(c.suite.tests.size() == 500);
        CHECK_NOTHROW(run_campaign(c, Policy::Pt));
    }
    SUBCASE("invalid parameters are rejected") {
        params.n_tests = 0;
        CHECK_THROWS_AS(generate_scenario(params), ValidationError);
    }
}
