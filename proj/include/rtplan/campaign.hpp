#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rtplan/planner.hpp"
#include "rtplan/rational.hpp"
#include "rtplan/suite.hpp"
#include "rtplan/tree.hpp"

namespace rtplan {

struct Fault {
    std::string fault_id;
    int severity = 1;  // 1..5
    std::vector<std::string> detected_by;  // nonempty; ids must exist in the suite
};

struct VersionSpec {
    std::string label;
    std::vector<Fault> faults;  // may be empty
};

struct ScenarioParams {
    Rational fraction{7, 10};
    FractionBasis fraction_basis = FractionBasis::Pool;
    bool exclude_zero_risk = false;
    int lanes = 4;  // parallel lanes for automated execution
    Rational risk_overhead_minutes_per_test{2};
    DecisionTree tree;
    std::uint64_t seed = 0;
};

struct Scenario {
    TestSuite suite;
    std::vector<VersionSpec> versions;
    ScenarioParams params;
};

// Throws ValidationError when a fault references an unknown test, a fault
// id repeats within a version, detected_by is empty, or lanes < 1.
void validate_scenario(const Scenario& scenario);

// One row of campaign measurements. Counts are rationals so the same row
// type can carry per-version integers and fractional averages.
struct MetricsRow {
    Policy policy = Policy::RetestAll;
    std::string version;  // version label, "total" or "average"
    Rational exec_minutes{0};
    Rational deploy_minutes{0};
    Rational faults_detected{0};
    Rational faults_missed{0};
    Rational inclusiveness{1};
    Rational precision{1};
    Rational deploy_share{0};  // deploy / (deploy + exec)
};

struct CampaignMetrics {
    std::vector<MetricsRow> per_version;
    MetricsRow totals;   // sums; inclusiveness/precision pooled over versions
    MetricsRow average;  // per-version means; pooled inclusiveness/precision
};

// Replays the campaign under one policy. Per version: plan against the
// defect history accumulated so far, execute the planned tests, detect the
// faults whose detected_by set intersects the executed set, then ingest
// the detected faults as defect records before the next version is
// planned. Automation deployment cost is paid once per test for the whole
// campaign; risk-scored tests additionally pay the per-test risk overhead
// every version they are scored.
CampaignMetrics run_campaign(const Scenario& scenario, Policy policy);

struct ComparisonReport {
    std::vector<MetricsRow> rows;  // per policy: one row per version + average
};

ComparisonReport compare(const Scenario& scenario, const std::vector<Policy>& policies);

struct GenerateParams {
    int n_tests = 20;
    int n_versions = 3;
    double fault_rate = 0.15;  // per-test chance of spawning a fault each version
    std::uint64_t seed = 1;
    // Sampling ranges (whole minutes).
    int manual_minutes_min = 10;
    int manual_minutes_max = 60;
    int automated_minutes_min = 1;
    int automated_minutes_max = 6;
    int deploy_minutes_min = 30;
    int deploy_minutes_max = 240;
    // Campaign parameters copied into the scenario.
    Rational fraction{7, 10};
    FractionBasis fraction_basis = FractionBasis::Pool;
    int lanes = 4;
    Rational risk_overhead_minutes_per_test{2};
};

// Deterministic pseudo-random scenario: same params and seed, same
// scenario. Costs uniform 1..5, all nine questions answered uniformly,
// timings from the stated ranges, faults attached to uniformly chosen
// tests. Uses the default decision tree.
Scenario generate_scenario(const GenerateParams& params);

}  // namespace rtplan
