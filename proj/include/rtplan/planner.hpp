#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtplan/risk.hpp"
#include "rtplan/suite.hpp"
#include "rtplan/tree.hpp"

namespace rtplan {

enum class Policy { RetestAll, Tsra, Atvm, Pt };

std::string_view policy_name(Policy policy);  // "retest-all" / "tsra" / "atvm" / "pt"
std::optional<Policy> policy_from_name(std::string_view name);

enum class Disposition { Automate, SelectManual, RunManual, Skip };
enum class Rationale { TreeYes, TreeNoRiskSelected, TreeNoRiskSkipped, PolicyAll, RiskSelected, RiskSkipped };

std::string_view disposition_name(Disposition disposition);
std::string_view rationale_name(Rationale rationale);

// How the selection quota of the hybrid policy is computed: against the
// tree-manual pool (default) or against the whole active test count.
enum class FractionBasis { Pool, Total };

std::string_view fraction_basis_name(FractionBasis basis);
std::optional<FractionBasis> fraction_basis_from_name(std::string_view name);

struct PlanParameters {
    std::optional<Rational> fraction;  // unset for policies that do not select
    FractionBasis fraction_basis = FractionBasis::Pool;
    bool exclude_zero_risk = false;
};

struct PlanEntry {
    std::string test_id;
    Disposition disposition;
    Rationale rationale;
    std::optional<RiskRow> risk;                    // present when the test was risk-scored
    std::optional<Classification> classification;   // present when the tree was consulted
};

// A total partition of the active tests. Entries are in suite order;
// identical inputs serialize to identical bytes.
struct Plan {
    Policy policy = Policy::RetestAll;
    PlanParameters parameters;
    std::vector<PlanEntry> entries;
};

// Every active test is executed manually.
Plan plan_retest_all(const TestSuite& suite);

// Risk selection: score all active tests, keep the top fraction, skip the
// rest.
Plan plan_tsra(const TestSuite& suite, const Rational& fraction, bool exclude_zero_risk = false);

// Tree classification: automate the tree-automate tests, run everything
// else manually. Nothing is skipped. Throws MissingAnswerError listing
// every test whose tree path hits an unanswered question.
Plan plan_atvm(const TestSuite& suite, const DecisionTree& tree);

// Hybrid: the tree routes each test either to automation or into a risk
// pool; the pool is scored (banded within itself) and the top fraction of
// the quota basis is selected, the remainder skipped.
Plan plan_pt(const TestSuite& suite, const DecisionTree& tree, const Rational& fraction,
             FractionBasis basis = FractionBasis::Pool, bool exclude_zero_risk = false);

// Policy dispatcher used by the CLI and the campaign simulator. `tree`
// may be null for RetestAll/TSRA.
Plan make_plan(Policy policy, const TestSuite& suite, const DecisionTree* tree,
               const PlanParameters& parameters);

struct PlanSummary {
    int automate = 0;
    int select_manual = 0;
    int run_manual = 0;
    int skip = 0;

    int executed() const { return automate + select_manual + run_manual; }
};

PlanSummary summarize(const Plan& plan);

// Plan document (JSON) with parameters and the full audit trail.
std::string serialize_plan(const Plan& plan);

}  // namespace rtplan
