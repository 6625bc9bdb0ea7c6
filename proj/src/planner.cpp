#include "rtplan/planner.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "rtplan/errors.hpp"

namespace rtplan {

namespace {

using nlohmann::ordered_json;

// Classifies every active test and fails with the full offender list, so a
// plan never aborts on just the first unanswerable test.
std::map<std::string, Classification> classify_all_or_throw(const DecisionTree& tree,
                                                            const TestSuite& suite) {
    std::vector<MissingAnswerError::Offender> offenders;
    std::map<std::string, Classification> classified;
    for (auto& result : classify_suite(tree, suite)) {
        if (result.classified()) classified.emplace(result.test_id, *std::move(result.classification));
        else offenders.push_back({result.test_id, result.missing_question->value()});
    }
    if (!offenders.empty()) throw MissingAnswerError(std::move(offenders));
    return classified;
}

ordered_json rational_number(const Rational& value) {
    if (value.is_integer()) return value.numerator();
    return ordered_json(value.to_double());
}

}  // namespace

std::string_view policy_name(Policy policy) {
    switch (policy) {
        case Policy::RetestAll: return "retest-all";
        case Policy::Tsra: return "tsra";
        case Policy::Atvm: return "atvm";
        case Policy::Pt: return "pt";
    }
    return "?";
}

std::optional<Policy> policy_from_name(std::string_view name) {
    if (name == "retest-all") return Policy::RetestAll;
    if (name == "tsra") return Policy::Tsra;
    if (name == "atvm") return Policy::Atvm;
    if (name == "pt") return Policy::Pt;
    return std::nullopt;
}

std::string_view disposition_name(Disposition disposition) {
    switch (disposition) {
        case Disposition::Automate: return "automate";
        case Disposition::SelectManual: return "select-manual";
        case Disposition::RunManual: return "run-manual";
        case Disposition::Skip: return "skip";
    }
    return "?";
}

std::string_view rationale_name(Rationale rationale) {
    switch (rationale) {
        case Rationale::TreeYes: return "tree-yes";
        case Rationale::TreeNoRiskSelected: return "tree-no+risk-selected";
        case Rationale::TreeNoRiskSkipped: return "tree-no+risk-skipped";
        case Rationale::PolicyAll: return "policy-all";
        case Rationale::RiskSelected: return "risk-selected";
        case Rationale::RiskSkipped: return "risk-skipped";
    }
    return "?";
}

std::string_view fraction_basis_name(FractionBasis basis) {
    return basis == FractionBasis::Pool ? "pool" : "total";
}

std::optional<FractionBasis> fraction_basis_from_name(std::string_view name) {
    if (name == "pool") return FractionBasis::Pool;
    if (name == "total") return FractionBasis::Total;
    return std::nullopt;
}

Plan plan_retest_all(const TestSuite& suite) {
    Plan plan;
    plan.policy = Policy::RetestAll;
    for (const auto& test : active_tests(suite))
        plan.entries.push_back({test.id, Disposition::RunManual, Rationale::PolicyAll, std::nullopt,
                                std::nullopt});
    return plan;
}

Plan plan_tsra(const TestSuite& suite, const Rational& fraction, bool exclude_zero_risk) {
    Plan plan;
    plan.policy = Policy::Tsra;
    plan.parameters.fraction = fraction;
    plan.parameters.exclude_zero_risk = exclude_zero_risk;

    const std::vector<RiskRow> rows = score_suite(suite);
    const SelectionResult selection = select_top(rows, fraction, exclude_zero_risk);

    std::map<std::string, const RiskRow*> by_id;
    for (const auto& row : rows) by_id[row.test_id] = &row;
    std::set<std::string> selected(selection.selected.begin(), selection.selected.end());

    for (const auto& test : active_tests(suite)) {
        const bool keep = selected.contains(test.id);
        plan.entries.push_back({test.id, keep ? Disposition::SelectManual : Disposition::Skip,
                                keep ? Rationale::RiskSelected : Rationale::RiskSkipped,
                                *by_id.at(test.id), std::nullopt});
    }
    return plan;
}

Plan plan_atvm(const TestSuite& suite, const DecisionTree& tree) {
    Plan plan;
    plan.policy = Policy::Atvm;

    const auto classified = classify_all_or_throw(tree, suite);
    for (const auto& test : active_tests(suite)) {
        const Classification& c = classified.at(test.id);
        const bool automate = c.decision == Decision::Automate;
        // Tree-manual tests still run: executing everything is what makes
        // this policy miss nothing.
        plan.entries.push_back({test.id, automate ? Disposition::Automate : Disposition::RunManual,
                                automate ? Rationale::TreeYes : Rationale::PolicyAll, std::nullopt, c});
    }
    return plan;
}

Plan plan_pt(const TestSuite& suite, const DecisionTree& tree, const Rational& fraction,
             FractionBasis basis, bool exclude_zero_risk) {
    Plan plan;
    plan.policy = Policy::Pt;
    plan.parameters.fraction = fraction;
    plan.parameters.fraction_basis = basis;
    plan.parameters.exclude_zero_risk = exclude_zero_risk;

    const auto classified = classify_all_or_throw(tree, suite);

    std::set<std::string> pool;
    for (const auto& [id, classification] : classified)
        if (classification.decision == Decision::Manual) pool.insert(id);

    ScoreOptions options;
    options.restrict_to = pool;
    const std::vector<RiskRow> rows = score_suite(suite, options);

    // The quota may be based on the pool (default: the fraction applies to
    // what the tree routed to risk analysis) or on the whole active count.
    SelectionResult selection;
    if (basis == FractionBasis::Pool) {
        selection = select_top(rows, fraction, exclude_zero_risk);
    } else {
        const std::int64_t total = static_cast<std::int64_t>(active_tests(suite).size());
        const std::int64_t quota = Rational::ceil_mul(fraction, total);
        selection.fraction = fraction;
        selection.quota = quota;
        for (const auto& row : rows) {
            const bool want = static_cast<std::int64_t>(selection.selected.size()) < quota &&
                              !(exclude_zero_risk && row.exposure.is_zero());
            (want ? selection.selected : selection.excluded).push_back(row.test_id);
        }
    }

    std::map<std::string, const RiskRow*> by_id;
    for (const auto& row : rows) by_id[row.test_id] = &row;
    const std::set<std::string> selected(selection.selected.begin(), selection.selected.end());

    for (const auto& test : active_tests(suite)) {
        const Classification& c = classified.at(test.id);
        if (c.decision == Decision::Automate) {
            plan.entries.push_back({test.id, Disposition::Automate, Rationale::TreeYes, std::nullopt, c});
        } else if (selected.contains(test.id)) {
            plan.entries.push_back({test.id, Disposition::SelectManual, Rationale::TreeNoRiskSelected,
                                    *by_id.at(test.id), c});
        } else {
            plan.entries.push_back({test.id, Disposition::Skip, Rationale::TreeNoRiskSkipped,
                                    *by_id.at(test.id), c});
        }
    }
    return plan;
}

Plan make_plan(Policy policy, const TestSuite& suite, const DecisionTree* tree,
               const PlanParameters& parameters) {
    const Rational fraction = parameters.fraction.value_or(Rational(7, 10));
    switch (policy) {
        case Policy::RetestAll:
            return plan_retest_all(suite);
        case Policy::Tsra:
            return plan_tsra(suite, fraction, parameters.exclude_zero_risk);
        case Policy::Atvm:
            if (!tree) throw ValidationError("policy atvm requires a decision tree");
            return plan_atvm(suite, *tree);
        case Policy::Pt:
            if (!tree) throw ValidationError("policy pt requires a decision tree");
            return plan_pt(suite, *tree, fraction, parameters.fraction_basis,
                           parameters.exclude_zero_risk);
    }
    throw ValidationError("unknown policy");
}

PlanSummary summarize(const Plan& plan) {
    PlanSummary summary;
    for (const auto& entry : plan.entries) {
        switch (entry.disposition) {
            case Disposition::Automate: summary.automate++; break;
            case Disposition::SelectManual: summary.select_manual++; break;
            case Disposition::RunManual: summary.run_manual++; break;
            case Disposition::Skip: summary.skip++; break;
        }
    }
    return summary;
}

std::string serialize_plan(const Plan& plan) {
    ordered_json root;
    root["policy"] = std::string(policy_name(plan.policy));
    ordered_json parameters = ordered_json::object();
    if (plan.parameters.fraction) {
        parameters["fraction"] = rational_number(*plan.parameters.fraction);
        parameters["fraction_basis"] = std::string(fraction_basis_name(plan.parameters.fraction_basis));
        parameters["exclude_zero_risk"] = plan.parameters.exclude_zero_risk;
    }
    root["parameters"] = parameters;
    root["entries"] = ordered_json::array();
    for (const auto& entry : plan.entries) {
        ordered_json node;
        node["id"] = entry.test_id;
        node["disposition"] = std::string(disposition_name(entry.disposition));
        node["rationale"] = std::string(rationale_name(entry.rationale));
        if (entry.risk) node["re"] = rational_number(entry.risk->exposure);
        if (entry.classification) {
            ordered_json path = ordered_json::array();
            for (const auto& [question, answer] : entry.classification->path)
                path.push_back(ordered_json::array(
                    {question.value(), std::string(1, answer_letter(answer))}));
            node["path"] = path;
        }
        root["entries"].push_back(std::move(node));
    }
    return root.dump(2) + "\n";
}

}  // namespace rtplan
