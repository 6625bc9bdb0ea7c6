#include "rtplan/campaign.hpp"

#include <algorithm>
#include <map>

#include "rtplan/errors.hpp"
#include "rtplan/rng.hpp"

namespace rtplan {

namespace {

Rational share(const Rational& part, const Rational& whole) {
    if (whole.is_zero()) return Rational(1);
    return part / whole;
}

MetricsRow make_average(const MetricsRow& totals, std::size_t versions) {
    MetricsRow average = totals;
    average.version = "average";
    if (versions > 0) {
        const Rational n(static_cast<std::int64_t>(versions));
        average.exec_minutes = totals.exec_minutes / n;
        average.deploy_minutes = totals.deploy_minutes / n;
        average.faults_detected = totals.faults_detected / n;
        average.faults_missed = totals.faults_missed / n;
    }
    return average;
}

}  // namespace

void validate_scenario(const Scenario& scenario) {
    std::vector<std::string> issues;
    if (scenario.params.lanes < 1) issues.push_back("params.lanes must be >= 1");
    if (scenario.params.fraction.is_negative() || scenario.params.fraction > Rational(1))
        issues.push_back("params.fraction out of range [0, 1]");
    if (scenario.params.risk_overhead_minutes_per_test.is_negative())
        issues.push_back("params.risk_overhead_minutes_per_test must be >= 0");
    if (!scenario.params.tree.root) issues.push_back("params.tree is missing");

    for (const auto& version : scenario.versions) {
        std::set<std::string> fault_ids;
        for (const auto& fault : version.faults) {
            const std::string where = "version \"" + version.label + "\" fault \"" + fault.fault_id + "\"";
            if (!fault_ids.insert(fault.fault_id).second)
                issues.push_back(where + ": duplicate fault id");
            if (fault.severity < 1 || fault.severity > 5)
                issues.push_back(where + ": severity out of range 1..5");
            if (fault.detected_by.empty()) issues.push_back(where + ": detected_by must be nonempty");
            for (const auto& id : fault.detected_by)
                if (find_test(scenario.suite, id) == nullptr)
                    issues.push_back(where + ": detected_by names unknown test \"" + id + "\"");
        }
    }
    if (!issues.empty()) throw ValidationError(issues);
}

CampaignMetrics run_campaign(const Scenario& scenario, Policy policy) {
    validate_scenario(scenario);

    PlanParameters parameters;
    parameters.fraction = scenario.params.fraction;
    parameters.fraction_basis = scenario.params.fraction_basis;
    parameters.exclude_zero_risk = scenario.params.exclude_zero_risk;

    CampaignMetrics metrics;
    metrics.totals.policy = policy;
    metrics.totals.version = "total";

    TestSuite suite = scenario.suite;          // defect history accumulates here
    std::set<std::string> automated_already;   // deployment is paid once per test

    Rational revealing_total{0};
    Rational revealing_executed_total{0};
    Rational nonrevealing_total{0};
    Rational nonrevealing_unexecuted_total{0};

    for (const auto& version : scenario.versions) {
        const Plan plan = make_plan(policy, suite, &scenario.params.tree, parameters);

        std::set<std::string> executed;
        std::set<std::string> automated;
        std::size_t risk_scored = 0;
        Rational manual_minutes{0};
        Rational automated_minutes{0};
        Rational deploy_minutes{0};

        for (const auto& entry : plan.entries) {
            const TestCase* test = find_test(suite, entry.test_id);
            switch (entry.disposition) {
                case Disposition::Automate:
                    executed.insert(entry.test_id);
                    automated.insert(entry.test_id);
                    automated_minutes += test->timing.automated_minutes;
                    if (automated_already.insert(entry.test_id).second)
                        deploy_minutes += test->timing.automation_deploy_minutes;
                    break;
                case Disposition::SelectManual:
                case Disposition::RunManual:
                    executed.insert(entry.test_id);
                    manual_minutes += test->timing.manual_minutes;
                    break;
                case Disposition::Skip:
                    break;
            }
            if (entry.risk) ++risk_scored;
        }

        MetricsRow row;
        row.policy = policy;
        row.version = version.label;
        row.exec_minutes =
            manual_minutes + automated_minutes / Rational(scenario.params.lanes);
        row.deploy_minutes = deploy_minutes + scenario.params.risk_overhead_minutes_per_test *
                                                  Rational(static_cast<std::int64_t>(risk_scored));

        std::set<std::string> revealing;
        std::vector<TaggedDefect> found;
        int detected = 0;
        for (const auto& fault : version.faults) {
            bool hit = false;
            for (const auto& id : fault.detected_by) {
                revealing.insert(id);
                if (executed.contains(id)) {
                    hit = true;
                    found.push_back({id, fault.fault_id, fault.severity});
                }
            }
            if (hit) ++detected;
        }
        row.faults_detected = Rational(detected);
        row.faults_missed = Rational(static_cast<std::int64_t>(version.faults.size()) - detected);

        std::int64_t revealing_executed = 0;
        for (const auto& id : revealing)
            if (executed.contains(id)) ++revealing_executed;
        std::int64_t nonrevealing = 0;
        std::int64_t nonrevealing_unexecuted = 0;
        for (const auto& entry : plan.entries) {
            if (revealing.contains(entry.test_id)) continue;
            ++nonrevealing;
            if (!executed.contains(entry.test_id)) ++nonrevealing_unexecuted;
        }
        row.inclusiveness =
            share(Rational(revealing_executed), Rational(static_cast<std::int64_t>(revealing.size())));
        row.precision = share(Rational(nonrevealing_unexecuted), Rational(nonrevealing));
        row.deploy_share = row.deploy_minutes.is_zero()
                               ? Rational(0)
                               : row.deploy_minutes / (row.deploy_minutes + row.exec_minutes);

        revealing_total += Rational(static_cast<std::int64_t>(revealing.size()));
        revealing_executed_total += Rational(revealing_executed);
        nonrevealing_total += Rational(nonrevealing);
        nonrevealing_unexecuted_total += Rational(nonrevealing_unexecuted);

        metrics.totals.exec_minutes += row.exec_minutes;
        metrics.totals.deploy_minutes += row.deploy_minutes;
        metrics.totals.faults_detected += row.faults_detected;
        metrics.totals.faults_missed += row.faults_missed;

        metrics.per_version.push_back(std::move(row));

        // What this version's executed tests uncovered feeds the next
        // version's probabilities.
        suite = ingest_defects(suite, version.label, found);
    }

    metrics.totals.inclusiveness = share(revealing_executed_total, revealing_total);
    metrics.totals.precision = share(nonrevealing_unexecuted_total, nonrevealing_total);
    metrics.totals.deploy_share =
        metrics.totals.deploy_minutes.is_zero()
            ? Rational(0)
            : metrics.totals.deploy_minutes / (metrics.totals.deploy_minutes + metrics.totals.exec_minutes);
    metrics.average = make_average(metrics.totals, scenario.versions.size());
    return metrics;
}

ComparisonReport compare(const Scenario& scenario, const std::vector<Policy>& policies) {
    if (policies.empty()) throw ValidationError("policy set must be nonempty");
    ComparisonReport report;
    for (const Policy policy : policies) {
        const CampaignMetrics metrics = run_campaign(scenario, policy);
        for (const auto& row : metrics.per_version) report.rows.push_back(row);
        report.rows.push_back(metrics.average);
    }
    return report;
}

Scenario generate_scenario(const GenerateParams& params) {
    std::vector<std::string> issues;
    if (params.n_tests < 1) issues.push_back("n_tests must be >= 1");
    if (params.n_versions < 0) issues.push_back("n_versions must be >= 0");
    if (params.fault_rate < 0.0 || params.fault_rate > 1.0)
        issues.push_back("fault_rate out of range [0, 1]");
    if (params.manual_minutes_min < 1 || params.manual_minutes_max < params.manual_minutes_min)
        issues.push_back("bad manual minutes range");
    if (params.automated_minutes_min < 1 || params.automated_minutes_max < params.automated_minutes_min)
        issues.push_back("bad automated minutes range");
    if (params.deploy_minutes_min < 0 || params.deploy_minutes_max < params.deploy_minutes_min)
        issues.push_back("bad deploy minutes range");
    if (params.lanes < 1) issues.push_back("lanes must be >= 1");
    if (!issues.empty()) throw ValidationError(issues);

    Scenario scenario;
    scenario.suite.name = "generated-" + std::to_string(params.seed);
    scenario.params.fraction = params.fraction;
    scenario.params.fraction_basis = params.fraction_basis;
    scenario.params.lanes = params.lanes;
    scenario.params.risk_overhead_minutes_per_test = params.risk_overhead_minutes_per_test;
    scenario.params.tree = default_tree();
    scenario.params.seed = params.seed;

    SplitMix64 suite_rng(derive_seed(params.seed, 0));
    const int id_width = static_cast<int>(std::to_string(params.n_tests).size());
    for (int i = 1; i <= params.n_tests; ++i) {
        TestCase test;
        std::string number = std::to_string(i);
        test.id = "T" + std::string(static_cast<std::size_t>(id_width) - number.size(), '0') + number;
        test.name = "generated test " + number;
        test.cost = static_cast<int>(suite_rng.uniform_int(1, 5));
        for (int q = 1; q <= 9; ++q) {
            const auto roll = suite_rng.uniform_int(0, 2);
            test.answers.emplace(QuestionId(q), roll == 0   ? Answer::Low
                                                : roll == 1 ? Answer::Medium
                                                            : Answer::High);
        }
        test.timing.manual_minutes =
            Rational(suite_rng.uniform_int(params.manual_minutes_min, params.manual_minutes_max));
        test.timing.automated_minutes =
            Rational(suite_rng.uniform_int(params.automated_minutes_min, params.automated_minutes_max));
        test.timing.automation_deploy_minutes =
            Rational(suite_rng.uniform_int(params.deploy_minutes_min, params.deploy_minutes_max));
        scenario.suite.tests.push_back(std::move(test));
    }

    for (int v = 1; v <= params.n_versions; ++v) {
        SplitMix64 version_rng(derive_seed(params.seed, static_cast<std::uint64_t>(v)));
        VersionSpec version;
        version.label = "v" + std::to_string(v);
        int fault_number = 0;
        for (int i = 0; i < params.n_tests; ++i) {
            if (!version_rng.bernoulli(params.fault_rate)) continue;
            Fault fault;
            fault.fault_id = "F-" + version.label + "-" + std::to_string(++fault_number);
            fault.severity = static_cast<int>(version_rng.uniform_int(1, 5));
            std::set<std::string> detectors;
            detectors.insert(
                scenario.suite.tests[static_cast<std::size_t>(i)].id);
            // A quarter of the faults are also visible to a second test.
            if (version_rng.bernoulli(0.25)) {
                const auto extra = version_rng.uniform_int(0, params.n_tests - 1);
                detectors.insert(scenario.suite.tests[static_cast<std::size_t>(extra)].id);
            }
            fault.detected_by.assign(detectors.begin(), detectors.end());
            version.faults.push_back(std::move(fault));
        }
        scenario.versions.push_back(std::move(version));
    }
    return scenario;
}

}  // namespace rtplan
