#include "rtplan/risk.hpp"

#include <algorithm>

#include "rtplan/errors.hpp"

namespace rtplan {

DefectStats defect_stats(const TestCase& test) {
    DefectStats stats;
    stats.test_id = test.id;
    stats.defect_count = static_cast<int>(test.defects.size());
    if (stats.defect_count == 0) return stats;
    std::int64_t severity_sum = 0;
    for (const auto& defect : test.defects) severity_sum += defect.severity;
    stats.mean_severity = Rational(severity_sum, stats.defect_count);
    stats.ns = stats.mean_severity * Rational(stats.defect_count);
    return stats;
}

std::map<std::string, int> severity_probabilities(const std::vector<DefectStats>& stats) {
    std::map<std::string, int> result;

    std::vector<const DefectStats*> with_defects;
    for (const auto& entry : stats) {
        if (entry.defect_count == 0) result[entry.test_id] = 0;
        else with_defects.push_back(&entry);
    }
    if (with_defects.empty()) return result;

    std::sort(with_defects.begin(), with_defects.end(), [](const DefectStats* a, const DefectStats* b) {
        if (a->ns != b->ns) return a->ns > b->ns;
        return a->test_id < b->test_id;
    });

    // Position i of n lands in percentile band floor(5*i/n); ties on N*S
    // are then promoted to the best band within their run.
    const std::size_t n = with_defects.size();
    std::size_t group_start = 0;
    while (group_start < n) {
        std::size_t group_end = group_start + 1;
        while (group_end < n && with_defects[group_end]->ns == with_defects[group_start]->ns) ++group_end;
        const int band = 5 - static_cast<int>(5 * group_start / n);
        for (std::size_t i = group_start; i < group_end; ++i) result[with_defects[i]->test_id] = band;
        group_start = group_end;
    }
    return result;
}

Rational risk_exposure(int probability, int cost, const Rational& weight) {
    if (probability < 0 || probability > 5)
        throw ValidationError("severity probability " + std::to_string(probability) + " out of range 0..5");
    if (cost < 1 || cost > 5)
        throw ValidationError("cost " + std::to_string(cost) + " out of range 1..5");
    if (weight.is_negative()) throw ValidationError("weight must be >= 0");
    return weight * Rational(probability) * Rational(cost);
}

std::vector<RiskRow> score_suite(const TestSuite& suite, const ScoreOptions& options) {
    const std::vector<TestCase> active = active_tests(suite);

    if (options.restrict_to) {
        for (const auto& id : *options.restrict_to) {
            const auto present = std::any_of(active.begin(), active.end(),
                                             [&](const TestCase& t) { return t.id == id; });
            if (!present)
                throw ValidationError("restriction names test \"" + id + "\" which is not an active test");
        }
    }

    const auto in_population = [&](const TestCase& test) {
        return !options.restrict_to || options.restrict_to->contains(test.id);
    };

    // The banding population is the scored subset unless the caller asked
    // to band against the whole active suite.
    std::vector<DefectStats> band_stats;
    for (const auto& test : active)
        if (options.bin_over_full_population || in_population(test)) band_stats.push_back(defect_stats(test));
    const std::map<std::string, int> probabilities = severity_probabilities(band_stats);

    std::vector<RiskRow> rows;
    for (const auto& test : active) {
        if (!in_population(test)) continue;
        RiskRow row;
        row.test_id = test.id;
        row.stats = defect_stats(test);
        row.probability = probabilities.at(test.id);
        row.cost = test.cost;
        row.weight = test.weight;
        row.exposure = risk_exposure(row.probability, row.cost, row.weight);
        rows.push_back(std::move(row));
    }

    std::sort(rows.begin(), rows.end(), [](const RiskRow& a, const RiskRow& b) {
        if (a.exposure != b.exposure) return a.exposure > b.exposure;
        return a.test_id < b.test_id;
    });
    return rows;
}

SelectionResult select_top(const std::vector<RiskRow>& rows, const Rational& fraction,
                           bool exclude_zero_risk) {
    if (fraction.is_negative() || fraction > Rational(1))
        throw ValidationError("fraction " + fraction.to_decimal() + " out of range [0, 1]");

    SelectionResult result;
    result.fraction = fraction;
    result.quota = Rational::ceil_mul(fraction, static_cast<std::int64_t>(rows.size()));

    for (const auto& row : rows) {
        const bool want = static_cast<std::int64_t>(result.selected.size()) < result.quota &&
                          !(exclude_zero_risk && row.exposure.is_zero());
        (want ? result.selected : result.excluded).push_back(row.test_id);
    }
    return result;
}

}  // namespace rtplan
