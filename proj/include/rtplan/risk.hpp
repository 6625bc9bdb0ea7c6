#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtplan/rational.hpp"
#include "rtplan/suite.hpp"

namespace rtplan {

// Per-test defect statistics: defect count N, mean severity S, and the
// severity-probability estimate N*S used to band tests.
struct DefectStats {
    std::string test_id;
    int defect_count = 0;       // N
    Rational mean_severity{0};  // S, 0 when N == 0
    Rational ns{0};             // N * S
};

DefectStats defect_stats(const TestCase& test);

// Maps each test to its severity probability P in 0..5. Tests without
// defects get 0. Tests with defects are ranked by N*S descending and cut
// into five equal percentile bands: the top fifth gets 5, the bottom fifth
// gets 1. Tests tied on N*S always share the best P among their tied
// positions, so the result is independent of sort order.
std::map<std::string, int> severity_probabilities(const std::vector<DefectStats>& stats);

// weight * P * C, exact. Throws ValidationError when P is outside 0..5 or
// C outside 1..5 or weight is negative.
Rational risk_exposure(int probability, int cost, const Rational& weight);

struct RiskRow {
    std::string test_id;
    DefectStats stats;
    int probability = 0;  // P, 0..5
    int cost = 1;         // C, 1..5
    Rational weight{1};
    Rational exposure{0};  // RE = weight * P * C
};

struct ScoreOptions {
    // Score only these test ids (must be a subset of the active ids). By
    // default the percentile banding runs over exactly this population;
    // set bin_over_full_population to band against all active tests
    // instead.
    std::optional<std::set<std::string>> restrict_to;
    bool bin_over_full_population = false;
};

// Risk rows for the active tests (or the restricted subset), ordered by
// exposure descending with ties broken by ascending test id.
std::vector<RiskRow> score_suite(const TestSuite& suite, const ScoreOptions& options = {});

struct SelectionResult {
    std::vector<std::string> selected;  // in score order
    std::vector<std::string> excluded;  // in score order
    Rational fraction{0};
    std::int64_t quota = 0;  // ceil(fraction * n); selected may be smaller
                             // when exclude_zero_risk withholds zero rows
};

// Takes the first ceil(fraction * n) rows of an already-scored list. With
// exclude_zero_risk, rows with RE == 0 are never selected even when that
// leaves the quota unmet. Throws ValidationError when fraction is outside
// [0, 1].
SelectionResult select_top(const std::vector<RiskRow>& rows, const Rational& fraction,
                           bool exclude_zero_risk = false);

}  // namespace rtplan
