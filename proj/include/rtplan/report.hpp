#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtplan/campaign.hpp"
#include "rtplan/planner.hpp"
#include "rtplan/risk.hpp"
#include "rtplan/tree.hpp"

namespace rtplan {

enum class OutputFormat { Table, Csv, Json };

std::optional<OutputFormat> output_format_from_name(std::string_view name);

// All numeric rendering funnels through this: decimal, at most six
// fractional digits, trailing zeros trimmed. Formats never disagree on
// values, only on layout.
std::string format_rational(const Rational& value);

// Risk table mirroring the scoring columns (id, C, N, S, NS, P, RE); when
// a selection is given, a "selection" column marks selected/skipped rows.
std::string render_risk_rows(const std::vector<RiskRow>& rows, const SelectionResult* selection,
                             OutputFormat format);

// Classification results; with `explain`, each row carries its traversed
// path and the table format appends the texts of the consulted questions.
std::string render_classifications(const std::vector<TestClassification>& results, bool explain,
                                   OutputFormat format);

// Plan rendering: Json emits the plan document itself; Table/Csv list the
// entries ordered automate, select-manual, run-manual, skip, with
// risk-scored groups ordered by exposure descending.
std::string render_plan(const Plan& plan, OutputFormat format);

std::string render_plan_summary(const Plan& plan);

std::string render_comparison(const ComparisonReport& report, OutputFormat format);

}  // namespace rtplan
