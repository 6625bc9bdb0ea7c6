#include "rtplan/report.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rtplan {

namespace {

using nlohmann::ordered_json;

std::string csv_cell(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string escaped = "\"";
    for (const char c : value) {
        if (c == '"') escaped += "\"\"";
        else escaped += c;
    }
    escaped += '"';
    return escaped;
}

// Left-aligned fixed-width table; header separator uses dashes.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) widths[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());

    std::ostringstream out;
    const auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < widths.size(); ++c) {
            const std::string& cell = c < row.size() ? row[c] : std::string();
            out << cell;
            if (c + 1 < widths.size()) out << std::string(widths[c] - cell.size() + 2, ' ');
        }
        out << '\n';
    };
    emit(header);
    std::string rule;
    for (std::size_t c = 0; c < widths.size(); ++c) {
        rule += std::string(widths[c], '-');
        if (c + 1 < widths.size()) rule += "  ";
    }
    out << rule << '\n';
    for (const auto& row : rows) emit(row);
    return out.str();
}

std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    const auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out << ',';
            out << csv_cell(row[c]);
        }
        out << '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    return out.str();
}

ordered_json rational_number(const Rational& value) {
    if (value.is_integer()) return value.numerator();
    return ordered_json(std::stod(value.to_decimal()));
}

std::string compact_path(const std::vector<std::pair<QuestionId, Answer>>& path) {
    std::string text;
    for (const auto& [question, answer] : path) {
        if (!text.empty()) text += " -> ";
        text += std::to_string(question.value());
        text += ':';
        text += answer_letter(answer);
    }
    return text;
}

ordered_json path_json(const std::vector<std::pair<QuestionId, Answer>>& path) {
    ordered_json array = ordered_json::array();
    for (const auto& [question, answer] : path)
        array.push_back(ordered_json::array({question.value(), std::string(1, answer_letter(answer))}));
    return array;
}

}  // namespace

std::optional<OutputFormat> output_format_from_name(std::string_view name) {
    if (name == "table") return OutputFormat::Table;
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    return std::nullopt;
}

std::string format_rational(const Rational& value) { return value.to_decimal(6); }

std::string render_risk_rows(const std::vector<RiskRow>& rows, const SelectionResult* selection,
                             OutputFormat format) {
    std::set<std::string> selected;
    if (selection) selected.insert(selection->selected.begin(), selection->selected.end());

    if (format == OutputFormat::Json) {
        ordered_json array = ordered_json::array();
        for (const auto& row : rows) {
            ordered_json node;
            node["id"] = row.test_id;
            node["C"] = row.cost;
            node["N"] = row.stats.defect_count;
            node["S"] = rational_number(row.stats.mean_severity);
            node["NS"] = rational_number(row.stats.ns);
            node["P"] = row.probability;
            node["RE"] = rational_number(row.exposure);
            if (selection) node["selected"] = selected.contains(row.test_id);
            array.push_back(std::move(node));
        }
        return array.dump(2) + "\n";
    }

    std::vector<std::string> header = {"id", "C", "N", "S", "NS", "P", "RE"};
    if (selection) header.push_back("selection");
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : rows) {
        std::vector<std::string> line = {row.test_id,
                                         std::to_string(row.cost),
                                         std::to_string(row.stats.defect_count),
                                         format_rational(row.stats.mean_severity),
                                         format_rational(row.stats.ns),
                                         std::to_string(row.probability),
                                         format_rational(row.exposure)};
        if (selection) line.push_back(selected.contains(row.test_id) ? "selected" : "skipped");
        cells.push_back(std::move(line));
    }
    return format == OutputFormat::Csv ? render_csv(header, cells) : render_table(header, cells);
}

std::string render_classifications(const std::vector<TestClassification>& results, bool explain,
                                   OutputFormat format) {
    if (format == OutputFormat::Json) {
        ordered_json array = ordered_json::array();
        for (const auto& result : results) {
            ordered_json node;
            node["id"] = result.test_id;
            if (result.classified()) {
                node["decision"] = std::string(decision_name(result.classification->decision));
                if (explain) node["path"] = path_json(result.classification->path);
            } else {
                node["decision"] = "missing-answer";
                node["missing_question"] = result.missing_question->value();
                if (explain) node["path"] = path_json(result.consulted);
            }
            array.push_back(std::move(node));
        }
        return array.dump(2) + "\n";
    }

    std::vector<std::string> header = {"id", "decision"};
    if (explain) header.push_back("path");
    std::vector<std::vector<std::string>> cells;
    std::set<int> consulted_questions;
    for (const auto& result : results) {
        std::vector<std::string> line;
        const auto& walked = result.classified() ? result.classification->path : result.consulted;
        for (const auto& [question, answer] : walked) consulted_questions.insert(question.value());
        if (result.classified()) {
            line = {result.test_id, std::string(decision_name(result.classification->decision))};
        } else {
            line = {result.test_id,
                    "missing answer: Q" + std::to_string(result.missing_question->value())};
            consulted_questions.insert(result.missing_question->value());
        }
        if (explain) line.push_back(compact_path(walked));
        cells.push_back(std::move(line));
    }

    std::string body =
        format == OutputFormat::Csv ? render_csv(header, cells) : render_table(header, cells);
    if (explain && format == OutputFormat::Table && !consulted_questions.empty()) {
        body += "\nquestions consulted:\n";
        for (const int id : consulted_questions)
            body += "  " + std::to_string(id) + ". " + std::string(question_text(QuestionId(id))) + "\n";
    }
    return body;
}

std::string render_plan(const Plan& plan, OutputFormat format) {
    if (format == OutputFormat::Json) return serialize_plan(plan);

    // Listing order: automate, select-manual, run-manual, skip; risk-scored
    // groups by exposure descending, ties by id.
    std::vector<const PlanEntry*> ordered;
    for (const auto& entry : plan.entries) ordered.push_back(&entry);
    const auto group = [](const PlanEntry& entry) {
        switch (entry.disposition) {
            case Disposition::Automate: return 0;
            case Disposition::SelectManual: return 1;
            case Disposition::RunManual: return 2;
            case Disposition::Skip: return 3;
        }
        return 4;
    };
    std::stable_sort(ordered.begin(), ordered.end(), [&](const PlanEntry* a, const PlanEntry* b) {
        if (group(*a) != group(*b)) return group(*a) < group(*b);
        if (a->risk && b->risk && a->risk->exposure != b->risk->exposure)
            return a->risk->exposure > b->risk->exposure;
        if (a->risk && b->risk) return a->test_id < b->test_id;
        return false;  // keep suite order for unscored groups
    });

    const std::vector<std::string> header = {"id", "disposition", "rationale", "RE", "path"};
    std::vector<std::vector<std::string>> cells;
    for (const PlanEntry* entry : ordered) {
        cells.push_back({entry->test_id, std::string(disposition_name(entry->disposition)),
                         std::string(rationale_name(entry->rationale)),
                         entry->risk ? format_rational(entry->risk->exposure) : "",
                         entry->classification ? compact_path(entry->classification->path) : ""});
    }
    return format == OutputFormat::Csv ? render_csv(header, cells) : render_table(header, cells);
}

std::string render_plan_summary(const Plan& plan) {
    const PlanSummary summary = summarize(plan);
    std::ostringstream out;
    out << "policy: " << policy_name(plan.policy);
    if (plan.parameters.fraction) {
        out << "  fraction: " << format_rational(*plan.parameters.fraction);
        if (plan.policy == Policy::Pt)
            out << "  basis: " << fraction_basis_name(plan.parameters.fraction_basis);
        if (plan.parameters.exclude_zero_risk) out << "  exclude-zero-risk";
    }
    out << '\n';
    out << "automate: " << summary.automate << "  select-manual: " << summary.select_manual
        << "  run-manual: " << summary.run_manual << "  skip: " << summary.skip << '\n';
    return out.str();
}

std::string render_comparison(const ComparisonReport& report, OutputFormat format) {
    if (format == OutputFormat::Json) {
        ordered_json array = ordered_json::array();
        for (const auto& row : report.rows) {
            ordered_json node;
            node["policy"] = std::string(policy_name(row.policy));
            node["version"] = row.version;
            node["exec_minutes"] = rational_number(row.exec_minutes);
            node["deploy_minutes"] = rational_number(row.deploy_minutes);
            node["faults_detected"] = rational_number(row.faults_detected);
            node["faults_missed"] = rational_number(row.faults_missed);
            node["inclusiveness"] = rational_number(row.inclusiveness);
            node["precision"] = rational_number(row.precision);
            node["deploy_share"] = rational_number(row.deploy_share);
            array.push_back(std::move(node));
        }
        return array.dump(2) + "\n";
    }

    const std::vector<std::string> header = {"policy",        "version",       "exec_minutes",
                                             "deploy_minutes", "faults_detected", "faults_missed",
                                             "inclusiveness", "precision",     "deploy_share"};
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : report.rows) {
        cells.push_back({std::string(policy_name(row.policy)), row.version,
                         format_rational(row.exec_minutes), format_rational(row.deploy_minutes),
                         format_rational(row.faults_detected), format_rational(row.faults_missed),
                         format_rational(row.inclusiveness), format_rational(row.precision),
                         format_rational(row.deploy_share)});
    }
    return format == OutputFormat::Csv ? render_csv(header, cells) : render_table(header, cells);
}

}  // namespace rtplan
