#include "rtplan/suite.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <utility>

#include <json.hpp>

#include "rtplan/errors.hpp"

namespace rtplan {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

// Collects violations so one load reports every problem at once.
struct Issues {
    std::vector<std::string> list;

    void add(const std::string& where, const std::string& what) { list.push_back(where + ": " + what); }
    void raise_if_any() const {
        if (!list.empty()) throw ValidationError(list);
    }
};

void check_keys(const json& object, const std::set<std::string>& allowed, const std::string& where,
                bool lenient, Issues& issues) {
    if (lenient) return;
    for (const auto& [key, value] : object.items()) {
        if (!allowed.contains(key)) issues.add(where, "unknown key " + quote(key));
    }
}

// Numbers arrive as JSON doubles/ints; convert through the shortest decimal
// form so "1.5" means exactly 3/2.
Rational rational_field(const json& value, const std::string& where, Issues& issues) {
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (value.is_number_float()) return Rational::from_double(value.get<double>());
    issues.add(where, "expected a number");
    return Rational(0);
}

int int_field(const json& value, const std::string& where, Issues& issues) {
    if (value.is_number_integer()) return value.get<int>();
    issues.add(where, "expected an integer");
    return 0;
}

std::string string_field(const json& value, const std::string& where, Issues& issues) {
    if (value.is_string()) return value.get<std::string>();
    issues.add(where, "expected a string");
    return {};
}

DefectRecord parse_defect(const json& node, const std::string& where, bool lenient, Issues& issues) {
    DefectRecord record;
    if (!node.is_object()) {
        issues.add(where, "expected an object");
        return record;
    }
    check_keys(node, {"id", "severity", "version"}, where, lenient, issues);
    if (node.contains("id")) record.defect_id = string_field(node["id"], where + ".id", issues);
    else issues.add(where, "missing key \"id\"");
    if (node.contains("severity")) {
        record.severity = int_field(node["severity"], where + ".severity", issues);
        if (record.severity < 1 || record.severity > 5)
            issues.add(where + ".severity", "value " + std::to_string(record.severity) + " out of range 1..5");
    } else {
        issues.add(where, "missing key \"severity\"");
    }
    if (node.contains("version")) record.version = string_field(node["version"], where + ".version", issues);
    else issues.add(where, "missing key \"version\"");
    return record;
}

TimingProfile parse_timing(const json& node, const std::string& where, bool lenient, Issues& issues) {
    TimingProfile timing;
    if (!node.is_object()) {
        issues.add(where, "expected an object");
        return timing;
    }
    check_keys(node, {"manual_minutes", "automated_minutes", "automation_deploy_minutes"}, where, lenient,
               issues);
    if (node.contains("manual_minutes")) {
        timing.manual_minutes = rational_field(node["manual_minutes"], where + ".manual_minutes", issues);
        if (!(timing.manual_minutes > Rational(0)))
            issues.add(where + ".manual_minutes", "must be > 0");
    }
    if (node.contains("automated_minutes")) {
        timing.automated_minutes =
            rational_field(node["automated_minutes"], where + ".automated_minutes", issues);
        if (!(timing.automated_minutes > Rational(0)))
            issues.add(where + ".automated_minutes", "must be > 0");
    }
    if (node.contains("automation_deploy_minutes")) {
        timing.automation_deploy_minutes =
            rational_field(node["automation_deploy_minutes"], where + ".automation_deploy_minutes", issues);
        if (timing.automation_deploy_minutes.is_negative())
            issues.add(where + ".automation_deploy_minutes", "must be >= 0");
    }
    return timing;
}

AnswerMap parse_answers(const json& node, const std::string& where, Issues& issues) {
    AnswerMap answers;
    if (!node.is_object()) {
        issues.add(where, "expected an object");
        return answers;
    }
    for (const auto& [key, value] : node.items()) {
        int id = 0;
        const auto* begin = key.data();
        const auto* end = key.data() + key.size();
        const auto [parsed, ec] = std::from_chars(begin, end, id);
        if (ec != std::errc{} || parsed != end || id < 1 || id > 9) {
            issues.add(where, "unknown question id " + quote(key) + " (expected \"1\"..\"9\")");
            continue;
        }
        if (!value.is_string()) {
            issues.add(where + "." + key, "expected \"L\", \"M\" or \"H\"");
            continue;
        }
        const auto answer = answer_from_letter(value.get<std::string>());
        if (!answer) {
            issues.add(where + "." + key,
                       "unknown answer letter " + quote(value.get<std::string>()) + " (expected L/M/H)");
            continue;
        }
        answers.emplace(QuestionId(id), *answer);
    }
    return answers;
}

TestCase parse_test(const json& node, const std::string& where, bool lenient, Issues& issues) {
    TestCase test;
    if (!node.is_object()) {
        issues.add(where, "expected an object");
        return test;
    }
    check_keys(node, {"id", "name", "cost", "status", "answers", "weight", "timing", "defects"}, where,
               lenient, issues);

    if (node.contains("id")) test.id = string_field(node["id"], where + ".id", issues);
    if (test.id.empty()) issues.add(where, "test id must be a non-empty string");

    const std::string label = test.id.empty() ? where : where + " (id " + quote(test.id) + ")";

    if (node.contains("name")) test.name = string_field(node["name"], label + ".name", issues);

    if (node.contains("cost")) {
        test.cost = int_field(node["cost"], label + ".cost", issues);
        if (test.cost < 1 || test.cost > 5)
            issues.add(label + ".cost", "value " + std::to_string(test.cost) + " out of range 1..5");
    } else {
        issues.add(label, "missing key \"cost\"");
    }

    if (node.contains("status")) {
        const std::string status = string_field(node["status"], label + ".status", issues);
        if (status == "active") test.status = TestStatus::Active;
        else if (status == "obsolete") test.status = TestStatus::Obsolete;
        else issues.add(label + ".status", "expected \"active\" or \"obsolete\", got " + quote(status));
    }

    if (node.contains("answers")) test.answers = parse_answers(node["answers"], label + ".answers", issues);

    if (node.contains("weight")) {
        test.weight = rational_field(node["weight"], label + ".weight", issues);
        if (test.weight.is_negative()) issues.add(label + ".weight", "must be >= 0");
    }

    if (node.contains("timing")) test.timing = parse_timing(node["timing"], label + ".timing", lenient, issues);

    if (node.contains("defects")) {
        if (!node["defects"].is_array()) {
            issues.add(label + ".defects", "expected an array");
        } else {
            std::size_t i = 0;
            for (const auto& defect : node["defects"]) {
                test.defects.push_back(
                    parse_defect(defect, label + ".defects[" + std::to_string(i) + "]", lenient, issues));
                ++i;
            }
        }
    }
    return test;
}

ordered_json timing_to_json(const TimingProfile& timing);

}  // namespace

QuestionId::QuestionId(int value) : value_(value) {
    if (value < 1 || value > 9)
        throw ValidationError("question id " + std::to_string(value) + " out of range 1..9");
}

char answer_letter(Answer answer) {
    switch (answer) {
        case Answer::Low: return 'L';
        case Answer::Medium: return 'M';
        case Answer::High: return 'H';
    }
    return '?';
}

std::optional<Answer> answer_from_letter(std::string_view letter) {
    if (letter == "L") return Answer::Low;
    if (letter == "M") return Answer::Medium;
    if (letter == "H") return Answer::High;
    return std::nullopt;
}

TestSuite load_suite(std::string_view document, const LoadOptions& options) {
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("suite document is not valid JSON: ") + e.what());
    }

    Issues issues;
    TestSuite suite;
    if (!root.is_object()) {
        issues.add("document", "expected a top-level object");
        issues.raise_if_any();
    }
    check_keys(root, {"suite", "tests"}, "document", options.lenient, issues);
    if (root.contains("suite")) suite.name = string_field(root["suite"], "suite", issues);
    if (!root.contains("tests") || !root["tests"].is_array()) {
        issues.add("document", "missing \"tests\" array");
        issues.raise_if_any();
    }

    std::size_t index = 0;
    for (const auto& node : root["tests"]) {
        suite.tests.push_back(parse_test(node, "tests[" + std::to_string(index) + "]", options.lenient, issues));
        ++index;
    }

    if (suite.tests.empty()) issues.add("document", "a suite must contain at least one test");

    std::set<std::string_view> seen;
    for (const auto& test : suite.tests) {
        if (test.id.empty()) continue;
        if (!seen.insert(test.id).second) issues.add("tests", "duplicate test id " + quote(test.id));
    }

    issues.raise_if_any();
    return suite;
}

namespace {

ordered_json timing_to_json(const TimingProfile& timing) {
    const auto number = [](const Rational& r) -> ordered_json {
        if (r.is_integer()) return r.numerator();
        return ordered_json(r.to_double());
    };
    return ordered_json{{"manual_minutes", number(timing.manual_minutes)},
                        {"automated_minutes", number(timing.automated_minutes)},
                        {"automation_deploy_minutes", number(timing.automation_deploy_minutes)}};
}

}  // namespace

std::string serialize_suite(const TestSuite& suite) {
    ordered_json root;
    root["suite"] = suite.name;
    root["tests"] = ordered_json::array();
    for (const auto& test : suite.tests) {
        ordered_json node;
        node["id"] = test.id;
        node["name"] = test.name;
        node["cost"] = test.cost;
        node["status"] = test.status == TestStatus::Active ? "active" : "obsolete";
        ordered_json answers = ordered_json::object();
        for (const auto& [question, answer] : test.answers)
            answers[std::to_string(question.value())] = std::string(1, answer_letter(answer));
        node["answers"] = answers;
        if (test.weight.is_integer()) node["weight"] = test.weight.numerator();
        else node["weight"] = test.weight.to_double();
        node["timing"] = timing_to_json(test.timing);
        node["defects"] = ordered_json::array();
        for (const auto& defect : test.defects)
            node["defects"].push_back(ordered_json{{"id", defect.defect_id},
                                                   {"severity", defect.severity},
                                                   {"version", defect.version}});
        root["tests"].push_back(std::move(node));
    }
    return root.dump(2) + "\n";
}

std::vector<std::string> suite_warnings(const TestSuite& suite) {
    std::vector<std::string> warnings;
    for (const auto& test : suite.tests) {
        if (test.timing.automated_minutes > test.timing.manual_minutes)
            warnings.push_back("test " + quote(test.id) +
                               ": automated_minutes exceeds manual_minutes (automation would slow this test)");
    }
    return warnings;
}

TestSuite ingest_defects(const TestSuite& suite, const std::string& version,
                         const std::vector<TaggedDefect>& records) {
    Issues issues;
    for (const auto& record : records) {
        if (find_test(suite, record.test_id) == nullptr)
            issues.add("records", "unknown test id " + quote(record.test_id));
        if (record.severity < 1 || record.severity > 5)
            issues.add("records",
                       "defect " + quote(record.defect_id) + ": severity " +
                           std::to_string(record.severity) + " out of range 1..5");
    }
    issues.raise_if_any();

    TestSuite updated = suite;
    for (const auto& record : records) {
        for (auto& test : updated.tests) {
            if (test.id != record.test_id) continue;
            const bool already = std::any_of(
                test.defects.begin(), test.defects.end(), [&](const DefectRecord& existing) {
                    return existing.defect_id == record.defect_id && existing.version == version;
                });
            if (!already)
                test.defects.push_back(DefectRecord{record.defect_id, record.severity, version});
            break;
        }
    }
    return updated;
}

std::vector<TestCase> active_tests(const TestSuite& suite) {
    std::vector<TestCase> active;
    for (const auto& test : suite.tests)
        if (test.status == TestStatus::Active) active.push_back(test);
    return active;
}

const TestCase* find_test(const TestSuite& suite, std::string_view id) {
    for (const auto& test : suite.tests)
        if (test.id == id) return &test;
    return nullptr;
}

}  // namespace rtplan
