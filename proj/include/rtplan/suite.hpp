#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtplan/rational.hpp"

namespace rtplan {

// Identifier of one automation-viability question, 1..9.
class QuestionId {
  public:
    explicit QuestionId(int value);
    int value() const { return value_; }
    friend bool operator==(const QuestionId&, const QuestionId&) = default;
    friend auto operator<=>(const QuestionId&, const QuestionId&) = default;

  private:
    int value_;
};

enum class Answer { Low, Medium, High };

char answer_letter(Answer answer);
std::optional<Answer> answer_from_letter(std::string_view letter);  // "L"/"M"/"H"

using AnswerMap = std::map<QuestionId, Answer>;

enum class TestStatus { Active, Obsolete };

struct DefectRecord {
    std::string defect_id;
    int severity = 1;  // 1..5
    std::string version;
};

struct TimingProfile {
    Rational manual_minutes{30};
    Rational automated_minutes{3};
    Rational automation_deploy_minutes{120};
};

struct TestCase {
    std::string id;
    std::string name;
    int cost = 1;  // consequence scale, 1..5
    TestStatus status = TestStatus::Active;
    AnswerMap answers;       // partial; unanswered questions fail lazily
    Rational weight{1};      // risk preference multiplier, >= 0
    TimingProfile timing;
    std::vector<DefectRecord> defects;
};

struct TestSuite {
    std::string name;
    std::vector<TestCase> tests;
};

struct LoadOptions {
    bool lenient = false;  // accept unknown keys instead of rejecting them
};

// Parses and validates a suite document (JSON, see README for the schema).
// Throws ParseError on malformed JSON and ValidationError listing every
// invariant violation, each naming the offending test and field.
TestSuite load_suite(std::string_view document, const LoadOptions& options = {});

// Canonical document form; load_suite(serialize_suite(s)) == s.
std::string serialize_suite(const TestSuite& suite);

// Non-fatal findings (currently: automated_minutes > manual_minutes).
std::vector<std::string> suite_warnings(const TestSuite& suite);

struct TaggedDefect {
    std::string test_id;
    std::string defect_id;
    int severity = 1;
};

// Appends the records to the named tests' defect histories for `version`.
// Re-ingesting an existing (defect_id, version, test) triple is a no-op, so
// re-running a CI ingest step is safe. Throws ValidationError on unknown
// test ids or out-of-range severities.
TestSuite ingest_defects(const TestSuite& suite, const std::string& version,
                         const std::vector<TaggedDefect>& records);

// Tests with status == Active, in suite order. Everything downstream
// (classification, scoring, planning, simulation) operates on this subset.
std::vector<TestCase> active_tests(const TestSuite& suite);

const TestCase* find_test(const TestSuite& suite, std::string_view id);

}  // namespace rtplan
