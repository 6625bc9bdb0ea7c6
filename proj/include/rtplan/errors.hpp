#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rtplan {

// Base class for all toolkit errors. The CLI maps subclasses to its exit
// codes: ParseError/ValidationError -> 2, MissingAnswerError -> 1,
// IoError -> 3.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed input document (bad JSON, wrong value type, unknown key).
class ParseError : public Error {
  public:
    using Error::Error;
};

// Structurally well-formed input that violates a domain invariant
// (duplicate id, out-of-range cost, missing tree branch, ...). Carries the
// individual findings so callers can report all of them, not just the first.
class ValidationError : public Error {
  public:
    explicit ValidationError(std::vector<std::string> issues)
        : Error(join(issues)), issues_(std::move(issues)) {}
    explicit ValidationError(std::string issue) : ValidationError(std::vector<std::string>{std::move(issue)}) {}

    const std::vector<std::string>& issues() const { return issues_; }

  private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string text;
        for (const auto& issue : issues) {
            if (!text.empty()) text += "\n";
            text += issue;
        }
        return text;
    }

    std::vector<std::string> issues_;
};

// A decision-tree traversal reached a question the test has no answer for.
// There is deliberately no fallback decision: silently defaulting a test to
// manual would corrupt every downstream plan.
class MissingAnswerError : public Error {
  public:
    struct Offender {
        std::string test_id;  // empty when classification was not suite-scoped
        int question = 0;
    };

    explicit MissingAnswerError(int question)
        : Error("missing answer for question " + std::to_string(question)),
          offenders_{Offender{"", question}} {}

    explicit MissingAnswerError(std::vector<Offender> offenders)
        : Error(describe(offenders)), offenders_(std::move(offenders)) {}

    const std::vector<Offender>& offenders() const { return offenders_; }
    int question() const { return offenders_.front().question; }

  private:
    static std::string describe(const std::vector<Offender>& offenders) {
        std::string text = "missing answers:";
        for (const auto& offender : offenders) {
            text += "\n  ";
            if (!offender.test_id.empty()) text += "test \"" + offender.test_id + "\": ";
            text += "question " + std::to_string(offender.question);
        }
        return text;
    }

    std::vector<Offender> offenders_;
};

// Filesystem-level failure (unreadable path, failed atomic rename).
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace rtplan
