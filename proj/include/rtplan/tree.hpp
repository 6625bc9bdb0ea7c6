#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rtplan/suite.hpp"

namespace rtplan {

enum class Decision { Automate, Manual };

std::string_view decision_name(Decision decision);  // "automate" / "manual"

// One tree node: either a question with exactly three branches (one per
// answer) or a decision leaf. Nodes are immutable and shared.
class TreeNode;
using TreeNodePtr = std::shared_ptr<const TreeNode>;

class TreeNode {
  public:
    static TreeNodePtr leaf(Decision decision);
    static TreeNodePtr question(QuestionId id, TreeNodePtr low, TreeNodePtr medium, TreeNodePtr high);

    bool is_leaf() const { return !question_.has_value(); }
    Decision decision() const { return *decision_; }
    QuestionId question_id() const { return *question_; }
    const TreeNodePtr& branch(Answer answer) const { return branches_[static_cast<std::size_t>(answer)]; }

  private:
    TreeNode() = default;
    std::optional<QuestionId> question_;
    std::optional<Decision> decision_;
    std::array<TreeNodePtr, 3> branches_{};  // indexed by Answer
};

struct DecisionTree {
    std::string label;
    std::string comment;
    TreeNodePtr root;
};

struct TreeValidationReport {
    std::vector<std::string> violations;
    // question_present[i] <=> question i+1 occurs somewhere in the tree.
    // Informational only; a tree is free to never consult a question.
    std::array<bool, 9> question_present{};

    bool valid() const { return violations.empty(); }
};

// Parses a tree document (JSON, see README) and validates it; throws
// ParseError on malformed documents and ValidationError when the parsed
// tree violates a structural invariant.
DecisionTree parse_tree(std::string_view document);

std::string serialize_tree(const DecisionTree& tree);

// Checks: three branches per question (guaranteed by construction), no
// question repeated along a path, path length <= 9, and both decision
// kinds reachable. Violations are data, not exceptions.
TreeValidationReport validate_tree(const DecisionTree& tree);

struct Classification {
    Decision decision;
    std::vector<std::pair<QuestionId, Answer>> path;  // exactly the questions consulted
};

using AnswerLookup = std::function<std::optional<Answer>(QuestionId)>;

// Deterministic root-to-leaf traversal. Only questions on the traversed
// path are consulted; throws MissingAnswerError when the walk reaches a
// question the lookup cannot answer.
Classification classify(const DecisionTree& tree, const AnswerLookup& lookup);
Classification classify(const DecisionTree& tree, const AnswerMap& answers);

struct TestClassification {
    std::string test_id;
    std::optional<Classification> classification;          // set on success
    std::optional<QuestionId> missing_question;            // set on failure
    std::vector<std::pair<QuestionId, Answer>> consulted;  // walked prefix (failure case)

    bool classified() const { return classification.has_value(); }
};

// Classifies every active test; per-test missing answers are captured in
// the result rather than raised. Result order is suite order.
std::vector<TestClassification> classify_suite(const DecisionTree& tree, const TestSuite& suite);

// The tree shipped with the toolkit. Root asks question 1; the published
// constraints on its shape are asserted by the test suite, the remaining
// branches are an editorial choice recorded in the tree's comment field.
const DecisionTree& default_tree();

// The JSON document default_tree() is parsed from.
std::string_view default_tree_document();

// Question text / topic for rendering, keyed 1..9.
std::string_view question_text(QuestionId id);
std::string_view question_topic(QuestionId id);

}  // namespace rtplan
