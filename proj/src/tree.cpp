#include "rtplan/tree.hpp"

#include <set>

#include <json.hpp>

#include "rtplan/errors.hpp"

namespace rtplan {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::string_view, 9> kQuestionTopics = {
    "Frequency",      "Reuse",   "Relevance",       "Automation effort", "Resources",
    "Manual complexity", "Automation tool", "Porting", "Execution effort",
};

constexpr std::array<std::string_view, 9> kQuestionTexts = {
    "How many times is this test expected to be executed?",
    "Can this test or parts of it be reused in other tests?",
    "How would you describe the importance of this test case?",
    "Does this test take a lot of effort to be deployed as an automated script?",
    "How many team members or how much equipment does this test's manual execution require?",
    "Is this test difficult to execute manually, or does it involve confidential information?",
    "How would you describe the reliability of the automation tool to be used?",
    "How portable is this test?",
    "Does this test require a lot of effort to execute manually?",
};

// Shipped default tree. The fixed points of its shape: the root asks
// question 1, answering 1:L / 2:M / 3:H / 7:H ends at an automate leaf,
// and no path below the 2=L branch ever asks question 4. Everything else
// is the editorial default recorded in the comment field.
constexpr std::string_view kDefaultTreeDocument = R"({
  "label": "default-viability",
  "comment": "Default automation-viability tree. High execution frequency, strong reuse potential and expensive manual execution favor automation; heavy automation deployment effort and unreliable tooling favor manual runs. When reuse is low (question 2 = L), the automation-effort question (4) is never consulted.",
  "root": {
    "question": 1,
    "branches": {
      "H": {
        "question": 9,
        "branches": {
          "H": {"decision": "automate"},
          "M": {
            "question": 8,
            "branches": {
              "H": {"decision": "automate"},
              "M": {"decision": "automate"},
              "L": {"decision": "manual"}
            }
          },
          "L": {
            "question": 4,
            "branches": {
              "H": {"decision": "manual"},
              "M": {"decision": "automate"},
              "L": {"decision": "automate"}
            }
          }
        }
      },
      "M": {
        "question": 3,
        "branches": {
          "H": {
            "question": 7,
            "branches": {
              "H": {"decision": "automate"},
              "M": {"decision": "automate"},
              "L": {"decision": "manual"}
            }
          },
          "M": {
            "question": 5,
            "branches": {
              "H": {"decision": "automate"},
              "M": {"decision": "automate"},
              "L": {"decision": "manual"}
            }
          },
          "L": {"decision": "manual"}
        }
      },
      "L": {
        "question": 2,
        "branches": {
          "H": {
            "question": 4,
            "branches": {
              "H": {"decision": "manual"},
              "M": {"decision": "automate"},
              "L": {"decision": "automate"}
            }
          },
          "M": {
            "question": 3,
            "branches": {
              "H": {
                "question": 7,
                "branches": {
                  "H": {"decision": "automate"},
                  "M": {"decision": "manual"},
                  "L": {"decision": "manual"}
                }
              },
              "M": {
                "question": 6,
                "branches": {
                  "H": {"decision": "automate"},
                  "M": {"decision": "manual"},
                  "L": {"decision": "manual"}
                }
              },
              "L": {"decision": "manual"}
            }
          },
          "L": {
            "question": 5,
            "branches": {
              "H": {
                "question": 6,
                "branches": {
                  "H": {"decision": "automate"},
                  "M": {"decision": "manual"},
                  "L": {"decision": "manual"}
                }
              },
              "M": {"decision": "manual"},
              "L": {"decision": "manual"}
            }
          }
        }
      }
    }
  }
})";

std::string render_path(const std::vector<std::pair<QuestionId, Answer>>& path) {
    std::string text;
    for (const auto& [question, answer] : path) {
        if (!text.empty()) text += " > ";
        text += std::to_string(question.value());
        text += '=';
        text += answer_letter(answer);
    }
    return text.empty() ? "(root)" : text;
}

struct TreeParser {
    std::vector<std::string> issues;

    TreeNodePtr parse_node(const json& node, const std::string& where) {
        if (!node.is_object()) {
            issues.push_back(where + ": expected an object");
            return nullptr;
        }
        const bool has_question = node.contains("question");
        const bool has_decision = node.contains("decision");
        if (has_question == has_decision) {
            issues.push_back(where + ": node must have either \"question\"+\"branches\" or \"decision\"");
            return nullptr;
        }

        if (has_decision) {
            for (const auto& [key, value] : node.items())
                if (key != "decision") issues.push_back(where + ": unknown key \"" + key + "\"");
            if (!node["decision"].is_string()) {
                issues.push_back(where + ".decision: expected \"automate\" or \"manual\"");
                return nullptr;
            }
            const std::string text = node["decision"].get<std::string>();
            if (text == "automate") return TreeNode::leaf(Decision::Automate);
            if (text == "manual") return TreeNode::leaf(Decision::Manual);
            issues.push_back(where + ".decision: expected \"automate\" or \"manual\", got \"" + text + "\"");
            return nullptr;
        }

        for (const auto& [key, value] : node.items())
            if (key != "question" && key != "branches")
                issues.push_back(where + ": unknown key \"" + key + "\"");

        if (!node["question"].is_number_integer()) {
            issues.push_back(where + ".question: expected an integer 1..9");
            return nullptr;
        }
        const int id = node["question"].get<int>();
        if (id < 1 || id > 9) {
            issues.push_back(where + ".question: id " + std::to_string(id) + " out of range 1..9");
            return nullptr;
        }

        if (!node.contains("branches") || !node["branches"].is_object()) {
            issues.push_back(where + ": question node needs a \"branches\" object");
            return nullptr;
        }
        const json& branches = node["branches"];
        for (const auto& [key, value] : branches.items())
            if (key != "H" && key != "M" && key != "L")
                issues.push_back(where + ".branches: unknown branch letter \"" + key + "\"");

        std::array<TreeNodePtr, 3> children{};
        bool complete = true;
        for (const auto& [letter, answer] :
             {std::pair{"L", Answer::Low}, std::pair{"M", Answer::Medium}, std::pair{"H", Answer::High}}) {
            if (!branches.contains(letter)) {
                issues.push_back(where + ".branches: missing branch \"" + letter + "\"");
                complete = false;
                continue;
            }
            children[static_cast<std::size_t>(answer)] =
                parse_node(branches[letter], where + ".branches." + letter);
            if (!children[static_cast<std::size_t>(answer)]) complete = false;
        }
        if (!complete) return nullptr;
        return TreeNode::question(QuestionId(id), children[0], children[1], children[2]);
    }
};

struct TreeWalk {
    TreeValidationReport report;
    int automate_leaves = 0;
    int manual_leaves = 0;

    void visit(const TreeNodePtr& node, std::vector<std::pair<QuestionId, Answer>>& path,
               std::set<int>& on_path) {
        if (!node) {
            report.violations.push_back("missing node below path " + render_path(path));
            return;
        }
        if (node->is_leaf()) {
            (node->decision() == Decision::Automate ? automate_leaves : manual_leaves)++;
            return;
        }
        const int id = node->question_id().value();
        report.question_present[static_cast<std::size_t>(id - 1)] = true;
        if (!on_path.insert(id).second)
            report.violations.push_back("question " + std::to_string(id) + " repeated along path " +
                                        render_path(path));
        if (on_path.size() > 9)
            report.violations.push_back("path longer than 9 questions at " + render_path(path));
        for (const Answer answer : {Answer::Low, Answer::Medium, Answer::High}) {
            path.emplace_back(node->question_id(), answer);
            visit(node->branch(answer), path, on_path);
            path.pop_back();
        }
        on_path.erase(id);
    }
};

struct WalkOutcome {
    std::optional<Classification> classification;
    std::optional<QuestionId> missing;
    std::vector<std::pair<QuestionId, Answer>> consulted;
};

WalkOutcome walk(const DecisionTree& tree, const AnswerLookup& lookup) {
    WalkOutcome outcome;
    TreeNodePtr node = tree.root;
    while (node && !node->is_leaf()) {
        const QuestionId question = node->question_id();
        const std::optional<Answer> answer = lookup(question);
        if (!answer) {
            outcome.missing = question;
            return outcome;
        }
        outcome.consulted.emplace_back(question, *answer);
        node = node->branch(*answer);
    }
    if (!node) throw ValidationError("tree has a missing node; run validate first");
    outcome.classification = Classification{node->decision(), outcome.consulted};
    return outcome;
}

ordered_json node_to_json(const TreeNodePtr& node) {
    if (node->is_leaf()) return ordered_json{{"decision", std::string(decision_name(node->decision()))}};
    ordered_json branches;
    branches["H"] = node_to_json(node->branch(Answer::High));
    branches["M"] = node_to_json(node->branch(Answer::Medium));
    branches["L"] = node_to_json(node->branch(Answer::Low));
    return ordered_json{{"question", node->question_id().value()}, {"branches", branches}};
}

}  // namespace

std::string_view decision_name(Decision decision) {
    return decision == Decision::Automate ? "automate" : "manual";
}

TreeNodePtr TreeNode::leaf(Decision decision) {
    auto node = std::shared_ptr<TreeNode>(new TreeNode());
    node->decision_ = decision;
    return node;
}

TreeNodePtr TreeNode::question(QuestionId id, TreeNodePtr low, TreeNodePtr medium, TreeNodePtr high) {
    if (!low || !medium || !high) throw ValidationError("question node requires all three branches");
    auto node = std::shared_ptr<TreeNode>(new TreeNode());
    node->question_ = id;
    node->branches_ = {std::move(low), std::move(medium), std::move(high)};
    return node;
}

DecisionTree parse_tree(std::string_view document) {
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("tree document is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("tree document must be a top-level object");

    TreeParser parser;
    for (const auto& [key, value] : root.items())
        if (key != "label" && key != "comment" && key != "root")
            parser.issues.push_back("document: unknown key \"" + key + "\"");

    DecisionTree tree;
    if (root.contains("label")) {
        if (root["label"].is_string()) tree.label = root["label"].get<std::string>();
        else parser.issues.push_back("label: expected a string");
    }
    if (root.contains("comment")) {
        if (root["comment"].is_string()) tree.comment = root["comment"].get<std::string>();
        else parser.issues.push_back("comment: expected a string");
    }
    if (!root.contains("root")) {
        parser.issues.push_back("document: missing \"root\" node");
        throw ValidationError(parser.issues);
    }
    tree.root = parser.parse_node(root["root"], "root");
    if (!parser.issues.empty()) throw ValidationError(parser.issues);

    const TreeValidationReport report = validate_tree(tree);
    if (!report.valid()) throw ValidationError(report.violations);
    return tree;
}

std::string serialize_tree(const DecisionTree& tree) {
    ordered_json root;
    root["label"] = tree.label;
    root["comment"] = tree.comment;
    root["root"] = node_to_json(tree.root);
    return root.dump(2) + "\n";
}

TreeValidationReport validate_tree(const DecisionTree& tree) {
    TreeWalk walker;
    if (!tree.root) {
        walker.report.violations.push_back("tree has no root node");
        return walker.report;
    }
    std::vector<std::pair<QuestionId, Answer>> path;
    std::set<int> on_path;
    walker.visit(tree.root, path, on_path);
    if (walker.automate_leaves == 0) walker.report.violations.push_back("no automate leaf reachable");
    if (walker.manual_leaves == 0) walker.report.violations.push_back("no manual leaf reachable");
    return walker.report;
}

Classification classify(const DecisionTree& tree, const AnswerLookup& lookup) {
    WalkOutcome outcome = walk(tree, lookup);
    if (outcome.missing) throw MissingAnswerError(outcome.missing->value());
    return *std::move(outcome.classification);
}

Classification classify(const DecisionTree& tree, const AnswerMap& answers) {
    return classify(tree, [&answers](QuestionId question) -> std::optional<Answer> {
        const auto it = answers.find(question);
        if (it == answers.end()) return std::nullopt;
        return it->second;
    });
}

std::vector<TestClassification> classify_suite(const DecisionTree& tree, const TestSuite& suite) {
    std::vector<TestClassification> results;
    for (const auto& test : active_tests(suite)) {
        WalkOutcome outcome = walk(tree, [&test](QuestionId question) -> std::optional<Answer> {
            const auto it = test.answers.find(question);
            if (it == test.answers.end()) return std::nullopt;
            return it->second;
        });
        TestClassification result;
        result.test_id = test.id;
        result.classification = std::move(outcome.classification);
        result.missing_question = outcome.missing;
        result.consulted = std::move(outcome.consulted);
        results.push_back(std::move(result));
    }
    return results;
}

const DecisionTree& default_tree() {
    static const DecisionTree tree = parse_tree(kDefaultTreeDocument);
    return tree;
}

std::string_view default_tree_document() { return kDefaultTreeDocument; }

std::string_view question_text(QuestionId id) {
    return kQuestionTexts[static_cast<std::size_t>(id.value() - 1)];
}

std::string_view question_topic(QuestionId id) {
    return kQuestionTopics[static_cast<std::size_t>(id.value() - 1)];
}

}  // namespace rtplan
