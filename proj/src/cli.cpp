#include "rtplan/cli.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtplan/campaign.hpp"
#include "rtplan/errors.hpp"
#include "rtplan/io.hpp"
#include "rtplan/planner.hpp"
#include "rtplan/report.hpp"
#include "rtplan/risk.hpp"
#include "rtplan/suite.hpp"
#include "rtplan/tree.hpp"

namespace rtplan {

namespace {

struct GlobalOptions {
    std::string format = "table";
    std::string out_path;
    bool quiet = false;
    bool lenient = false;

    OutputFormat output_format() const {
        const auto parsed = output_format_from_name(format);
        if (!parsed) throw ValidationError("unknown format \"" + format + "\" (expected table/csv/json)");
        return *parsed;
    }
};

// Rendered output goes to --out when given, otherwise to stdout.
void deliver(const GlobalOptions& options, std::ostream& out, const std::string& content) {
    if (!options.out_path.empty()) {
        write_text_file_atomic(options.out_path, content);
        if (!options.quiet) out << "wrote " << options.out_path << "\n";
    } else {
        out << content;
    }
}

Rational parse_fraction(const std::string& text) {
    Rational fraction;
    try {
        fraction = Rational::from_decimal(text);
    } catch (const ParseError&) {
        throw ValidationError("fraction \"" + text + "\" is not a decimal number");
    }
    if (fraction.is_negative() || fraction > Rational(1))
        throw ValidationError("fraction " + text + " out of range [0, 1]");
    return fraction;
}

int cmd_validate(const GlobalOptions& options, const std::string& tree_ref,
                 const std::string& suite_path, std::ostream& out, std::ostream& err) {
    if (tree_ref.empty() == suite_path.empty())
        throw ValidationError("validate needs exactly one of --tree or --suite");

    if (!tree_ref.empty()) {
        DecisionTree tree;
        try {
            tree = load_tree_ref(tree_ref);
        } catch (const ValidationError& e) {
            for (const auto& issue : e.issues()) err << "violation: " << issue << "\n";
            return kExitInvalidInput;
        }
        const TreeValidationReport report = validate_tree(tree);
        if (!options.quiet) {
            out << "tree \"" << (tree.label.empty() ? tree_ref : tree.label) << "\": valid\n";
            for (int q = 1; q <= 9; ++q)
                if (!report.question_present[static_cast<std::size_t>(q - 1)])
                    out << "note: question " << q << " is never consulted\n";
        }
        return kExitOk;
    }

    TestSuite suite;
    try {
        suite = load_suite_file(suite_path, LoadOptions{options.lenient});
    } catch (const ValidationError& e) {
        for (const auto& issue : e.issues()) err << "violation: " << issue << "\n";
        return kExitInvalidInput;
    }
    if (!options.quiet) {
        out << "suite \"" << suite.name << "\": valid, " << suite.tests.size() << " tests ("
            << active_tests(suite).size() << " active)\n";
        for (const auto& warning : suite_warnings(suite)) out << "warning: " << warning << "\n";
    }
    return kExitOk;
}

int cmd_classify(const GlobalOptions& options, const std::string& suite_path,
                 const std::string& tree_ref, bool explain, std::ostream& out) {
    const TestSuite suite = load_suite_file(suite_path, LoadOptions{options.lenient});
    const DecisionTree tree = load_tree_ref(tree_ref);
    const std::vector<TestClassification> results = classify_suite(tree, suite);
    deliver(options, out, render_classifications(results, explain, options.output_format()));
    const bool all_classified =
        std::all_of(results.begin(), results.end(), [](const auto& r) { return r.classified(); });
    return all_classified ? kExitOk : kExitDomainFailure;
}

int cmd_score(const GlobalOptions& options, const std::string& suite_path,
              const std::string& fraction_text, bool exclude_zero_risk, std::ostream& out) {
    const TestSuite suite = load_suite_file(suite_path, LoadOptions{options.lenient});
    const std::vector<RiskRow> rows = score_suite(suite);

    std::optional<SelectionResult> selection;
    if (!fraction_text.empty())
        selection = select_top(rows, parse_fraction(fraction_text), exclude_zero_risk);

    deliver(options, out,
            render_risk_rows(rows, selection ? &*selection : nullptr, options.output_format()));
    return kExitOk;
}

int cmd_plan(const GlobalOptions& options, const std::string& suite_path, const std::string& tree_ref,
             const std::string& policy_text, const std::string& fraction_text,
             const std::string& basis_text, bool exclude_zero_risk, std::ostream& out) {
    const auto policy = policy_from_name(policy_text);
    if (!policy)
        throw ValidationError("unknown policy \"" + policy_text +
                              "\" (expected retest-all/tsra/atvm/pt)");

    const TestSuite suite = load_suite_file(suite_path, LoadOptions{options.lenient});

    PlanParameters parameters;
    if (!fraction_text.empty()) parameters.fraction = parse_fraction(fraction_text);
    const auto basis = fraction_basis_from_name(basis_text);
    if (!basis) throw ValidationError("unknown fraction basis \"" + basis_text + "\"");
    parameters.fraction_basis = *basis;
    parameters.exclude_zero_risk = exclude_zero_risk;

    std::optional<DecisionTree> tree;
    if (*policy == Policy::Atvm || *policy == Policy::Pt) {
        if (tree_ref.empty())
            throw ValidationError("policy " + policy_text + " requires --tree (a path or \"default\")");
        tree = load_tree_ref(tree_ref);
    }

    const Plan plan = make_plan(*policy, suite, tree ? &*tree : nullptr, parameters);

    if (!options.out_path.empty()) write_text_file_atomic(options.out_path, serialize_plan(plan));
    if (!options.quiet) {
        out << render_plan_summary(plan);
        if (options.out_path.empty()) out << render_plan(plan, options.output_format());
        else out << "wrote " << options.out_path << "\n";
    }
    return kExitOk;
}

int cmd_simulate(const GlobalOptions& options, const std::string& scenario_path,
                 const std::vector<std::string>& policy_names, std::optional<std::uint64_t> seed,
                 std::ostream& out) {
    Scenario scenario = load_scenario_file(scenario_path, LoadOptions{options.lenient});
    if (seed) scenario.params.seed = *seed;

    std::vector<Policy> policies;
    if (policy_names.empty()) {
        policies = {Policy::RetestAll, Policy::Tsra, Policy::Atvm, Policy::Pt};
    } else {
        for (const auto& name : policy_names) {
            const auto policy = policy_from_name(name);
            if (!policy) throw ValidationError("unknown policy \"" + name + "\"");
            policies.push_back(*policy);
        }
    }

    const ComparisonReport report = compare(scenario, policies);
    deliver(options, out, render_comparison(report, options.output_format()));
    return kExitOk;
}

int cmd_ingest(const GlobalOptions& options, const std::string& suite_path, const std::string& version,
               const std::string& records_path, std::ostream& out) {
    if (options.out_path.empty()) throw ValidationError("ingest requires --out");

    const TestSuite suite = load_suite_file(suite_path, LoadOptions{options.lenient});

    const std::string document = read_text_file(records_path);
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("records document is not valid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("records") || !root["records"].is_array())
        throw ParseError("records document must be {\"records\": [...]}");

    std::vector<TaggedDefect> records;
    std::size_t index = 0;
    for (const auto& node : root["records"]) {
        const std::string where = "records[" + std::to_string(index++) + "]";
        if (!node.is_object() || !node.contains("test_id") || !node.contains("id") ||
            !node.contains("severity"))
            throw ParseError(where + ": expected {\"test_id\", \"id\", \"severity\"}");
        records.push_back({node["test_id"].get<std::string>(), node["id"].get<std::string>(),
                           node["severity"].get<int>()});
    }

    const TestSuite updated = ingest_defects(suite, version, records);
    write_text_file_atomic(options.out_path, serialize_suite(updated));
    if (!options.quiet)
        out << "ingested " << records.size() << " records for version \"" << version << "\" into "
            << options.out_path << "\n";
    return kExitOk;
}

int cmd_generate(const GlobalOptions& options, const GenerateParams& params,
                 const std::string& fraction_text, std::ostream& out) {
    GenerateParams effective = params;
    if (!fraction_text.empty()) effective.fraction = parse_fraction(fraction_text);
    const Scenario scenario = generate_scenario(effective);
    deliver(options, out, serialize_scenario(scenario, "default"));
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"regression-test planning toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions options;
    app.add_option("--format", options.format, "output format: table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--out", options.out_path, "write output to this path (atomically)");
    app.add_flag("--quiet", options.quiet, "suppress informational output");
    app.add_flag("--lenient", options.lenient, "accept unknown keys in input documents");

    std::string suite_path;
    std::string tree_ref;
    std::string scenario_path;
    std::string records_path;
    std::string version;
    std::string policy_text;
    std::string fraction_text;
    std::string basis_text = "pool";
    bool explain = false;
    bool exclude_zero_risk = false;
    std::vector<std::string> policy_names;
    std::optional<std::uint64_t> seed_override;
    std::uint64_t seed_value = 0;

    CLI::App* validate = app.add_subcommand("validate", "validate a suite or tree document");
    validate->add_option("--tree", tree_ref, "tree file, or \"default\"");
    validate->add_option("--suite", suite_path, "suite file");

    CLI::App* classify = app.add_subcommand("classify", "classify tests for automation viability");
    classify->add_option("--suite", suite_path, "suite file")->required();
    classify->add_option("--tree", tree_ref, "tree file, or \"default\"")->required();
    classify->add_flag("--explain", explain, "show the traversed question path");

    CLI::App* score = app.add_subcommand("score", "compute the risk-exposure table");
    score->add_option("--suite", suite_path, "suite file")->required();
    score->add_option("--fraction", fraction_text, "mark the top fraction as selected");
    score->add_flag("--exclude-zero-risk", exclude_zero_risk, "never select zero-exposure tests");

    CLI::App* plan = app.add_subcommand("plan", "produce a test plan for a policy");
    plan->add_option("--suite", suite_path, "suite file")->required();
    plan->add_option("--tree", tree_ref, "tree file, or \"default\"");
    plan->add_option("--policy", policy_text, "retest-all, tsra, atvm or pt")->required();
    plan->add_option("--fraction", fraction_text, "selection fraction (default 0.7)");
    plan->add_option("--fraction-basis", basis_text, "pt quota basis: pool or total")
        ->check(CLI::IsMember({"pool", "total"}));
    plan->add_flag("--exclude-zero-risk", exclude_zero_risk, "never select zero-exposure tests");

    CLI::App* simulate = app.add_subcommand("simulate", "compare policies over a campaign scenario");
    simulate->add_option("--scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--policies", policy_names, "policies to simulate (default: all four)")
        ->delimiter(',');
    CLI::Option* seed_option = simulate->add_option("--seed", seed_value, "override the scenario seed");

    CLI::App* ingest = app.add_subcommand("ingest", "append defect records to a suite");
    ingest->add_option("--suite", suite_path, "suite file")->required();
    ingest->add_option("--version", version, "version label for the records")->required();
    ingest->add_option("--records", records_path, "records file")->required();

    GenerateParams generate_params;
    CLI::App* generate = app.add_subcommand("generate-scenario", "emit a pseudo-random scenario");
    generate->add_option("--tests", generate_params.n_tests, "number of tests");
    generate->add_option("--versions", generate_params.n_versions, "number of versions");
    generate->add_option("--fault-rate", generate_params.fault_rate, "per-test fault probability")
        ->check(CLI::Range(0.0, 1.0));
    generate->add_option("--seed", generate_params.seed, "generator seed");
    generate->add_option("--fraction", fraction_text, "selection fraction stored in the scenario");
    generate->add_option("--lanes", generate_params.lanes, "parallel automation lanes");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);  // prints help for the subcommand that asked
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    if (seed_option->count() > 0) seed_override = seed_value;

    try {
        if (validate->parsed()) return cmd_validate(options, tree_ref, suite_path, out, err);
        if (classify->parsed()) return cmd_classify(options, suite_path, tree_ref, explain, out);
        if (score->parsed())
            return cmd_score(options, suite_path, fraction_text, exclude_zero_risk, out);
        if (plan->parsed())
            return cmd_plan(options, suite_path, tree_ref, policy_text, fraction_text, basis_text,
                            exclude_zero_risk, out);
        if (simulate->parsed())
            return cmd_simulate(options, scenario_path, policy_names, seed_override, out);
        if (ingest->parsed()) return cmd_ingest(options, suite_path, version, records_path, out);
        if (generate->parsed()) return cmd_generate(options, generate_params, fraction_text, out);
    } catch (const MissingAnswerError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomainFailure;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIoFailure;
    } catch (const ValidationError& e) {
        for (const auto& issue : e.issues()) err << "error: " << issue << "\n";
        return kExitInvalidInput;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    err << "error: no subcommand\n";
    return kExitInvalidInput;
}

}  // namespace rtplan
