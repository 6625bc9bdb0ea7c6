#include "rtplan/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "rtplan/errors.hpp"

namespace rtplan {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Rational rational_value(const json& value, const std::string& where) {
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (value.is_number_float()) return Rational::from_double(value.get<double>());
    throw ValidationError(where + ": expected a number");
}

void check_scenario_keys(const json& object, const std::set<std::string>& allowed,
                         const std::string& where, bool lenient, std::vector<std::string>& issues) {
    if (lenient) return;
    for (const auto& [key, value] : object.items())
        if (!allowed.contains(key)) issues.push_back(where + ": unknown key \"" + key + "\"");
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw IoError("cannot read file: " + path.string());
    std::ostringstream content;
    content << stream.rdbuf();
    if (stream.bad()) throw IoError("read failed: " + path.string());
    return content.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path temp = path;
    temp += ".tmp";
    {
        std::ofstream stream(temp, std::ios::binary | std::ios::trunc);
        if (!stream) throw IoError("cannot write file: " + temp.string());
        stream << content;
        stream.flush();
        if (!stream) throw IoError("write failed: " + temp.string());
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) {
        std::filesystem::remove(temp, ec);
        throw IoError("cannot rename " + temp.string() + " to " + path.string());
    }
}

TestSuite load_suite_file(const std::filesystem::path& path, const LoadOptions& options) {
    return load_suite(read_text_file(path), options);
}

DecisionTree load_tree_ref(const std::string& ref, const std::filesystem::path& base_dir) {
    if (ref == "default") return default_tree();
    std::filesystem::path path(ref);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    return parse_tree(read_text_file(path));
}

Scenario load_scenario_file(const std::filesystem::path& path, const LoadOptions& options) {
    const std::string document = read_text_file(path);
    const std::filesystem::path base_dir = path.parent_path();

    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario document is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("scenario document must be a top-level object");

    std::vector<std::string> issues;
    check_scenario_keys(root, {"suite", "versions", "params"}, "document", options.lenient, issues);

    Scenario scenario;

    if (!root.contains("suite")) {
        issues.push_back("document: missing \"suite\"");
    } else if (root["suite"].is_string()) {
        std::filesystem::path suite_path(root["suite"].get<std::string>());
        if (suite_path.is_relative()) suite_path = base_dir / suite_path;
        scenario.suite = load_suite_file(suite_path, options);
    } else if (root["suite"].is_object()) {
        scenario.suite = load_suite(root["suite"].dump(), options);
    } else {
        issues.push_back("suite: expected an object or a file path");
    }

    if (!root.contains("versions") || !root["versions"].is_array()) {
        issues.push_back("document: missing \"versions\" array");
    } else {
        std::size_t v = 0;
        for (const auto& node : root["versions"]) {
            const std::string where = "versions[" + std::to_string(v++) + "]";
            VersionSpec version;
            if (!node.is_object()) {
                issues.push_back(where + ": expected an object");
                continue;
            }
            check_scenario_keys(node, {"label", "faults"}, where, options.lenient, issues);
            if (node.contains("label") && node["label"].is_string())
                version.label = node["label"].get<std::string>();
            else issues.push_back(where + ": missing string \"label\"");
            if (node.contains("faults")) {
                if (!node["faults"].is_array()) {
                    issues.push_back(where + ".faults: expected an array");
                } else {
                    std::size_t f = 0;
                    for (const auto& fault_node : node["faults"]) {
                        const std::string fwhere = where + ".faults[" + std::to_string(f++) + "]";
                        Fault fault;
                        if (!fault_node.is_object()) {
                            issues.push_back(fwhere + ": expected an object");
                            continue;
                        }
                        check_scenario_keys(fault_node, {"id", "severity", "detected_by"}, fwhere,
                                            options.lenient, issues);
                        if (fault_node.contains("id") && fault_node["id"].is_string())
                            fault.fault_id = fault_node["id"].get<std::string>();
                        else issues.push_back(fwhere + ": missing string \"id\"");
                        if (fault_node.contains("severity") && fault_node["severity"].is_number_integer())
                            fault.severity = fault_node["severity"].get<int>();
                        else issues.push_back(fwhere + ": missing integer \"severity\"");
                        if (fault_node.contains("detected_by") && fault_node["detected_by"].is_array()) {
                            for (const auto& id : fault_node["detected_by"]) {
                                if (id.is_string()) fault.detected_by.push_back(id.get<std::string>());
                                else issues.push_back(fwhere + ".detected_by: expected strings");
                            }
                        } else {
                            issues.push_back(fwhere + ": missing array \"detected_by\"");
                        }
                        version.faults.push_back(std::move(fault));
                    }
                }
            }
            scenario.versions.push_back(std::move(version));
        }
    }

    std::string tree_ref = "default";
    if (root.contains("params")) {
        const json& params = root["params"];
        if (!params.is_object()) {
            issues.push_back("params: expected an object");
        } else {
            check_scenario_keys(params,
                                {"fraction", "fraction_basis", "exclude_zero_risk", "lanes",
                                 "risk_overhead_minutes_per_test", "tree", "seed"},
                                "params", options.lenient, issues);
            try {
                if (params.contains("fraction"))
                    scenario.params.fraction = rational_value(params["fraction"], "params.fraction");
                if (params.contains("risk_overhead_minutes_per_test"))
                    scenario.params.risk_overhead_minutes_per_test = rational_value(
                        params["risk_overhead_minutes_per_test"], "params.risk_overhead_minutes_per_test");
            } catch (const ValidationError& e) {
                issues.push_back(e.what());
            }
            if (params.contains("fraction_basis")) {
                const auto basis = params["fraction_basis"].is_string()
                                       ? fraction_basis_from_name(params["fraction_basis"].get<std::string>())
                                       : std::nullopt;
                if (basis) scenario.params.fraction_basis = *basis;
                else issues.push_back("params.fraction_basis: expected \"pool\" or \"total\"");
            }
            if (params.contains("exclude_zero_risk")) {
                if (params["exclude_zero_risk"].is_boolean())
                    scenario.params.exclude_zero_risk = params["exclude_zero_risk"].get<bool>();
                else issues.push_back("params.exclude_zero_risk: expected a boolean");
            }
            if (params.contains("lanes")) {
                if (params["lanes"].is_number_integer())
                    scenario.params.lanes = params["lanes"].get<int>();
                else issues.push_back("params.lanes: expected an integer");
            }
            if (params.contains("seed")) {
                if (params["seed"].is_number_unsigned() || params["seed"].is_number_integer())
                    scenario.params.seed = params["seed"].get<std::uint64_t>();
                else issues.push_back("params.seed: expected an integer");
            }
            if (params.contains("tree")) {
                if (params["tree"].is_string()) tree_ref = params["tree"].get<std::string>();
                else issues.push_back("params.tree: expected a file path or \"default\"");
            }
        }
    }
    if (!issues.empty()) throw ValidationError(issues);

    scenario.params.tree = load_tree_ref(tree_ref, base_dir);
    validate_scenario(scenario);
    return scenario;
}

std::string serialize_scenario(const Scenario& scenario, const std::string& tree_ref) {
    ordered_json root;
    root["suite"] = ordered_json::parse(serialize_suite(scenario.suite));
    root["versions"] = ordered_json::array();
    for (const auto& version : scenario.versions) {
        ordered_json node;
        node["label"] = version.label;
        node["faults"] = ordered_json::array();
        for (const auto& fault : version.faults) {
            ordered_json fault_node;
            fault_node["id"] = fault.fault_id;
            fault_node["severity"] = fault.severity;
            fault_node["detected_by"] = fault.detected_by;
            node["faults"].push_back(std::move(fault_node));
        }
        root["versions"].push_back(std::move(node));
    }
    ordered_json params;
    const auto number = [](const Rational& r) -> ordered_json {
        if (r.is_integer()) return r.numerator();
        return ordered_json(r.to_double());
    };
    params["fraction"] = number(scenario.params.fraction);
    params["fraction_basis"] = std::string(fraction_basis_name(scenario.params.fraction_basis));
    params["exclude_zero_risk"] = scenario.params.exclude_zero_risk;
    params["lanes"] = scenario.params.lanes;
    params["risk_overhead_minutes_per_test"] = number(scenario.params.risk_overhead_minutes_per_test);
    params["tree"] = tree_ref;
    params["seed"] = scenario.params.seed;
    root["params"] = params;
    return root.dump(2) + "\n";
}

}  // namespace rtplan
