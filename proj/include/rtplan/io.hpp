#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rtplan/campaign.hpp"
#include "rtplan/suite.hpp"
#include "rtplan/tree.hpp"

namespace rtplan {

// Throws IoError when the path cannot be read.
std::string read_text_file(const std::filesystem::path& path);

// Write-temp-then-rename, so readers never observe a half-written file and
// an interrupted run leaves the destination untouched.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

TestSuite load_suite_file(const std::filesystem::path& path, const LoadOptions& options = {});

// `ref` is a path, or the literal "default" for the shipped tree.
DecisionTree load_tree_ref(const std::string& ref,
                           const std::filesystem::path& base_dir = std::filesystem::path());

// Scenario document; suite and tree may be inline or file references
// resolved relative to the scenario file's directory. The loaded scenario
// is validated.
Scenario load_scenario_file(const std::filesystem::path& path, const LoadOptions& options = {});

// Scenario document with the suite inlined; `tree_ref` is stored verbatim
// (a path or "default").
std::string serialize_scenario(const Scenario& scenario, const std::string& tree_ref);

}  // namespace rtplan
