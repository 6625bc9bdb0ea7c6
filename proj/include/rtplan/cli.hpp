#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rtplan {

// Exit codes, stable across releases.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainFailure = 1;   // e.g. unclassifiable tests
inline constexpr int kExitInvalidInput = 2;    // validation or parse failure
inline constexpr int kExitIoFailure = 3;       // unreadable/unwritable path

// Runs one command ("score --suite s.json --format csv"); the program name
// is not part of args. Streams receive what the binary would print, which
// keeps every command testable in-process.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rtplan
