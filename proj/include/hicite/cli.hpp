#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hicite::cli {

/// Exit statuses shared by all subcommands.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,       // unreadable input, bad header, contradictory config
  kRowsRejected = 2,  // ingest finished but some rows were rejected
};

/// Runs the command line `args` (without the program name). Regular output
/// goes to `out`; diagnostics and ingest reports go to `err` unless a report
/// path is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hicite::cli
