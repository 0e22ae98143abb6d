#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svlab {

// ---------------------------------------------------------------------------
// Command line front end.
//
//   svlab --config FILE [--seed N] [--trials N] [--output PATH] [--format csv|json]
//   svlab prop --method NAME --world PATTERN [--stages N] [--output PATH] [--format F]
//
// The config file drives the experiment; --seed and --trials override the
// config, --output/--format redirect the report. Without --output the
// report follows the summary on stdout. Exit codes: 0 every claim passed,
// 2 at least one claim failed, 1 config or runtime error.
//
// `args` excludes the program name. Exposed as a function so tests can run
// the CLI in-process against string streams.
// ---------------------------------------------------------------------------

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace svlab
