#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mixchain/chain.hpp"
#include "mixchain/error.hpp"

namespace mixchain::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 2,
  kExitInvariant = 3,
  kExitStatistical = 4,
};

int exit_code_for(ErrorCode code);

/// Parses a chain document: a JSON object {"matrix": [[...], ...]} or
/// whitespace-separated rows, one per line, with '#' comments. Throws
/// ParseError with a line/column location.
std::vector<std::vector<double>> parse_chain_text(std::string_view text);

/// Reads and validates a chain file.
TransitionMatrix load_chain_file(const std::string& path);

/// Whitespace-row form with 17 significant digits, so it reads back exactly.
std::string format_chain(const TransitionMatrix& chain);

/// Probabilities and derived values: 12 significant digits.
std::string fmt(double v);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mixchain::cli
