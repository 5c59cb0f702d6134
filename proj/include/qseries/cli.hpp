// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qseries {

/// Runs the qseries command line. Returns the process exit code:
/// 0 clean, 1 a failure, 2 configuration or I/O error, 3 inconclusive only.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "3", "0..5" or "1,2,4".
std::vector<long> parse_n_values(const std::string& s);

}  // namespace qseries
