// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svf {

// Runs the svf command line. Exit codes: 0 success, 1 numerical failure,
// 2 usage or input error. Errors go to `err` as one JSON object.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace svf
