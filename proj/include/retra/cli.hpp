#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace retra {

/// Command-line front end. Returns the process exit code: 0 success /
/// property holds, 1 property fails or verification found counterexamples,
/// 2 usage, I/O or input errors (reported as "error[<code>]: <text>").
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace retra
