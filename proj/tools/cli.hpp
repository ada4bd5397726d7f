#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nuqcli {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kResourceCap = 3, kInternal = 4 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nuqcli
