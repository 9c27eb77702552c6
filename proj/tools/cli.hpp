#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace glp::cli {

enum ExitCode : int { kOk = 0, kGateFailed = 1, kUsage = 2 };

/// Flat `key=value` config file, `#` starts a comment. Throws ConfigError.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Splices config-file entries in front of the user's flags so that the
/// flags, parsed last, win.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::map<std::string, std::string>& config);

/// Entry point behind `glp`. Output and diagnostics go to the given streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace glp::cli
