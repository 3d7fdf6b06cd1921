#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spoilage::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

/// Runs one subcommand. `args` excludes the program name. Data goes to files
/// or `out`, diagnostics to `err`; `in` backs `--log -`.
///
/// Exit codes: 0 success, 1 usage error, 2 bad data or configuration,
/// 3 broken internal invariant (including a failed gradient check).
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Flat `key = value` config file. Keys are long flag names with or without
/// the leading dashes; `#` starts a comment. Throws DataError on a bad line.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace spoilage::cli
