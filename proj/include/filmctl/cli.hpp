#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "filmctl/config.hpp"
#include "filmctl/errors.hpp"

namespace filmctl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitIo = 3;

/// Usage (1) for configuration and argument errors, I/O (3) for files,
/// numerical failure (2) for everything raised by the solvers.
[[nodiscard]] int exit_code_for(const Error& error) noexcept;

/// `error: <Kind>: <message>` on one line (newlines in the message folded).
[[nodiscard]] std::string error_line(std::string_view kind, std::string_view message);

/// Layers the configuration: defaults, then the file (`config_path`, or the
/// file named by FILMCTL_CONFIG when empty), then `key=value` overrides.
/// Validation runs on the merged result.
RunConfig load_run_config(const std::string& config_path, const std::vector<std::string>& overrides);

/// Entry point of the `filmctl` executable; returns the process exit code.
/// Regular output goes to `out`, the single error line to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace filmctl
