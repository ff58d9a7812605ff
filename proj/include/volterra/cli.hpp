#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "volterra/holder.hpp"

namespace volterra {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Entry point behind the `volterra` executable. `args` excludes the
/// program name. Results go to `out` (or the --out file), diagnostics to
/// `err`. Returns 0, 1 (usage) or 2 (numerical failure).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "inf", integers, "num/den" (exact) or decimals >= 1.
HolderExponent parse_holder(const std::string& text);

/// "a..b" inclusive or "n1,n2,..."; mixing the two forms is an error.
std::vector<int> parse_n_values(const std::string& text);

}  // namespace volterra
