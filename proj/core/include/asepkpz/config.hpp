#pragma once

// Plain-text run configuration: one `key = value` pair per line, `#` starts a
// comment. Recognized keys: q, alpha, beta, gamma, delta, rho_a, rho_b, ell,
// epsilon, L, u, v. Command-line flags override file values.

#include <map>
#include <string>

namespace asepkpz {

using ConfigValues = std::map<std::string, double>;

// Throws std::invalid_argument on unreadable files, malformed lines,
// unknown keys, or a non-integer ell.
ConfigValues load_config(const std::string& path);

// Same parser on an in-memory string (used by tests and by load_config).
ConfigValues parse_config(const std::string& text);

}  // namespace asepkpz
