#include "asepkpz/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace asepkpz {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {"q",     "alpha", "beta", "gamma",
                                             "delta", "rho_a", "rho_b", "ell",
                                             "epsilon", "L",   "u",    "v"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ConfigValues parse_config(const std::string& text) {
  ConfigValues values;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    if (!known_keys().count(key))
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    char* end = nullptr;
    const double value = std::strtod(raw.c_str(), &end);
    if (raw.empty() || end != raw.c_str() + raw.size() || !std::isfinite(value))
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": malformed value '" + raw + "'");
    if (key == "ell" && (value < 1.0 || value != std::floor(value)))
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": ell must be a positive integer");
    values[key] = value;
  }
  return values;
}

ConfigValues load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace asepkpz
