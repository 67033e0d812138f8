#pragma once

// Plain-text `key = value` configuration files.
//
//   # comment
//   m = 100
//   snr_db = inf
//   code_rate = 1/2
//   codec = "default-ldpc"
//   na = [10, 20, 30]
//   analysis = true

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gcica/harness.hpp"
#include "gcica/model.hpp"

namespace gcica {

struct ConfigValue {
  std::vector<std::string> items;  // unquoted tokens
  bool list = false;
  int line = 0;
};

using ConfigMap = std::map<std::string, ConfigValue>;

/// Throws ConfigError on syntax errors and repeated keys.
ConfigMap parse_config(std::string_view text);
/// Throws IoError if the file cannot be read.
ConfigMap load_config_file(const std::filesystem::path& path);

/// Builds a sweep spec; every SystemConfig field plus `trials`, `jobs`,
/// `baselines`, `analysis`, `zip_tau_l` and `keep_trials` is accepted. Grid
/// fields (na, m, snr_db, n_i, tau_p, l) may be lists. Unknown keys throw.
SweepSpec spec_from_config(const ConfigMap& cfg);

double parse_real(std::string_view s);
long long parse_integer(std::string_view s);
bool parse_bool(std::string_view s);

}  // namespace gcica
