#include "gcica/config_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "gcica/errors.hpp"

namespace gcica {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

std::string unquote(std::string_view tok, int line) {
  tok = trim(tok);
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
    return std::string(tok.substr(1, tok.size() - 2));
  if (tok.find('"') != std::string_view::npos)
    throw ConfigError("line " + std::to_string(line) + ": unbalanced quote");
  if (tok.empty()) throw ConfigError("line " + std::to_string(line) + ": empty value");
  return std::string(tok);
}

std::vector<std::string> split_list(std::string_view body, int line) {
  std::vector<std::string> out;
  if (trim(body).empty()) return out;
  bool quoted = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i < body.size() && body[i] == '"') quoted = !quoted;
    if (i == body.size() || (body[i] == ',' && !quoted)) {
      out.push_back(unquote(body.substr(start, i - start), line));
      start = i + 1;
    }
  }
  return out;
}

const ConfigValue* find(const ConfigMap& cfg, const std::string& key) {
  auto it = cfg.find(key);
  return it == cfg.end() ? nullptr : &it->second;
}

std::string where(const std::string& key, const ConfigValue& v) {
  return "line " + std::to_string(v.line) + " (" + key + ")";
}

const std::string& scalar(const std::string& key, const ConfigValue& v) {
  if (v.list || v.items.size() != 1) throw ConfigError(where(key, v) + ": expected a single value");
  return v.items.front();
}

template <class F>
auto wrap(const std::string& key, const ConfigValue& v, const std::string& s, F f) {
  try {
    return f(s);
  } catch (const ConfigError& e) {
    throw ConfigError(where(key, v) + ": " + e.what());
  }
}

int as_int(const std::string& key, const ConfigValue& v, const std::string& s) {
  const long long x = wrap(key, v, s, parse_integer);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError(where(key, v) + ": out of range");
  return static_cast<int>(x);
}

std::vector<int> int_list(const std::string& key, const ConfigValue& v) {
  std::vector<int> out;
  for (const auto& s : v.items) out.push_back(as_int(key, v, s));
  if (out.empty()) throw ConfigError(where(key, v) + ": empty list");
  return out;
}

std::vector<double> real_list(const std::string& key, const ConfigValue& v) {
  std::vector<double> out;
  for (const auto& s : v.items) out.push_back(wrap(key, v, s, parse_real));
  if (out.empty()) throw ConfigError(where(key, v) + ": empty list");
  return out;
}

}  // namespace

double parse_real(std::string_view s) {
  s = trim(s);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  const auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    const double den = parse_real(s.substr(slash + 1));
    if (den == 0.0) throw ConfigError("zero denominator in '" + std::string(s) + "'");
    return parse_real(s.substr(0, slash)) / den;
  }
  const std::string str(s);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(str, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + str + "'");
  }
  if (used != str.size()) throw ConfigError("not a number: '" + str + "'");
  return x;
}

long long parse_integer(std::string_view s) {
  s = trim(s);
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("not an integer: '" + std::string(s) + "'");
  return x;
}

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("not a boolean: '" + std::string(s) + "'");
}

ConfigMap parse_config(std::string_view text) {
  ConfigMap out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (out.count(key)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " + key);

    ConfigValue v;
    v.line = line_no;
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated list");
      v.list = true;
      v.items = split_list(value.substr(1, value.size() - 2), line_no);
    } else {
      v.items.push_back(unquote(value, line_no));
    }
    out.emplace(key, std::move(v));
  }
  return out;
}

ConfigMap load_config_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config file: " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

SweepSpec spec_from_config(const ConfigMap& cfg) {
  static const std::set<std::string> known = {
      "m", "na", "tau_p", "l", "n_i", "snr_db", "n_pd", "code_rate", "codec", "pilot_book",
      "sic_max_iters", "degree_tol", "dup_threshold", "valid_threshold", "detect_threshold",
      "ica_max_iters", "ica_tol", "de_iters", "seed", "trials", "jobs", "baselines", "analysis",
      "zip_tau_l", "keep_trials"};
  static const std::set<std::string> grid = {"na", "m", "snr_db", "n_i", "tau_p", "l"};
  for (const auto& [key, v] : cfg) {
    if (!known.count(key)) throw ConfigError(where(key, v) + ": unknown key");
    if (v.list && !grid.count(key) && key != "baselines")
      throw ConfigError(where(key, v) + ": lists are only allowed for grid keys");
  }

  SweepSpec spec;
  SystemConfig& b = spec.base;
  auto get_int = [&](const char* key, int& dst) {
    if (auto* v = find(cfg, key)) dst = as_int(key, *v, scalar(key, *v));
  };
  auto get_real = [&](const char* key, double& dst) {
    if (auto* v = find(cfg, key)) dst = wrap(key, *v, scalar(key, *v), parse_real);
  };
  auto get_str = [&](const char* key, std::string& dst) {
    if (auto* v = find(cfg, key)) dst = scalar(key, *v);
  };
  auto get_bool = [&](const char* key, bool& dst) {
    if (auto* v = find(cfg, key)) dst = wrap(key, *v, scalar(key, *v), parse_bool);
  };

  get_int("n_pd", b.n_pd);
  get_real("code_rate", b.code_rate);
  get_str("codec", b.codec);
  get_str("pilot_book", b.pilot_book);
  get_int("sic_max_iters", b.sic_max_iters);
  get_real("degree_tol", b.degree_tol);
  get_real("dup_threshold", b.dup_threshold);
  get_real("valid_threshold", b.valid_threshold);
  get_real("detect_threshold", b.detect_threshold);
  get_int("ica_max_iters", b.ica_max_iters);
  get_real("ica_tol", b.ica_tol);
  get_int("de_iters", b.de_iters);
  if (auto* v = find(cfg, "seed")) {
    const long long s = wrap("seed", *v, scalar("seed", *v), parse_integer);
    if (s < 0) throw ConfigError(where("seed", *v) + ": seed must be >= 0");
    b.seed = static_cast<std::uint64_t>(s);
  }

  auto grid_int = [&](const char* key, int& dst, std::vector<int>& list) {
    if (auto* v = find(cfg, key)) {
      list = int_list(key, *v);
      dst = list.front();
    }
  };
  grid_int("na", b.na, spec.na);
  grid_int("m", b.m, spec.m);
  grid_int("n_i", b.n_i, spec.n_i);
  grid_int("tau_p", b.tau_p, spec.tau_p);
  grid_int("l", b.l, spec.l);
  if (auto* v = find(cfg, "snr_db")) {
    spec.snr_db = real_list("snr_db", *v);
    b.snr_db = spec.snr_db.front();
  }

  get_int("trials", spec.trials);
  get_int("jobs", spec.jobs);
  get_bool("analysis", spec.analysis);
  get_bool("zip_tau_l", spec.zip_tau_l);
  get_bool("keep_trials", spec.keep_trials);
  if (auto* v = find(cfg, "baselines")) spec.baselines = v->items;

  b.validate();
  spec.normalize();
  return spec;
}

}  // namespace gcica
