#include "roughweyl/config.hpp"

#include "roughweyl/errors.hpp"
#include "roughweyl/specs.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace roughweyl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

template <class T>
T parse_number(const std::string& v, const std::string& key) {
  T out{};
  const char* b = v.data();
  const char* e = v.data() + v.size();
  const auto res = std::from_chars(b, e, out);
  if (res.ec != std::errc() || res.ptr != e) throw ConfigError(key + ": '" + v + "' is not a valid number");
  return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string& value, const std::string& key)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"task", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.task = v; }},
      {"domain.shape", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.shape = v; }},
      {"domain.n", [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.n = parse_number<int>(v, k); }},
      {"domain.level",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.level = parse_number<int>(v, k); }},
      {"domain.pattern", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.pattern = v; }},
      {"metric.spec", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.metric = v; }},
      {"weight.spec", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.weight = v; }},
      {"boundary.kind", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.boundary = v; }},
      {"solver.t", [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.t = parse_number<double>(v, k); }},
      {"solver.k_each",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) {
         c.k_each = v == "auto" ? 0 : parse_number<int>(v, k);
       }},
      {"solver.method", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.method = v; }},
      {"solver.seed",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.seed = parse_number<std::uint64_t>(v, k); }},
      {"solver.window",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) {
         if (v == "auto") {
           c.window = {};
           return;
         }
         const auto items = split_list(v);
         if (items.size() != 2) throw ConfigError(k + ": expected auto or <k_lo>,<k_hi>");
         c.window = {parse_number<int>(items[0], k), parse_number<int>(items[1], k)};
       }},
      {"solver.partition",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) {
         const auto x = v.find('x');
         if (x == std::string::npos) throw ConfigError(k + ": expected <nx>x<ny>, e.g. 2x2");
         c.partition_x = parse_number<int>(trim(v.substr(0, x)), k);
         c.partition_y = parse_number<int>(trim(v.substr(x + 1)), k);
       }},
      {"solver.t_list",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) {
         c.t_list.clear();
         for (const auto& item : split_list(v)) c.t_list.push_back(parse_number<double>(item, k));
       }},
      {"solver.k_max",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.k_max = parse_number<int>(v, k); }},
      {"solver.trials",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.trials = parse_number<int>(v, k); }},
      {"solver.levels",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) {
         c.levels.clear();
         if (v == "auto") return;
         for (const auto& item : split_list(v)) c.levels.push_back(parse_number<int>(item, k));
       }},
      {"solver.k_list",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) {
         c.k_list.clear();
         for (const auto& item : split_list(v)) c.k_list.push_back(parse_number<int>(item, k));
       }},
      {"solver.weyl_tol",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.weyl_tol = parse_number<double>(v, k); }},
      {"solver.quad_order",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.quad_order = parse_number<int>(v, k); }},
      {"solver.vectors",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.vectors = parse_bool(v, k); }},
      {"solver.dense_limit",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.dense_limit = parse_number<int>(v, k); }},
      {"solver.block",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.block = parse_number<int>(v, k); }},
      {"output.dir", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.out_dir = v; }},
      {"output.svg",
       [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.svg = parse_bool(v, k); }},
  };
  return table;
}

// Shorthand keys allowed before the first section.
const std::map<std::string, std::string>& top_level_aliases() {
  static const std::map<std::string, std::string> table = {
      {"task", "task"}, {"metric", "metric.spec"}, {"weight", "weight.spec"}, {"boundary", "boundary.kind"}};
  return table;
}

std::string display_key(const std::string& section, const std::string& key) {
  return section.empty() ? key : "[" + section + "] " + key;
}

void validate(const ExperimentConfig& c, const std::map<std::string, std::string>& where) {
  auto name = [&](const std::string& canonical, const std::string& fallback) {
    const auto it = where.find(canonical);
    return it == where.end() ? fallback : it->second;
  };
  static const std::vector<std::string> tasks = {"solve", "weyl", "bracket", "sandwich", "varprin", "converge"};
  if (std::find(tasks.begin(), tasks.end(), c.task) == tasks.end())
    throw ConfigError(name("task", "task") + ": unknown task '" + c.task + "'");
  if (c.shape != "square" && c.shape != "disk")
    throw ConfigError(name("domain.shape", "[domain] shape") + ": must be square or disk");
  if (c.n < 0 || (c.n == 0 && where.contains("domain.n")))
    throw ConfigError(name("domain.n", "[domain] n") + ": must be >= 1");
  if (c.level < -1 || (c.level == -1 && where.contains("domain.level")))
    throw ConfigError(name("domain.level", "[domain] level") + ": must be >= 0");
  if (c.pattern != "uniform" && c.pattern != "mirrored")
    throw ConfigError(name("domain.pattern", "[domain] pattern") + ": must be uniform or mirrored");
  auto checked = [&](const std::string& key, const std::string& label, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      throw ConfigError(name(key, label) + ": " + e.what());
    } catch (const ModelingError& e) {
      throw ConfigError(name(key, label) + ": " + e.what());
    }
  };
  checked("metric.spec", "[metric] spec", [&] { (void)parse_metric_spec(c.metric); });
  checked("weight.spec", "[weight] spec", [&] { (void)parse_weight_spec(c.weight); });
  checked("boundary.kind", "[boundary] kind", [&] { (void)parse_boundary_spec(c.boundary); });
  if (!(c.t >= 0.0)) throw ConfigError(name("solver.t", "[solver] t") + ": must be >= 0");
  if (c.k_each < 0) throw ConfigError(name("solver.k_each", "[solver] k_each") + ": must be >= 1 or auto");
  if (c.method != "auto" && c.method != "dense" && c.method != "sparse")
    throw ConfigError(name("solver.method", "[solver] method") + ": must be auto, dense or sparse");
  if (c.window.lo != 0 || c.window.hi != 0)
    if (c.window.lo < 10 || c.window.hi < c.window.lo + 19)
      throw ConfigError(name("solver.window", "[solver] window") + ": needs k_lo >= 10 and at least 20 samples");
  if (c.partition_x < 1 || c.partition_y < 1)
    throw ConfigError(name("solver.partition", "[solver] partition") + ": cell counts must be >= 1");
  for (double t : c.t_list)
    if (!(t > 0.0 && t < 1.0)) throw ConfigError(name("solver.t_list", "[solver] t_list") + ": values must lie in (0, 1)");
  if (c.t_list.empty()) throw ConfigError(name("solver.t_list", "[solver] t_list") + ": empty");
  if (c.k_max < 1) throw ConfigError(name("solver.k_max", "[solver] k_max") + ": must be >= 1");
  if (c.trials < 0) throw ConfigError(name("solver.trials", "[solver] trials") + ": must be >= 0");
  for (int l : c.levels)
    if (l < 0) throw ConfigError(name("solver.levels", "[solver] levels") + ": levels must be >= 0");
  if (c.k_list.empty()) throw ConfigError(name("solver.k_list", "[solver] k_list") + ": empty");
  for (int k : c.k_list)
    if (k < 1) throw ConfigError(name("solver.k_list", "[solver] k_list") + ": indices must be >= 1");
  if (!(c.weyl_tol > 0.0)) throw ConfigError(name("solver.weyl_tol", "[solver] weyl_tol") + ": must be > 0");
  if (c.quad_order != 1 && c.quad_order != 2 && c.quad_order != 4)
    throw ConfigError(name("solver.quad_order", "[solver] quad_order") + ": must be 1, 2 or 4");
  if (c.dense_limit < 0) throw ConfigError(name("solver.dense_limit", "[solver] dense_limit") + ": must be >= 0");
  if (c.block < 1) throw ConfigError(name("solver.block", "[solver] block") + ": must be >= 1");
  if (c.out_dir.empty()) throw ConfigError(name("output.dir", "[output] dir") + ": empty");
}

} // namespace

void ExperimentConfig::resolve() {
  if (n == 0) n = shape == "disk" ? 4 : 2;
  if (level < 0) level = shape == "disk" ? 3 : 5;
  if (levels.empty())
    for (int l = std::max(0, level - 2); l <= level; ++l) levels.push_back(l);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json window_json = window.lo == 0 && window.hi == 0 ? nlohmann::json("auto")
                                                                  : nlohmann::json::array({window.lo, window.hi});
  return {
      {"task", task},
      {"domain", {{"shape", shape}, {"n", n}, {"level", level}, {"pattern", pattern}}},
      {"metric", {{"spec", metric}}},
      {"weight", {{"spec", weight}}},
      {"boundary", {{"kind", boundary}}},
      {"solver",
       {{"t", t},
        {"k_each", k_each == 0 ? nlohmann::json("auto") : nlohmann::json(k_each)},
        {"method", method},
        {"seed", seed},
        {"window", window_json},
        {"partition", std::to_string(partition_x) + "x" + std::to_string(partition_y)},
        {"t_list", t_list},
        {"k_max", k_max},
        {"trials", trials},
        {"levels", levels},
        {"k_list", k_list},
        {"weyl_tol", weyl_tol},
        {"quad_order", quad_order},
        {"vectors", vectors},
        {"dense_limit", dense_limit},
        {"block", block}}},
      {"output", {{"dir", out_dir}, {"svg", svg}}},
  };
}

ExperimentConfig parse_config(std::istream& is, const std::string& source) {
  ExperimentConfig c;
  c.source = source;
  static const std::vector<std::string> sections = {"domain", "metric", "weight", "boundary", "solver", "output"};
  std::string section;
  std::map<std::string, std::string> where; // canonical key -> key as written
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string s = trim(line);
    const std::string at = source + ":" + std::to_string(lineno) + ": ";
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(at + "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) == sections.end())
        throw ConfigError(at + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(at + "expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = unquote(trim(s.substr(eq + 1)));
    std::string canonical;
    if (section.empty()) {
      const auto it = top_level_aliases().find(key);
      if (it == top_level_aliases().end()) throw ConfigError(at + "unknown key '" + key + "' outside a section");
      canonical = it->second;
    } else {
      canonical = section + "." + key;
    }
    const auto setter = setters().find(canonical);
    if (setter == setters().end()) throw ConfigError(at + "unknown key " + display_key(section, key));
    if (where.contains(canonical)) throw ConfigError(at + display_key(section, key) + " given twice");
    where[canonical] = display_key(section, key);
    setter->second(c, value, display_key(section, key));
  }
  c.task_given = where.contains("task");
  validate(c, where);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string());
}

} // namespace roughweyl
