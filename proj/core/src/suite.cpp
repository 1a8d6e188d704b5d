#include "ratebench/suite.hpp"

#include "ratebench/error.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace ratebench {
namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(std::string_view where, std::string_view msg) {
  throw ConfigError(std::string(where) + ": " + std::string(msg));
}

fs::path resolve(const fs::path& base, std::string_view p) {
  fs::path path{std::string(p)};
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

template <typename T>
T required(const toml::table& t, std::string_view key, std::string_view where) {
  const toml::node* node = t.get(key);
  if (!node) fail(where, "missing field '" + std::string(key) + "'");
  if constexpr (std::is_same_v<T, double>) {
    // Integers are accepted where reals are expected.
    if (auto v = node->value<double>()) return *v;
  } else {
    if (auto v = node->value<T>()) return *v;
  }
  fail(where, "field '" + std::string(key) + "' has the wrong type");
}

template <typename T>
std::optional<T> optional_field(const toml::table& t, std::string_view key, std::string_view where) {
  if (!t.contains(key)) return std::nullopt;
  return required<T>(t, key, where);
}

std::vector<std::string> string_list(const toml::table& t, std::string_view key,
                                     std::string_view where, bool required_key) {
  std::vector<std::string> out;
  const toml::node* node = t.get(key);
  if (!node) {
    if (required_key) fail(where, "missing field '" + std::string(key) + "'");
    return out;
  }
  const toml::array* arr = node->as_array();
  if (!arr) fail(where, "field '" + std::string(key) + "' must be an array of strings");
  for (const auto& el : *arr) {
    auto s = el.value<std::string>();
    if (!s) fail(where, "field '" + std::string(key) + "' must be an array of strings");
    out.push_back(*s);
  }
  return out;
}

ToleranceRule parse_rule(const toml::table* t, std::string_view where) {
  ToleranceRule rule;
  if (!t) return rule;
  std::string w = std::string(where) + ".validation";
  auto mode = optional_field<std::string>(*t, "mode", w).value_or("exact");
  if (mode == "exact") {
    rule.mode = ToleranceMode::exact;
  } else if (mode == "numeric") {
    rule.mode = ToleranceMode::numeric;
  } else {
    fail(w, "mode must be 'exact' or 'numeric', got '" + mode + "'");
  }
  rule.abstol = optional_field<double>(*t, "abstol", w).value_or(0.0);
  rule.reltol = optional_field<double>(*t, "reltol", w).value_or(0.0);
  rule.skip_line_prefixes = string_list(*t, "skip_line_prefixes", w, false);
  try {
    rule.check();
  } catch (const ConfigError& e) {
    fail(w, e.what());
  }
  return rule;
}

WorkloadSpec parse_workload(const toml::table& t, const fs::path& base, std::string_view where) {
  WorkloadSpec w;
  w.name = required<std::string>(t, "name", where);
  std::string here = std::string(where) + "[" + w.name + "]";
  w.args = string_list(t, "args", here, false);
  for (const auto& p : string_list(t, "input_files", here, false)) {
    w.input_files.push_back(resolve(base, p));
  }
  if (const toml::node* node = t.get("golden_outputs")) {
    const toml::array* arr = node->as_array();
    if (!arr) fail(here, "golden_outputs must be an array of tables");
    for (const auto& el : *arr) {
      const toml::table* g = el.as_table();
      if (!g) fail(here, "golden_outputs must be an array of tables");
      w.golden_outputs.push_back(
          {required<std::string>(*g, "file", here + ".golden_outputs"),
           resolve(base, required<std::string>(*g, "golden", here + ".golden_outputs"))});
    }
  }
  return w;
}

BenchmarkSpec parse_benchmark(const toml::table& t, const fs::path& base, std::size_t index) {
  std::string where = "benchmark[" + std::to_string(index) + "]";
  BenchmarkSpec b;
  b.id = required<std::string>(t, "id", where);
  where = "benchmark '" + b.id + "'";
  b.command = string_list(t, "command", where, true);
  if (b.command.empty()) fail(where, "command must not be empty");
  if (b.command[0] != kHarnessToken && b.command[0].find('/') != std::string::npos) {
    b.command[0] = resolve(base, b.command[0]).string();
  }
  b.reference_time_s = required<double>(t, "reference_time_s", where);
  b.solo_time_s = optional_field<double>(t, "solo_time_s", where);
  b.reference_energy_j = optional_field<double>(t, "reference_energy_j", where);
  b.validation = parse_rule(t["validation"].as_table(), where);

  const toml::node* wl = t.get("workload");
  if (!wl) fail(where, "missing field 'workload' (at least one [[benchmark.workload]])");
  const toml::array* arr = wl->as_array();
  if (!arr) fail(where, "'workload' must be an array of tables");
  for (const auto& el : *arr) {
    const toml::table* wt = el.as_table();
    if (!wt) fail(where, "'workload' must be an array of tables");
    b.workloads.push_back(parse_workload(*wt, base, where + ".workload"));
  }
  return b;
}

}  // namespace

void ToleranceRule::check() const {
  if (!std::isfinite(abstol) || !std::isfinite(reltol)) throw ConfigError("tolerances must be finite");
  if (abstol < 0 || reltol < 0) throw ConfigError("tolerances must be non-negative");
  if (mode == ToleranceMode::exact && (abstol != 0 || reltol != 0)) {
    throw ConfigError("exact mode requires abstol = reltol = 0");
  }
}

std::string_view to_string(ToleranceMode mode) {
  return mode == ToleranceMode::exact ? "exact" : "numeric";
}

std::vector<std::string> SuiteConfig::ids() const {
  std::vector<std::string> out;
  out.reserve(roster.size());
  for (const auto& b : roster) out.push_back(b.id);
  return out;
}

SuiteConfig parse_suite(std::string_view text, const fs::path& base_dir, std::string_view source_name) {
  toml::table doc;
  try {
    doc = toml::parse(text, source_name);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source_name << ":" << e.source().begin.line << ":" << e.source().begin.column
        << ": parse error: " << e.description();
    throw ConfigError(msg.str());
  }

  SuiteConfig cfg;
  cfg.base_dir = fs::absolute(base_dir).lexically_normal();
  cfg.suite_name = required<std::string>(doc, "suite_name", "suite");
  const toml::node* node = doc.get("benchmark");
  if (!node) fail("suite", "roster is empty (no [[benchmark]] entries)");
  const toml::array* arr = node->as_array();
  if (!arr) fail("suite", "'benchmark' must be an array of tables");
  std::size_t index = 0;
  for (const auto& el : *arr) {
    const toml::table* t = el.as_table();
    if (!t) fail("suite", "'benchmark' must be an array of tables");
    cfg.roster.push_back(parse_benchmark(*t, cfg.base_dir, index++));
  }
  validate_suite(cfg);
  return cfg;
}

SuiteConfig load_suite(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open suite file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_suite(buf.str(), fs::absolute(path).parent_path(), path.string());
}

void validate_suite(const SuiteConfig& cfg) {
  if (cfg.roster.empty()) fail("suite", "roster is empty");
  std::set<std::string> seen;
  for (const auto& b : cfg.roster) {
    std::string where = "benchmark '" + b.id + "'";
    if (b.id.empty()) fail("suite", "benchmark id must not be empty");
    if (!seen.insert(b.id).second) fail(where, "duplicate id '" + b.id + "'");
    if (b.command.empty()) fail(where, "command must not be empty");
    if (!(b.reference_time_s > 0) || !std::isfinite(b.reference_time_s)) {
      fail(where, "reference_time_s must be positive");
    }
    if (b.solo_time_s && (!(*b.solo_time_s > 0) || !std::isfinite(*b.solo_time_s))) {
      fail(where, "solo_time_s must be positive");
    }
    if (b.reference_energy_j &&
        (!(*b.reference_energy_j > 0) || !std::isfinite(*b.reference_energy_j))) {
      fail(where, "reference_energy_j must be positive");
    }
    try {
      b.validation.check();
    } catch (const ConfigError& e) {
      fail(where + ".validation", e.what());
    }
    if (b.workloads.empty()) fail(where, "workloads must not be empty");
    std::set<std::string> wnames;
    for (const auto& w : b.workloads) {
      std::string here = where + ".workload[" + w.name + "]";
      if (w.name.empty()) fail(where, "workload name must not be empty");
      if (!wnames.insert(w.name).second) fail(here, "duplicate workload name");
      for (const auto& f : w.input_files) {
        if (!fs::is_regular_file(f)) fail(here + ".input_files", "missing file " + f.string());
      }
      std::set<std::string> gnames;
      for (const auto& g : w.golden_outputs) {
        if (!gnames.insert(g.filename).second) {
          fail(here + ".golden_outputs", "duplicate file '" + g.filename + "'");
        }
        if (!fs::is_regular_file(g.golden)) {
          fail(here + ".golden_outputs", "missing golden file " + g.golden.string());
        }
      }
    }
  }
}

std::size_t roster_index(const SuiteConfig& cfg, std::string_view id) {
  for (std::size_t i = 0; i < cfg.roster.size(); ++i) {
    if (cfg.roster[i].id == id) return i;
  }
  throw ConfigError("unknown benchmark id '" + std::string(id) + "'");
}

SuiteConfig subset_suite(const SuiteConfig& cfg, std::span<const std::string> ids) {
  if (ids.empty()) throw ConfigError("benchmark subset must not be empty");
  SuiteConfig out;
  out.suite_name = cfg.suite_name;
  out.base_dir = cfg.base_dir;
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw ConfigError("benchmark '" + id + "' listed twice in subset");
    out.roster.push_back(cfg.roster[roster_index(cfg, id)]);
  }
  return out;
}

std::string serialize_suite(const SuiteConfig& cfg) {
  auto strings = [](const auto& range) {
    toml::array a;
    for (const auto& s : range) {
      if constexpr (std::is_same_v<std::decay_t<decltype(s)>, fs::path>) {
        a.push_back(s.string());
      } else {
        a.push_back(s);
      }
    }
    return a;
  };

  toml::table doc;
  doc.insert("suite_name", cfg.suite_name);
  toml::array benches;
  for (const auto& b : cfg.roster) {
    toml::table t;
    t.insert("id", b.id);
    t.insert("command", strings(b.command));
    t.insert("reference_time_s", b.reference_time_s);
    if (b.solo_time_s) t.insert("solo_time_s", *b.solo_time_s);
    if (b.reference_energy_j) t.insert("reference_energy_j", *b.reference_energy_j);

    toml::table v;
    v.insert("mode", std::string(to_string(b.validation.mode)));
    v.insert("abstol", b.validation.abstol);
    v.insert("reltol", b.validation.reltol);
    v.insert("skip_line_prefixes", strings(b.validation.skip_line_prefixes));
    t.insert("validation", std::move(v));

    toml::array workloads;
    for (const auto& w : b.workloads) {
      toml::table wt;
      wt.insert("name", w.name);
      wt.insert("args", strings(w.args));
      wt.insert("input_files", strings(w.input_files));
      toml::array golden;
      for (const auto& g : w.golden_outputs) {
        golden.push_back(toml::table{{"file", g.filename}, {"golden", g.golden.string()}});
      }
      wt.insert("golden_outputs", std::move(golden));
      workloads.push_back(std::move(wt));
    }
    t.insert("workload", std::move(workloads));
    benches.push_back(std::move(t));
  }
  doc.insert("benchmark", std::move(benches));

  std::ostringstream out;
  out << "# ratebench suite v1\n" << doc << "\n";
  return out.str();
}

}  // namespace ratebench
