#include "ratebench/runlog.hpp"

#include "ratebench/csv.hpp"
#include "ratebench/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace ratebench {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kCsvHeader =
    "copy,bench_id,workload,iteration,start_ns,end_ns,exit_ok,validation";
constexpr std::string_view kSidecarFormat = "ratebench-runlog/1";

template <typename T>
T parse_int(const std::string& s, std::string_view what, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw FormatError("bad " + std::string(what) + " '" + s + "'", line);
  }
  return v;
}

ValidationStatus parse_status(const std::string& s, std::size_t line) {
  if (s == "pass") return ValidationStatus::pass;
  if (s == "fail") return ValidationStatus::fail;
  if (s == "skipped") return ValidationStatus::skipped;
  throw FormatError("bad validation status '" + s + "'", line);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FormatError("cannot open " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string_view to_string(ValidationStatus status) {
  switch (status) {
    case ValidationStatus::pass: return "pass";
    case ValidationStatus::fail: return "fail";
    case ValidationStatus::skipped: return "skipped";
  }
  return "skipped";
}

std::int64_t RunLog::wall_span_ns() const {
  if (events.empty()) return 0;
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& e : events) {
    lo = std::min(lo, e.start_ns);
    hi = std::max(hi, e.end_ns);
  }
  return hi - lo;
}

void RunLog::sort_events() {
  std::stable_sort(events.begin(), events.end(), [](const RunEvent& a, const RunEvent& b) {
    return std::tie(a.copy, a.start_ns, a.iteration, a.bench_id, a.workload) <
           std::tie(b.copy, b.start_ns, b.iteration, b.bench_id, b.workload);
  });
}

std::string runlog_csv(const RunLog& log) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& e : log.events) {
    out << e.copy << ',' << csv::escape(e.bench_id) << ',' << csv::escape(e.workload) << ','
        << e.iteration << ',' << e.start_ns << ',' << e.end_ns << ','
        << (e.exit_ok ? "true" : "false") << ',' << to_string(e.validation) << '\n';
  }
  return out.str();
}

std::string runlog_sidecar_json(const RunLog& log) {
  json j;
  j["format"] = kSidecarFormat;
  j["suite"] = log.suite_name;
  j["mode"] = to_string(log.mode);
  j["copies"] = log.copies;
  j["iterations"] = log.iterations;
  j["inc"] = log.params.inc;
  j["step"] = log.params.step;
  j["roster"] = log.roster;
  j["host"] = log.host;
  j["pinned"] = log.pinned;
  j["warnings"] = log.warnings;
  j["errors"] = log.errors;
  return j.dump(2) + "\n";
}

std::string failures_json(const RunLog& log) {
  json arr = json::array();
  for (const auto& f : log.failures) {
    json m = json::array();
    for (const auto& x : f.mismatches) {
      m.push_back({{"file", x.file},
                   {"line", x.line},
                   {"token", x.token},
                   {"expected", x.expected},
                   {"actual", x.actual},
                   {"reason", x.reason}});
    }
    arr.push_back({{"copy", f.copy},
                   {"bench_id", f.bench_id},
                   {"workload", f.workload},
                   {"iteration", f.iteration},
                   {"detail", f.detail},
                   {"mismatches", m}});
  }
  return arr.dump(2) + "\n";
}

fs::path sidecar_path(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

RunLog parse_runlog(std::string_view csv_text, std::string_view sidecar) {
  auto rows = csv::parse(csv_text);
  if (rows.empty()) throw FormatError("run log is empty");
  if (csv::join(rows.front().fields) != kCsvHeader) {
    throw FormatError("run log header must be '" + std::string(kCsvHeader) + "'", rows.front().line);
  }

  RunLog log;
  std::size_t max_copy = 0, max_iter = 0;
  std::vector<std::string> seen_order;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 8) {
      throw FormatError("expected 8 fields, got " + std::to_string(row.fields.size()), row.line);
    }
    RunEvent e;
    e.copy = parse_int<std::size_t>(row.fields[0], "copy", row.line);
    e.bench_id = row.fields[1];
    e.workload = row.fields[2];
    e.iteration = parse_int<std::size_t>(row.fields[3], "iteration", row.line);
    e.start_ns = parse_int<std::int64_t>(row.fields[4], "start_ns", row.line);
    e.end_ns = parse_int<std::int64_t>(row.fields[5], "end_ns", row.line);
    if (row.fields[6] == "true") {
      e.exit_ok = true;
    } else if (row.fields[6] == "false") {
      e.exit_ok = false;
    } else {
      throw FormatError("bad exit_ok '" + row.fields[6] + "'", row.line);
    }
    e.validation = parse_status(row.fields[7], row.line);
    if (e.bench_id.empty()) throw FormatError("empty bench_id", row.line);
    if (e.iteration == 0) throw FormatError("iteration must be >= 1", row.line);
    if (e.end_ns < e.start_ns) throw FormatError("end_ns before start_ns", row.line);
    max_copy = std::max(max_copy, e.copy);
    max_iter = std::max(max_iter, e.iteration);
    if (seen.insert(e.bench_id).second) seen_order.push_back(e.bench_id);
    log.events.push_back(std::move(e));
  }
  if (log.events.empty()) throw FormatError("run log has no events");

  // The CSV is authoritative for copies; the sidecar supplies what the CSV
  // cannot carry.
  log.copies = max_copy + 1;
  log.iterations = max_iter;
  log.roster = seen_order;

  if (!sidecar.empty()) {
    json j;
    try {
      j = json::parse(sidecar);
      if (j.value("format", std::string()) != kSidecarFormat) {
        throw FormatError("run log sidecar has unknown format tag");
      }
      log.suite_name = j.at("suite").get<std::string>();
      log.mode = parse_run_mode(j.at("mode").get<std::string>());
      log.iterations = std::max(log.iterations, j.at("iterations").get<std::size_t>());
      log.copies = std::max(log.copies, j.at("copies").get<std::size_t>());
      log.params.inc = j.value("inc", std::size_t{1});
      log.params.step = j.value("step", std::size_t{1});
      log.roster = j.at("roster").get<std::vector<std::string>>();
      log.host = j.value("host", std::map<std::string, std::string>{});
      log.pinned = j.value("pinned", false);
      log.warnings = j.value("warnings", std::vector<std::string>{});
      log.errors = j.value("errors", std::vector<std::string>{});
    } catch (const json::exception& ex) {
      throw FormatError(std::string("run log sidecar: ") + ex.what());
    } catch (const ConfigError& ex) {
      throw FormatError(std::string("run log sidecar: ") + ex.what());
    }
  } else {
    log.mode = RunMode::rate;
    std::vector<const RunEvent*> first(log.copies, nullptr);
    for (const auto& e : log.events) {
      if (e.iteration != 1) continue;
      auto& f = first[e.copy];
      if (!f || e.start_ns < f->start_ns) f = &e;
    }
    for (const auto* f : first) {
      if (f && first[0] && f->bench_id != first[0]->bench_id) log.mode = RunMode::rrr;
    }
  }
  log.sort_events();
  return log;
}

RunLog load_runlog(const fs::path& csv_path) {
  std::string csv_text = read_text(csv_path);
  fs::path side = sidecar_path(csv_path);
  std::string side_text = fs::exists(side) ? read_text(side) : std::string();
  return parse_runlog(csv_text, side_text);
}

void check_complete(const RunLog& log, const std::map<std::string, std::vector<std::string>>& workloads) {
  std::set<std::string> roster(log.roster.begin(), log.roster.end());
  std::set<std::tuple<std::size_t, std::string, std::string, std::size_t>> keys;
  for (const auto& e : log.events) {
    if (!roster.count(e.bench_id)) throw FormatError("event for benchmark '" + e.bench_id + "' not in roster");
    if (e.copy >= log.copies) throw FormatError("event copy " + std::to_string(e.copy) + " out of range");
    if (e.iteration > log.iterations) {
      throw FormatError("event iteration " + std::to_string(e.iteration) + " out of range");
    }
    if (!keys.insert({e.copy, e.bench_id, e.workload, e.iteration}).second) {
      throw FormatError("duplicate event for copy " + std::to_string(e.copy) + " " + e.bench_id + "/" +
                        e.workload + " iteration " + std::to_string(e.iteration));
    }
  }
  for (const auto& id : log.roster) {
    for (std::size_t c = 0; c < log.copies; ++c) {
      for (std::size_t r = 1; r <= log.iterations; ++r) {
        auto it = workloads.find(id);
        if (it != workloads.end()) {
          for (const auto& w : it->second) {
            if (!keys.count({c, id, w, r})) {
              throw FormatError("run log incomplete: no event for copy " + std::to_string(c) + " " + id +
                                "/" + w + " iteration " + std::to_string(r));
            }
          }
        } else {
          auto lo = keys.lower_bound({c, id, std::string(), r});
          bool found = false;
          for (auto k = lo; k != keys.end() && std::get<0>(*k) == c && std::get<1>(*k) == id; ++k) {
            if (std::get<3>(*k) == r) {
              found = true;
              break;
            }
          }
          if (!found) {
            throw FormatError("run log incomplete: no event for copy " + std::to_string(c) + " " + id +
                              " iteration " + std::to_string(r));
          }
        }
      }
    }
  }
}

bool barrier_honored(const RunLog& log) {
  if (log.mode != RunMode::rate) return true;
  std::map<std::string, std::size_t> seq_of;
  for (std::size_t i = 0; i < log.roster.size(); ++i) seq_of[log.roster[i]] = i;

  struct Phase {
    std::int64_t min_start = std::numeric_limits<std::int64_t>::max();
    std::int64_t max_end = std::numeric_limits<std::int64_t>::min();
  };
  std::map<std::pair<std::size_t, std::size_t>, Phase> phases;
  for (const auto& e : log.events) {
    auto it = seq_of.find(e.bench_id);
    if (it == seq_of.end()) return false;
    auto& p = phases[{e.iteration, it->second}];
    p.min_start = std::min(p.min_start, e.start_ns);
    p.max_end = std::max(p.max_end, e.end_ns);
  }
  const Phase* prev = nullptr;
  for (const auto& [key, phase] : phases) {
    if (prev && phase.min_start < prev->max_end) return false;
    prev = &phase;
  }
  return true;
}

}  // namespace ratebench
