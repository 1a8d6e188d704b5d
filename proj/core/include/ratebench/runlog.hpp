#pragma once

#include "ratebench/scheduler.hpp"
#include "ratebench/validator.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ratebench {

enum class ValidationStatus { pass, fail, skipped };

std::string_view to_string(ValidationStatus status);

struct RunEvent {
  std::size_t copy = 0;
  std::string bench_id;
  std::string workload;
  std::size_t iteration = 1;  // 1-based
  std::int64_t start_ns = 0;  // monotonic, relative to harness start
  std::int64_t end_ns = 0;
  bool exit_ok = false;
  ValidationStatus validation = ValidationStatus::skipped;
  std::filesystem::path output_dir;  // not part of the CSV

  std::int64_t duration_ns() const noexcept { return end_ns - start_ns; }
};

// Validation detail for one failed event.
struct EventFailure {
  std::size_t copy = 0;
  std::string bench_id;
  std::string workload;
  std::size_t iteration = 1;
  std::string detail;  // child exit description, when the process failed
  std::vector<Mismatch> mismatches;
};

struct RunLog {
  std::string suite_name;
  RunMode mode = RunMode::rate;
  std::size_t copies = 0;      // M
  std::size_t iterations = 1;  // R
  RRRParams params;
  std::vector<std::string> roster;  // ids in roster order
  std::vector<RunEvent> events;
  std::map<std::string, std::string> host;
  bool pinned = false;            // affinity actually applied
  std::vector<std::string> warnings;
  std::vector<EventFailure> failures;
  std::vector<std::string> errors;  // harness-side failures (staging I/O)

  std::int64_t wall_span_ns() const;
  // Events in canonical order: copy, then start time, then workload.
  void sort_events();
};

// CSV: copy,bench_id,workload,iteration,start_ns,end_ns,exit_ok,validation
std::string runlog_csv(const RunLog& log);
// Sidecar JSON: suite, mode, copies, iterations, inc/step, roster, host, flags.
std::string runlog_sidecar_json(const RunLog& log);
// Validation failures as a JSON array.
std::string failures_json(const RunLog& log);

// Reads a CSV log and, when present, its JSON sidecar. Without a sidecar the
// roster is taken in first-appearance order, copies from the highest copy
// index and the mode inferred from the first events of each copy.
// Throws FormatError on malformed input.
RunLog parse_runlog(std::string_view csv, std::string_view sidecar_json = {});
RunLog load_runlog(const std::filesystem::path& csv_path);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

// Throws FormatError unless every (copy, roster entry, iteration) has events
// and event keys are unique. `workloads` lists the workload names expected per
// benchmark id; benchmarks absent from the map only need one event.
void check_complete(const RunLog& log,
                    const std::map<std::string, std::vector<std::string>>& workloads = {});

// In rate mode: for consecutive (iteration, seq) phases, no event of the later
// phase starts before every event of the earlier phase has ended.
bool barrier_honored(const RunLog& log);

}  // namespace ratebench
