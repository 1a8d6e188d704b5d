#pragma once

#include "ratebench/runlog.hpp"
#include "ratebench/scheduler.hpp"
#include "ratebench/suite.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ratebench {

struct AffinityPolicy {
  enum class Kind { none, pin };

  Kind kind = Kind::none;
  std::map<std::size_t, int> core_of_copy;

  // Copy i pinned to cores[i].
  static AffinityPolicy pin_list(const std::vector<int>& cores);

  // Throws ConfigError unless the map covers copies 0..copies-1 with
  // distinct, non-negative cores.
  void check(std::size_t copies) const;
};

// Called once a child has exited, before its outputs are validated.
using AfterRunHook = std::function<void(const RunEvent&, const std::filesystem::path& dir)>;

struct RunContext {
  std::filesystem::path harness;  // substituted for "@harness"
  std::chrono::steady_clock::time_point origin = std::chrono::steady_clock::now();
  std::optional<int> cpu;  // pin the child to this logical CPU
  std::size_t iteration = 1;
  AfterRunHook after_run;
};

struct ExecOptions {
  std::filesystem::path harness;  // defaults to the running executable
  AfterRunHook after_run;
};

// Maps the command's first token to an executable path, or nullopt when it
// cannot be found. Bare names are looked up on PATH.
std::optional<std::filesystem::path> resolve_executable(const std::string& token,
                                                        const std::filesystem::path& harness);

// Expands the argument template for one workload (argv[0] excluded).
std::vector<std::string> expand_arguments(const BenchmarkSpec& bench, const WorkloadSpec& workload);

// Creates an empty run directory and copies the workload's input files in.
// Throws ExecutionError on filesystem errors.
void stage_run_dir(const std::filesystem::path& dir, const WorkloadSpec& workload);

// Why an event failed: a process-level description or validation mismatches.
struct RunDiagnostics {
  std::string detail;
  std::vector<Mismatch> mismatches;
};

// Spawns one benchmark process in `dir` (already staged), capturing stdout
// and stderr to files there, then validates its outputs. The timed span is
// fork to reap. A spawn failure yields exit_ok = false, validation skipped.
RunEvent run_one(std::size_t copy, const BenchmarkSpec& bench, const WorkloadSpec& workload,
                 const std::filesystem::path& dir, const RunContext& ctx,
                 RunDiagnostics* diagnostics = nullptr);

// Runs the whole schedule `iterations` times. Rate mode runs each (iteration,
// seq) phase behind a barrier across copies; rrr mode lets every copy run its
// rotation freely. Throws ExecutionError before spawning anything if an
// executable cannot be resolved; failing children are recorded, not fatal.
RunLog execute(const Schedule& sched, const SuiteConfig& cfg, std::size_t iterations,
               const AffinityPolicy& affinity, const std::filesystem::path& out_root,
               const ExecOptions& options = {});

}  // namespace ratebench
