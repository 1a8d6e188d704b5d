#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ratebench {

enum class ToleranceMode { exact, numeric };

struct ToleranceRule {
  ToleranceMode mode = ToleranceMode::exact;
  double abstol = 0.0;
  double reltol = 0.0;
  std::vector<std::string> skip_line_prefixes;

  // Throws ConfigError if the invariants do not hold.
  void check() const;

  bool operator==(const ToleranceRule&) const = default;
};

struct GoldenOutput {
  std::string filename;          // name of the file the benchmark writes
  std::filesystem::path golden;  // expected copy

  bool operator==(const GoldenOutput&) const = default;
};

struct WorkloadSpec {
  std::string name;
  std::vector<std::string> args;
  std::vector<std::filesystem::path> input_files;
  std::vector<GoldenOutput> golden_outputs;

  bool operator==(const WorkloadSpec&) const = default;
};

struct BenchmarkSpec {
  std::string id;
  // Executable followed by argument template. Tokens:
  //   "@harness"   the harness binary itself (synthetic benchmarks)
  //   "{args}"     spliced with the workload's args (appended if absent)
  //   "{workload}" replaced by the workload name
  std::vector<std::string> command;
  std::vector<WorkloadSpec> workloads;
  double reference_time_s = 0.0;
  std::optional<double> solo_time_s;
  std::optional<double> reference_energy_j;
  ToleranceRule validation;

  double solo_or_reference_s() const { return solo_time_s.value_or(reference_time_s); }

  bool operator==(const BenchmarkSpec&) const = default;
};

struct SuiteConfig {
  std::string suite_name;
  std::vector<BenchmarkSpec> roster;  // order is the rotation order
  std::filesystem::path base_dir;     // directory relative paths resolved against

  std::size_t size() const noexcept { return roster.size(); }
  std::vector<std::string> ids() const;

  bool operator==(const SuiteConfig&) const = default;
};

inline constexpr std::string_view kHarnessToken = "@harness";

// Parses and validates a TOML suite file. Relative paths resolve against the
// file's directory. Throws ConfigError naming the offending field.
SuiteConfig load_suite(const std::filesystem::path& path);
SuiteConfig parse_suite(std::string_view text, const std::filesystem::path& base_dir,
                        std::string_view source_name = "<string>");

// Emits the config in the same grammar load_suite reads. Paths are written
// absolute so the output can be reloaded from anywhere.
std::string serialize_suite(const SuiteConfig& cfg);

// Throws ConfigError on invariant violations (duplicate ids, bad times,
// missing files).
void validate_suite(const SuiteConfig& cfg);

// 0-based roster position; throws ConfigError for an unknown id.
std::size_t roster_index(const SuiteConfig& cfg, std::string_view id);

// Roster restricted to `ids`, in the order given. Throws ConfigError for
// unknown or repeated ids.
SuiteConfig subset_suite(const SuiteConfig& cfg, std::span<const std::string> ids);

std::string_view to_string(ToleranceMode mode);

}  // namespace ratebench
