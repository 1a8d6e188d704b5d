#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace ratebench {

// Deterministic stand-in workloads. Each performs exactly `work_units`
// operations and reports a checksum; output depends only on the inputs.
enum class SynthKind { spin, stream, mixed };

std::string_view to_string(SynthKind kind);
SynthKind parse_synth_kind(std::string_view text);  // ConfigError on unknown kinds

struct SynthParams {
  SynthKind kind = SynthKind::spin;
  std::uint64_t work_units = 0;
  std::uint64_t buffer_mib = 8;  // stream / mixed only
};

struct SynthResult {
  std::uint64_t checksum = 0;
  double mean = 0.0;  // running average that validation checks numerically
};

// Runs the workload in-process. Throws ConfigError when work_units == 0 or
// buffer_mib == 0.
SynthResult run_synthetic(const SynthParams& params);

// Text written to the output file.
std::string synthetic_output(const SynthParams& params, const SynthResult& result);

// Runs the workload and writes its output file. Returns 0 on success; throws
// ConfigError on bad parameters and IoError when the file cannot be written.
int synth_main(const SynthParams& params, const std::filesystem::path& out_file);

}  // namespace ratebench
