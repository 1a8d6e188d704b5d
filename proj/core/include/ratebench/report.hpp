#pragma once

#include "ratebench/metrics.hpp"

#include <string>

namespace ratebench {

// Human-readable raw report: header (suite, mode, M, R, host, conventions),
// one block per benchmark, footer (geomean, compliance, candidate rrr
// metrics, energy). Pure function of its inputs.
std::string render_raw_report(const SuiteScore& score, const MultiprogramReport* rrr = nullptr,
                              const EnergyReport* energy = nullptr);

// Machine-readable twin of the raw report.
std::string scores_json(const SuiteScore& score, const MultiprogramReport* rrr = nullptr,
                        const EnergyReport* energy = nullptr);

// Slowdown matrix: header "bench_id,copy0,copy1,...".
std::string slowdown_csv(const MultiprogramReport& rrr);
std::string multiprogram_json(const MultiprogramReport& rrr);

}  // namespace ratebench
