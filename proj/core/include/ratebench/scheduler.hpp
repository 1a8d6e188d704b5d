#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ratebench {

enum class RunMode { rate, rrr };

std::string_view to_string(RunMode mode);
RunMode parse_run_mode(std::string_view text);  // "rate" | "rrr"; ConfigError otherwise

struct ScheduleSlot {
  std::size_t copy = 0;
  std::size_t seq = 0;          // position within the copy's sequence
  std::size_t bench_index = 0;  // roster index

  bool operator==(const ScheduleSlot&) const = default;
};

struct RRRParams {
  std::size_t inc = 1;   // start offset stride between adjacent copies
  std::size_t step = 1;  // stride through the roster within one copy
};

struct Schedule {
  RunMode mode = RunMode::rate;
  std::size_t copies = 0;       // M
  std::size_t roster_size = 0;  // N
  RRRParams params;             // meaningful for rrr only
  std::vector<ScheduleSlot> slots;  // copy-major, then seq
  // Seq positions followed by a rendezvous of all copies (rate mode only).
  std::vector<std::size_t> barriers_after;

  const ScheduleSlot& at(std::size_t copy, std::size_t seq) const {
    return slots[copy * roster_size + seq];
  }
  // The roster indices one copy runs, in order.
  std::vector<std::size_t> sequence(std::size_t copy) const;
};

// All copies run roster entry s at sequence position s, with a barrier between
// consecutive positions. Throws ScheduleError for N == 0 or M == 0.
Schedule make_homogeneous_schedule(std::size_t roster_size, std::size_t copies);

// Copy c runs (c*inc + s*step) mod N at position s. No barriers.
// Throws ScheduleError unless gcd(step, N) == 1, inc >= 1, step >= 1.
Schedule make_rrr_schedule(std::size_t roster_size, std::size_t copies, RRRParams params);

// Number of distinct roster entries running across copies at each seq position.
std::vector<std::size_t> schedule_diversity(const Schedule& sched);

// CSV with header "copy,seq,bench_id". `ids` must have roster_size entries.
std::string schedule_csv(const Schedule& sched, std::span<const std::string> ids);

}  // namespace ratebench
