#include "ratebench/scheduler.hpp"

#include "ratebench/error.hpp"

#include <numeric>
#include <set>
#include <sstream>

namespace ratebench {

std::string_view to_string(RunMode mode) { return mode == RunMode::rate ? "rate" : "rrr"; }

RunMode parse_run_mode(std::string_view text) {
  if (text == "rate") return RunMode::rate;
  if (text == "rrr") return RunMode::rrr;
  throw ConfigError("unknown run mode '" + std::string(text) + "' (expected rate or rrr)");
}

std::vector<std::size_t> Schedule::sequence(std::size_t copy) const {
  std::vector<std::size_t> out;
  out.reserve(roster_size);
  for (std::size_t s = 0; s < roster_size; ++s) out.push_back(at(copy, s).bench_index);
  return out;
}

namespace {

void check_sizes(std::size_t roster_size, std::size_t copies) {
  if (roster_size == 0) throw ScheduleError("roster size N must be at least 1");
  if (copies == 0) throw ScheduleError("copy count M must be at least 1");
}

}  // namespace

Schedule make_homogeneous_schedule(std::size_t roster_size, std::size_t copies) {
  check_sizes(roster_size, copies);
  Schedule sched;
  sched.mode = RunMode::rate;
  sched.copies = copies;
  sched.roster_size = roster_size;
  sched.slots.reserve(roster_size * copies);
  for (std::size_t c = 0; c < copies; ++c) {
    for (std::size_t s = 0; s < roster_size; ++s) sched.slots.push_back({c, s, s});
  }
  for (std::size_t s = 0; s + 1 < roster_size; ++s) sched.barriers_after.push_back(s);
  return sched;
}

Schedule make_rrr_schedule(std::size_t roster_size, std::size_t copies, RRRParams params) {
  check_sizes(roster_size, copies);
  if (params.inc == 0) throw ScheduleError("inc must be a positive integer");
  if (params.step == 0) throw ScheduleError("step must be a positive integer");
  if (std::gcd(params.step, roster_size) != 1) {
    throw ScheduleError("step " + std::to_string(params.step) + " shares a factor with roster size " +
                        std::to_string(roster_size) + " (gcd " +
                        std::to_string(std::gcd(params.step, roster_size)) +
                        "), so a copy would revisit benchmarks and skip others");
  }
  Schedule sched;
  sched.mode = RunMode::rrr;
  sched.copies = copies;
  sched.roster_size = roster_size;
  sched.params = params;
  sched.slots.reserve(roster_size * copies);
  const std::size_t inc = params.inc % roster_size;
  const std::size_t step = params.step % roster_size;
  for (std::size_t c = 0; c < copies; ++c) {
    const std::size_t start = (c % roster_size) * inc % roster_size;
    for (std::size_t s = 0; s < roster_size; ++s) {
      sched.slots.push_back({c, s, (start + s * step) % roster_size});
    }
  }
  return sched;
}

std::vector<std::size_t> schedule_diversity(const Schedule& sched) {
  std::vector<std::size_t> out;
  out.reserve(sched.roster_size);
  for (std::size_t s = 0; s < sched.roster_size; ++s) {
    std::set<std::size_t> distinct;
    for (std::size_t c = 0; c < sched.copies; ++c) distinct.insert(sched.at(c, s).bench_index);
    out.push_back(distinct.size());
  }
  return out;
}

std::string schedule_csv(const Schedule& sched, std::span<const std::string> ids) {
  if (ids.size() != sched.roster_size) {
    throw ScheduleError("schedule_csv: roster has " + std::to_string(ids.size()) +
                        " ids, schedule expects " + std::to_string(sched.roster_size));
  }
  std::ostringstream out;
  out << "copy,seq,bench_id\n";
  for (const auto& slot : sched.slots) {
    out << slot.copy << ',' << slot.seq << ',' << ids[slot.bench_index] << '\n';
  }
  return out.str();
}

}  // namespace ratebench
