#include "ratebench/executor.hpp"

#include "ratebench/error.hpp"
#include "ratebench/host.hpp"
#include "ratebench/validator.hpp"

#include <algorithm>
#include <cerrno>
#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <fcntl.h>
#include <sched.h>
#include <sys/wait.h>
#include <unistd.h>

namespace ratebench {
namespace fs = std::filesystem;

namespace {

// Unbounded multi-producer / single-consumer handoff.
template <typename T>
class Channel {
 public:
  void send(T value) {
    {
      std::lock_guard lock(mu_);
      queue_.push_back(std::move(value));
    }
    cv_.notify_one();
  }

  T receive() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !queue_.empty(); });
    T value = std::move(queue_.front());
    queue_.pop_front();
    return value;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<T> queue_;
};

// Workers wait here until the coordinator opens their phase.
class PhaseGate {
 public:
  void open(std::size_t phase) {
    {
      std::lock_guard lock(mu_);
      open_ = phase;
    }
    cv_.notify_all();
  }

  void wait(std::size_t phase) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return open_ >= phase; });
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t open_ = 0;
};

struct SlotReport {
  std::vector<RunEvent> events;
  std::vector<EventFailure> failures;
  std::vector<std::string> errors;
};

std::int64_t since(std::chrono::steady_clock::time_point origin) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - origin)
      .count();
}

bool is_executable(const fs::path& p) {
  std::error_code ec;
  return fs::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
}

std::string describe_status(int status) {
  if (WIFEXITED(status)) return "exited with status " + std::to_string(WEXITSTATUS(status));
  if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
  return "ended abnormally";
}

fs::path run_dir(const fs::path& root, const std::string& bench, std::size_t copy, std::size_t iteration,
                 const std::string& workload) {
  return root / bench / ("copy" + std::to_string(copy)) / ("iter" + std::to_string(iteration)) / workload;
}

}  // namespace

AffinityPolicy AffinityPolicy::pin_list(const std::vector<int>& cores) {
  AffinityPolicy p;
  p.kind = Kind::pin;
  for (std::size_t i = 0; i < cores.size(); ++i) p.core_of_copy[i] = cores[i];
  return p;
}

void AffinityPolicy::check(std::size_t copies) const {
  if (kind == Kind::none) return;
  std::set<int> used;
  for (std::size_t c = 0; c < copies; ++c) {
    auto it = core_of_copy.find(c);
    if (it == core_of_copy.end()) {
      throw ConfigError("affinity: no core given for copy " + std::to_string(c));
    }
    if (it->second < 0) throw ConfigError("affinity: negative core id for copy " + std::to_string(c));
    if (!used.insert(it->second).second) {
      throw ConfigError("affinity: core " + std::to_string(it->second) + " assigned to more than one copy");
    }
  }
}

std::optional<fs::path> resolve_executable(const std::string& token, const fs::path& harness) {
  if (token == kHarnessToken) {
    if (harness.empty() || !is_executable(harness)) return std::nullopt;
    return harness;
  }
  if (token.find('/') != std::string::npos) {
    if (!is_executable(token)) return std::nullopt;
    return fs::path(token);
  }
  const char* path_env = std::getenv("PATH");
  std::string path = path_env ? path_env : "/usr/bin:/bin";
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    fs::path candidate = fs::path(dir) / token;
    if (is_executable(candidate)) return candidate;
  }
  return std::nullopt;
}

std::vector<std::string> expand_arguments(const BenchmarkSpec& bench, const WorkloadSpec& workload) {
  std::vector<std::string> args;
  bool spliced = false;
  for (std::size_t i = 1; i < bench.command.size(); ++i) {
    const std::string& tok = bench.command[i];
    if (tok == "{args}") {
      args.insert(args.end(), workload.args.begin(), workload.args.end());
      spliced = true;
      continue;
    }
    std::string out = tok;
    for (std::size_t pos; (pos = out.find("{workload}")) != std::string::npos;) {
      out.replace(pos, 10, workload.name);
    }
    args.push_back(std::move(out));
  }
  if (!spliced) args.insert(args.end(), workload.args.begin(), workload.args.end());
  return args;
}

void stage_run_dir(const fs::path& dir, const WorkloadSpec& workload) {
  std::error_code ec;
  fs::remove_all(dir, ec);
  if (ec) throw ExecutionError("staging: cannot clear " + dir.string() + ": " + ec.message());
  fs::create_directories(dir, ec);
  if (ec) throw ExecutionError("staging: cannot create " + dir.string() + ": " + ec.message());
  for (const auto& input : workload.input_files) {
    fs::copy_file(input, dir / input.filename(), fs::copy_options::overwrite_existing, ec);
    if (ec) throw ExecutionError("staging: cannot copy " + input.string() + ": " + ec.message());
  }
}

RunEvent run_one(std::size_t copy, const BenchmarkSpec& bench, const WorkloadSpec& workload,
                 const fs::path& dir, const RunContext& ctx, RunDiagnostics* diagnostics) {
  RunEvent ev;
  ev.copy = copy;
  ev.bench_id = bench.id;
  ev.workload = workload.name;
  ev.iteration = ctx.iteration;
  ev.output_dir = dir;
  ev.validation = ValidationStatus::skipped;

  auto fail_before_spawn = [&](const std::string& why) {
    ev.start_ns = ev.end_ns = since(ctx.origin);
    ev.exit_ok = false;
    if (diagnostics) diagnostics->detail = why;
    return ev;
  };

  auto exe = resolve_executable(bench.command.at(0), ctx.harness);
  std::string exe_path = exe ? exe->string() : bench.command.at(0);
  std::vector<std::string> argv_storage;
  argv_storage.push_back(exe_path);
  for (auto& a : expand_arguments(bench, workload)) argv_storage.push_back(std::move(a));
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  argv.push_back(nullptr);

  const std::string dir_str = dir.string();
  const std::string out_path = (dir / "stdout.txt").string();
  const std::string err_path = (dir / "stderr.txt").string();
  int out_fd = ::open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  int err_fd = ::open(err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  int pipe_fds[2] = {-1, -1};
  if (out_fd < 0 || err_fd < 0 || ::pipe2(pipe_fds, O_CLOEXEC) != 0) {
    std::string why = std::string("cannot prepare child I/O: ") + std::strerror(errno);
    for (int fd : {out_fd, err_fd, pipe_fds[0], pipe_fds[1]}) {
      if (fd >= 0) ::close(fd);
    }
    return fail_before_spawn(why);
  }

  cpu_set_t cpus;
  CPU_ZERO(&cpus);
  if (ctx.cpu) CPU_SET(*ctx.cpu, &cpus);
  const bool pin = ctx.cpu.has_value();

  ev.start_ns = since(ctx.origin);
  pid_t pid = ::fork();
  if (pid == 0) {
    // Child: async-signal-safe calls only.
    ::close(pipe_fds[0]);
    int err = 0;
    if (::chdir(dir_str.c_str()) != 0 || ::dup2(out_fd, STDOUT_FILENO) < 0 ||
        ::dup2(err_fd, STDERR_FILENO) < 0) {
      err = errno;
    } else {
      if (pin) ::sched_setaffinity(0, sizeof cpus, &cpus);
      ::execv(argv[0], argv.data());
      err = errno;
    }
    [[maybe_unused]] auto n = ::write(pipe_fds[1], &err, sizeof err);
    ::_exit(127);
  }
  ::close(pipe_fds[1]);
  ::close(out_fd);
  ::close(err_fd);
  if (pid < 0) {
    int err = errno;
    ::close(pipe_fds[0]);
    return fail_before_spawn(std::string("fork failed: ") + std::strerror(err));
  }

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  ev.end_ns = since(ctx.origin);

  int exec_errno = 0;
  ssize_t got = ::read(pipe_fds[0], &exec_errno, sizeof exec_errno);
  ::close(pipe_fds[0]);
  if (got == static_cast<ssize_t>(sizeof exec_errno)) {
    ev.exit_ok = false;
    if (diagnostics) diagnostics->detail = "cannot execute " + exe_path + ": " + std::strerror(exec_errno);
    return ev;
  }

  ev.exit_ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  if (ctx.after_run) ctx.after_run(ev, dir);
  if (!ev.exit_ok) {
    if (diagnostics) diagnostics->detail = exe_path + " " + describe_status(status);
    return ev;
  }
  ValidationReport report = compare_outputs(dir, workload.golden_outputs, bench.validation);
  ev.validation = report.passed() ? ValidationStatus::pass : ValidationStatus::fail;
  if (diagnostics) diagnostics->mismatches = std::move(report.mismatches);
  return ev;
}

RunLog execute(const Schedule& sched, const SuiteConfig& cfg, std::size_t iterations,
               const AffinityPolicy& affinity, const fs::path& out_root, const ExecOptions& options) {
  if (sched.roster_size != cfg.size()) {
    throw ConfigError("schedule expects " + std::to_string(sched.roster_size) + " benchmarks, suite has " +
                      std::to_string(cfg.size()));
  }
  if (iterations == 0) throw ConfigError("iterations must be at least 1");
  affinity.check(sched.copies);

  const fs::path harness = options.harness.empty() ? self_executable() : options.harness;
  for (const auto& b : cfg.roster) {
    if (!resolve_executable(b.command.at(0), harness)) {
      throw ExecutionError("benchmark '" + b.id + "': cannot resolve executable '" + b.command[0] + "'");
    }
  }
  std::error_code ec;
  fs::create_directories(out_root, ec);
  if (ec) throw ExecutionError("cannot create " + out_root.string() + ": " + ec.message());

  RunLog log;
  log.suite_name = cfg.suite_name;
  log.mode = sched.mode;
  log.copies = sched.copies;
  log.iterations = iterations;
  log.params = sched.mode == RunMode::rrr ? sched.params : RRRParams{};
  log.roster = cfg.ids();
  log.host = host_metadata();

  std::vector<std::optional<int>> cpu_of(sched.copies);
  if (affinity.kind == AffinityPolicy::Kind::pin) {
    const auto allowed = allowed_cpus();
    bool ok = true;
    for (const auto& [copy, core] : affinity.core_of_copy) {
      if (copy < sched.copies && !allowed.count(core)) {
        log.warnings.push_back("affinity: core " + std::to_string(core) + " for copy " +
                               std::to_string(copy) + " is not available on this host; running unpinned");
        ok = false;
      }
    }
    if (ok) {
      for (std::size_t c = 0; c < sched.copies; ++c) cpu_of[c] = affinity.core_of_copy.at(c);
      log.pinned = true;
    }
  }

  const auto origin = std::chrono::steady_clock::now();
  const std::size_t n = sched.roster_size;
  const std::size_t phases = iterations * n;
  const bool barriers = sched.mode == RunMode::rate;

  Channel<SlotReport> channel;
  PhaseGate gate;
  if (!barriers) gate.open(phases);

  auto worker = [&](std::size_t copy) {
    for (std::size_t p = 0; p < phases; ++p) {
      const std::size_t iteration = p / n + 1;
      const std::size_t seq = p % n;
      if (barriers) gate.wait(p);
      const BenchmarkSpec& bench = cfg.roster[sched.at(copy, seq).bench_index];
      SlotReport report;
      RunContext ctx{harness, origin, cpu_of[copy], iteration, options.after_run};
      for (const auto& w : bench.workloads) {
        const fs::path dir = run_dir(out_root, bench.id, copy, iteration, w.name);
        RunDiagnostics diag;
        RunEvent ev;
        try {
          stage_run_dir(dir, w);
          ev = run_one(copy, bench, w, dir, ctx, &diag);
        } catch (const std::exception& e) {
          ev = RunEvent{copy, bench.id, w.name, iteration, since(origin), since(origin), false,
                        ValidationStatus::skipped, dir};
          diag.detail = e.what();
          report.errors.push_back(e.what());
        }
        if (!ev.exit_ok || ev.validation == ValidationStatus::fail) {
          report.failures.push_back(
              {copy, bench.id, w.name, iteration, std::move(diag.detail), std::move(diag.mismatches)});
        }
        report.events.push_back(std::move(ev));
      }
      channel.send(std::move(report));
    }
  };

  {
    std::vector<std::jthread> workers;
    workers.reserve(sched.copies);
    for (std::size_t c = 0; c < sched.copies; ++c) workers.emplace_back(worker, c);

    for (std::size_t p = 0; p < phases; ++p) {
      const std::size_t expected = barriers ? sched.copies : (p == 0 ? sched.copies * phases : 0);
      for (std::size_t k = 0; k < expected; ++k) {
        SlotReport r = channel.receive();
        for (auto& e : r.events) log.events.push_back(std::move(e));
        for (auto& f : r.failures) log.failures.push_back(std::move(f));
        for (auto& e : r.errors) log.errors.push_back(std::move(e));
      }
      if (barriers) gate.open(p + 1);
    }
  }

  log.sort_events();
  std::sort(log.failures.begin(), log.failures.end(), [](const EventFailure& a, const EventFailure& b) {
    return std::tie(a.copy, a.iteration, a.bench_id, a.workload) <
           std::tie(b.copy, b.iteration, b.bench_id, b.workload);
  });
  return log;
}

}  // namespace ratebench
