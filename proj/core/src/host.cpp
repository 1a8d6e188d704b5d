#include "ratebench/host.hpp"

#include <fstream>
#include <thread>

#include <sched.h>
#include <sys/utsname.h>
#include <unistd.h>

namespace ratebench {

std::map<std::string, std::string> host_metadata() {
  std::map<std::string, std::string> meta;
  utsname u{};
  if (uname(&u) == 0) {
    meta["os"] = u.sysname;
    meta["kernel"] = u.release;
    meta["machine"] = u.machine;
  }
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      auto colon = line.find(':');
      if (colon != std::string::npos) {
        auto value = line.substr(colon + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        meta["cpu"] = value;
      }
      break;
    }
  }
  meta["logical_cpus"] = std::to_string(std::thread::hardware_concurrency());
  return meta;
}

std::set<int> allowed_cpus() {
  std::set<int> out;
  cpu_set_t set;
  CPU_ZERO(&set);
  if (sched_getaffinity(0, sizeof set, &set) == 0) {
    for (int i = 0; i < CPU_SETSIZE; ++i) {
      if (CPU_ISSET(i, &set)) out.insert(i);
    }
  }
  return out;
}

std::filesystem::path self_executable() {
  std::error_code ec;
  auto p = std::filesystem::read_symlink("/proc/self/exe", ec);
  return ec ? std::filesystem::path() : p;
}

}  // namespace ratebench
