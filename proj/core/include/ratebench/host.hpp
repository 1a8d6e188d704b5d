#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>

namespace ratebench {

// OS, kernel, CPU model and logical CPU count of the running host.
std::map<std::string, std::string> host_metadata();

// Logical CPUs this process may run on.
std::set<int> allowed_cpus();

// Absolute path of the running executable.
std::filesystem::path self_executable();

}  // namespace ratebench
