#include "ratebench/bbv.hpp"

#include "ratebench/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace ratebench {

namespace {

bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

BBVector parse_interval(std::string_view line, std::size_t line_no) {
  // Drop the leading 'T'; what remains is a sequence of ":id:count" groups.
  std::string_view rest = line.substr(1);
  BBVector v;
  std::size_t i = 0;
  while (i < rest.size()) {
    while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t' || rest[i] == '\r')) ++i;
    if (i >= rest.size()) break;
    std::size_t j = i;
    while (j < rest.size() && rest[j] != ' ' && rest[j] != '\t' && rest[j] != '\r') ++j;
    std::string_view group = rest.substr(i, j - i);
    i = j;

    if (group.size() < 4 || group[0] != ':') {
      throw FormatError("malformed group '" + std::string(group) + "' (expected :<block-id>:<count>)", line_no);
    }
    const std::size_t sep = group.find(':', 1);
    if (sep == std::string_view::npos) {
      throw FormatError("malformed group '" + std::string(group) + "' (expected :<block-id>:<count>)", line_no);
    }
    std::uint64_t id = 0, count = 0;
    if (!parse_u64(group.substr(1, sep - 1), id)) {
      throw FormatError("bad block id in '" + std::string(group) + "'", line_no);
    }
    if (!parse_u64(group.substr(sep + 1), count)) {
      throw FormatError("bad count in '" + std::string(group) + "' (must be a non-negative integer)", line_no);
    }
    v.entries.emplace_back(id, static_cast<double>(count));
  }
  if (v.entries.empty()) throw FormatError("interval has no blocks", line_no);
  std::sort(v.entries.begin(), v.entries.end());
  for (std::size_t k = 1; k < v.entries.size(); ++k) {
    if (v.entries[k].first == v.entries[k - 1].first) {
      throw FormatError("block id " + std::to_string(v.entries[k].first) + " repeated", line_no);
    }
  }
  if (v.total() <= 0) throw FormatError("interval has no nonzero counts", line_no);
  return v;
}

}  // namespace

double BBVector::total() const {
  double s = 0;
  for (const auto& [id, w] : entries) s += w;
  return s;
}

double DistanceMatrix::max() const {
  double m = 0;
  for (double v : values) m = std::max(m, v);
  return m;
}

BBVTrace parse_bb(std::string_view text, std::uint64_t interval_instructions, std::string source) {
  if (interval_instructions == 0) throw FormatError("interval instructions must be positive");
  BBVTrace trace;
  trace.interval_instructions = interval_instructions;
  trace.source = std::move(source);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    line.remove_prefix(first);
    if (line[0] != 'T') throw FormatError("interval line must start with 'T'", line_no);
    trace.intervals.push_back(parse_interval(line, line_no));
  }
  if (trace.intervals.empty()) throw FormatError("trace has no intervals");
  return trace;
}

BBVTrace load_bb(const std::filesystem::path& path, std::uint64_t interval_instructions) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bb(buf.str(), interval_instructions, path.filename().string());
}

BBVTrace normalize_l1(const BBVTrace& trace) {
  BBVTrace out = trace;
  out.normalized = true;
  for (std::size_t t = 0; t < out.intervals.size(); ++t) {
    auto& v = out.intervals[t];
    const double total = v.total();
    if (!(total > 0)) throw std::invalid_argument("interval " + std::to_string(t) + " has zero total count");
    for (auto& [id, w] : v.entries) w /= total;
  }
  return out;
}

double bbv_distance(const BBVector& a, const BBVector& b) {
  double sum = 0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() || ib != b.entries.end()) {
    double d;
    if (ib == b.entries.end() || (ia != a.entries.end() && ia->first < ib->first)) {
      d = ia->second;
      ++ia;
    } else if (ia == a.entries.end() || ib->first < ia->first) {
      d = ib->second;
      ++ib;
    } else {
      d = ia->second - ib->second;
      ++ia;
      ++ib;
    }
    sum += d * d;
  }
  return std::sqrt(sum);
}

DistanceMatrix distance_matrix(const BBVTrace& trace, unsigned threads) {
  const std::size_t n = trace.size();
  DistanceMatrix d;
  d.size = n;
  d.values.assign(n * n, 0.0);
  d.scale = MatrixScale::raw;

  // Each row i fills the upper triangle (i, j>i); rows are disjoint.
  auto fill_rows = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      for (std::size_t j = i + 1; j < n; ++j) d(i, j) = bbv_distance(trace.intervals[i], trace.intervals[j]);
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1 || n < 64) {
    fill_rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(fill_rows, t, threads);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) d(i, j) = d(j, i);
  }
  return d;
}

DistanceMatrix to_unit_max(const DistanceMatrix& d) {
  DistanceMatrix out = d;
  out.scale = MatrixScale::unit_max;
  const double m = d.max();
  if (m > 0) {
    for (double& v : out.values) v /= m;
  }
  return out;
}

std::string matrix_csv(const DistanceMatrix& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size; ++i) {
    for (std::size_t j = 0; j < d.size; ++j) {
      if (j) out += ',';
      out += fmt::format("{:.17g}", d(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace ratebench
