#include "ratebench/validator.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ratebench {
namespace fs = std::filesystem;

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// [+-]? (digits [. digits?] | . digits) ([eE] [+-]? digits)?
bool looks_like_real(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t int_digits = 0, frac_digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++int_digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i, ++frac_digits;
  }
  if (int_digits + frac_digits == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && is_digit(s[i])) ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == s.size();
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> filtered_lines(std::string_view text, const ToleranceRule& rule) {
  std::vector<std::string_view> out;
  for (auto line : split_lines(text)) {
    bool skip = false;
    for (const auto& prefix : rule.skip_line_prefixes) {
      if (!prefix.empty() && line.starts_with(prefix)) {
        skip = true;
        break;
      }
    }
    if (!skip) out.push_back(line);
  }
  return out;
}

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buf.str();
}

}  // namespace

std::vector<Token> tokenize_numeric_line(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    std::string_view tok = line.substr(i, j - i);
    Token t{std::string(tok), false, 0.0};
    if (looks_like_real(tok)) {
      std::string_view digits = tok.front() == '+' ? tok.substr(1) : tok;
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec == std::errc() && ptr == digits.data() + digits.size() && std::isfinite(v)) {
        t.is_number = true;
        t.value = v;
      }
    }
    out.push_back(std::move(t));
    i = j;
  }
  return out;
}

bool within_tolerance(double actual, double golden, double abstol, double reltol) {
  const double diff = std::fabs(actual - golden);
  return diff <= abstol || diff <= reltol * std::fabs(golden);
}

void compare_text(std::string_view actual, std::string_view golden, const ToleranceRule& rule,
                  const std::string& file, std::vector<Mismatch>& out) {
  auto a_lines = filtered_lines(actual, rule);
  auto g_lines = filtered_lines(golden, rule);
  if (a_lines.size() != g_lines.size()) {
    out.push_back({file, 0, 0, std::to_string(g_lines.size()) + " lines",
                   std::to_string(a_lines.size()) + " lines", "line-count"});
    return;
  }
  for (std::size_t n = 0; n < g_lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    if (rule.mode == ToleranceMode::exact) {
      if (a_lines[n] != g_lines[n]) {
        out.push_back({file, line_no, 0, std::string(g_lines[n]), std::string(a_lines[n]), "text"});
      }
      continue;
    }
    auto at = tokenize_numeric_line(a_lines[n]);
    auto gt = tokenize_numeric_line(g_lines[n]);
    if (at.size() != gt.size()) {
      out.push_back({file, line_no, 0, std::string(g_lines[n]), std::string(a_lines[n]), "token-count"});
      continue;
    }
    for (std::size_t k = 0; k < gt.size(); ++k) {
      if (gt[k].is_number && at[k].is_number) {
        if (!within_tolerance(at[k].value, gt[k].value, rule.abstol, rule.reltol)) {
          out.push_back({file, line_no, k, gt[k].text, at[k].text, "value"});
        }
      } else if (gt[k].text != at[k].text) {
        out.push_back({file, line_no, k, gt[k].text, at[k].text, "text"});
      }
    }
  }
}

ValidationReport compare_outputs(const fs::path& actual_dir, std::span<const GoldenOutput> golden,
                                 const ToleranceRule& rule, std::size_t max_per_file) {
  ValidationReport report;
  for (const auto& g : golden) {
    ++report.compared_files;
    const fs::path actual_path = actual_dir / g.filename;
    if (!fs::exists(actual_path)) {
      report.mismatches.push_back({g.filename, 0, 0, g.golden.string(), "", "missing"});
      continue;
    }
    auto expected = read_file(g.golden);
    auto actual = read_file(actual_path);
    if (!expected || !actual) {
      report.mismatches.push_back({g.filename, 0, 0, expected ? "" : g.golden.string(),
                                   actual ? "" : actual_path.string(), "io"});
      continue;
    }
    std::vector<Mismatch> found;
    compare_text(*actual, *expected, rule, g.filename, found);
    if (found.size() > max_per_file) found.resize(max_per_file);
    report.mismatches.insert(report.mismatches.end(), found.begin(), found.end());
  }
  return report;
}

}  // namespace ratebench
