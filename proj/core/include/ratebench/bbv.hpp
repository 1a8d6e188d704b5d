#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ratebench {

inline constexpr std::uint64_t kDefaultIntervalInstructions = 10'000'000;

// Sparse per-interval basic-block frequencies, sorted by block id. Raw
// traces hold integer counts; normalized traces hold proportions.
struct BBVector {
  std::vector<std::pair<std::uint64_t, double>> entries;

  double total() const;
  bool operator==(const BBVector&) const = default;
};

struct BBVTrace {
  std::vector<BBVector> intervals;
  std::uint64_t interval_instructions = kDefaultIntervalInstructions;
  std::string source;
  bool normalized = false;

  std::size_t size() const noexcept { return intervals.size(); }
};

// SimPoint frequency-vector text: one interval per line, "T" followed by
// whitespace-separated ":<block-id>:<count>" groups ("T:45:1024 :189:99").
// Blank lines and lines starting with '#' are ignored. Throws FormatError
// with the line number on malformed input, and for a file with no intervals.
BBVTrace parse_bb(std::string_view text, std::uint64_t interval_instructions = kDefaultIntervalInstructions,
                  std::string source = {});
BBVTrace load_bb(const std::filesystem::path& path,
                 std::uint64_t interval_instructions = kDefaultIntervalInstructions);

// Scales every interval to sum to one. Throws std::invalid_argument for an
// interval whose total is zero.
BBVTrace normalize_l1(const BBVTrace& trace);

// Euclidean distance over the union of block ids.
double bbv_distance(const BBVector& a, const BBVector& b);

enum class MatrixScale { raw, unit_max };

struct DistanceMatrix {
  std::size_t size = 0;  // T
  std::vector<double> values;  // row-major T*T
  MatrixScale scale = MatrixScale::raw;

  double operator()(std::size_t i, std::size_t j) const { return values[i * size + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * size + j]; }
  double max() const;
};

// D[i][j] = distance between intervals i and j. Symmetric with an exact zero
// diagonal; rows are filled in parallel when `threads` > 1.
DistanceMatrix distance_matrix(const BBVTrace& trace, unsigned threads = 1);

// Divides by the largest entry; an all-zero matrix is returned unchanged.
DistanceMatrix to_unit_max(const DistanceMatrix& d);

// Rows of comma-separated values with 17 significant digits.
std::string matrix_csv(const DistanceMatrix& d);

}  // namespace ratebench
