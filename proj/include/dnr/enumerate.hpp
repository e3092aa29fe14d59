#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dnr/network.hpp"
#include "dnr/tree.hpp"

namespace dnr {

inline constexpr std::uint64_t kDefaultTreeLimit = 5'000'000;

class EnumerationLimitExceeded : public std::runtime_error {
 public:
  explicit EnumerationLimitExceeded(std::uint64_t limit)
      : std::runtime_error("spanning tree enumeration exceeded limit of " +
                           std::to_string(limit)) {}
};

/// Visits every spanning tree exactly once (contraction/deletion recursion,
/// deterministic order) and returns the count. Throws
/// EnumerationLimitExceeded rather than silently truncating.
std::uint64_t enumerate_trees(const Network& net,
                              const std::function<void(const TreeConfig&)>& visit,
                              std::uint64_t limit = kDefaultTreeLimit);

std::vector<TreeConfig> all_spanning_trees(const Network& net,
                                           std::uint64_t limit = kDefaultTreeLimit);

/// Independent count via the matrix-tree determinant, exact big-integer
/// (fraction-free) elimination.
boost::multiprecision::cpp_int count_trees_kirchhoff(const Network& net);

struct TreeTableRow {
  std::vector<int> open_lines;  // sorted ids
  double approx_loss_kw = 0.0;
  std::optional<double> exact_loss_kw;
};

struct TreeTable {
  std::vector<TreeTableRow> rows;
  bool sorted = false;  // when true, nondecreasing in approx_loss_kw
};

struct GlobalOptimum {
  TreeConfig best;
  double best_loss_kw = 0.0;
  TreeTable table;  // populated only when requested
};

/// Brute-force minimum of the simplified loss over all spanning trees.
GlobalOptimum global_optimum(const Network& net, bool keep_table = false,
                             std::uint64_t limit = kDefaultTreeLimit);

struct RankRow {
  TreeConfig tree;
  int rank_exact = 0;   // 1-based
  int rank_approx = 0;  // 1-based
  double exact_loss_kw = 0.0;
  double approx_loss_kw = 0.0;
};

struct RankComparison {
  std::vector<RankRow> rows;      // top_k by exact loss
  double spearman = 0.0;          // over all trees
  bool top1_agrees = false;
  int max_rank_displacement = 0;  // over the emitted rows
  std::uint64_t excluded = 0;     // trees dropped for power-flow divergence
};

/// Ranks every spanning tree under exact and approximate loss; emits the
/// top_k by exact loss (top_k <= 0 means all).
RankComparison rank_comparison(const Network& net, int top_k,
                               std::uint64_t limit = kDefaultTreeLimit);

/// Spearman rank correlation of two equally long value sequences, ties
/// broken by index order.
double spearman_rank_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace dnr
