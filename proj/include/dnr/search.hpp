#pragma once

#include <cstdint>
#include <vector>

#include "dnr/network.hpp"
#include "dnr/tree.hpp"

namespace dnr {

enum class PivotRule { kBestImprovement, kFirstImprovement };

struct SearchParams {
  double epsilon = 1e-6;  // relative improvement threshold, in [0, 1)
  PivotRule pivot = PivotRule::kBestImprovement;
  int max_iters = 0;           // <= 0 means 10 * |E| * |N|
  std::uint64_t seed = 0;      // used only when the caller draws a random start
  bool check_invariants = false;  // cross-check every accepted swap
};

struct SearchStep {
  int iteration = 0;
  int e_in = 0;
  int e_out = 0;
  double loss_before_kw = 0.0;
  double loss_after_kw = 0.0;
};

struct SearchTrace {
  std::vector<SearchStep> steps;
  TreeConfig final;
  double final_loss_kw = 0.0;
  bool converged = false;  // false iff max_iters exhausted
};

/// Branch-exchange local search: repeatedly close an open line and open a
/// line on its fundamental cycle while the swap shaves more than an epsilon
/// fraction off the simplified loss. Deterministic: candidates are scanned
/// in (e_in id, e_out id) order and best-improvement ties keep the
/// lexicographically smallest pair.
SearchTrace branch_exchange(const Network& net, const TreeConfig& init,
                            const SearchParams& params = {});

/// Predicted loss change (kW) of one swap, from path re-aggregation along
/// the fundamental cycle; O(tree depth). e_out must lie on the cycle of
/// e_in. Exposed for the full-recompute cross-check.
double swap_loss_delta_kw(const Network& net, const RootedOrientation& ori, int e_in_id,
                          int e_out_id);

struct BoundCheck {
  double upper_bound_m = 0.0;  // f over the whole edge set, kW
  double lhs = 0.0;            // M - f(result)
  double rhs = 0.0;            // (1/6 - epsilon) * (M - f(optimum))
  bool holds = false;
};

/// Worst-case guarantee of the local search, checked a posteriori against
/// a known optimum.
BoundCheck check_bound(const Network& net, const TreeConfig& result, const TreeConfig& optimum,
                       double epsilon);

}  // namespace dnr
