#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dnr/network.hpp"
#include "dnr/tree.hpp"

namespace dnr {

struct LossBreakdown {
  std::vector<std::pair<int, double>> per_line;  // (line id, kW), sorted by id
  double total_kw = 0.0;
};

/// Simplified per-line loss under the flat-voltage model:
/// R_e_pu * (P_e_pu^2 + Q_e_pu^2), scaled to kW.
double line_loss_kw(const Network& net, const RootedOrientation& ori, int line_id);

/// Objective of the reconfiguration search: sum of simplified line losses
/// over the tree.
LossBreakdown total_loss(const Network& net, const TreeConfig& cfg);

/// Fast path used by search and enumeration: total only, from an existing
/// orientation, in kW.
double total_loss_kw(const Network& net, const RootedOrientation& ori);

/// Unit-demand objective: sum over tree lines of |successors|^2, exact
/// integer arithmetic.
long long unit_demand_cost(const Network& net, const TreeConfig& cfg);

/// Simple-path counts z for an arbitrary edge subset: count(i->j, k) is the
/// number of simple paths in the subgraph that start with the step i->j and
/// end at k (k = j counts the length-1 path).
class PathCounts {
 public:
  PathCounts(int line_count, int bus_count);

  /// Directed lookup by ids; `first_hop` is the endpoint stepped to.
  long long get(const Network& net, int line_id, int first_hop_bus_id, int target_bus_id) const;

  // Index-based access used internally: dir 0 = from->to, dir 1 = to->from.
  long long& at(int line_idx, int dir, int bus_idx) {
    return counts_[(line_idx * 2 + dir) * bus_count_ + bus_idx];
  }
  long long at(int line_idx, int dir, int bus_idx) const {
    return counts_[(line_idx * 2 + dir) * bus_count_ + bus_idx];
  }

 private:
  int bus_count_;
  std::vector<long long> counts_;
};

PathCounts path_counts(const Network& net, const std::vector<int>& line_ids);

/// Supermodular extension of the loss objective to arbitrary edge subsets:
/// both directed orientations of every line contribute, weighted by the
/// number of simple paths back to the root. Coincides with
/// total_loss(cfg).total_kw whenever the subset is a spanning tree.
/// Exponential in the worst case; intended for small instances and for
/// bound constants, not for the search loop.
double f_super(const Network& net, const std::vector<int>& line_ids);

/// All line ids of the network (ground set), sorted.
std::vector<int> all_line_ids(const Network& net);

}  // namespace dnr
