#pragma once

#include <vector>

#include "dnr/network.hpp"
#include "dnr/tree.hpp"

namespace dnr {

struct BranchFlow {
  double p_kw = 0.0;      // sending-end active flow
  double q_kvar = 0.0;    // sending-end reactive flow
  double i_sq_pu = 0.0;   // squared branch current, p.u.^2
  double loss_kw = 0.0;
};

struct PowerFlowSolution {
  std::vector<double> v_pu;        // by dense bus index; root pinned at 1.0
  std::vector<BranchFlow> branch;  // by dense line index; open lines all-zero
  int iterations = 0;
  bool converged = false;
  bool collapsed = false;  // voltage fell below 0.5 p.u.

  double total_loss_kw() const;
};

/// Backward/forward sweep on the radial branch-flow model, flat start.
/// Backward pass aggregates sending-end flows including downstream losses;
/// forward pass propagates voltage magnitudes from the root at 1.0 p.u.
PowerFlowSolution solve_radial(const Network& net, const TreeConfig& cfg,
                               double tol = 1e-8, int max_sweeps = 100);

/// Converged total loss in kW; throws std::runtime_error on divergence or
/// voltage collapse.
double exact_loss_kw(const Network& net, const TreeConfig& cfg);

struct AssumptionReport {
  double max_v_deviation = 0.0;       // max |1 - v| over buses, p.u.
  double loss_to_demand_ratio = 0.0;  // total loss / total active demand
  double approx_vs_exact_gap = 0.0;   // |approx - exact| / exact
};

AssumptionReport assumption_report(const Network& net, const TreeConfig& cfg);

}  // namespace dnr
