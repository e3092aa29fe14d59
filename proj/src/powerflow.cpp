#include "dnr/powerflow.hpp"

#include <cmath>
#include <stdexcept>

#include "dnr/loss.hpp"

namespace dnr {

double PowerFlowSolution::total_loss_kw() const {
  double s = 0.0;
  for (const BranchFlow& b : branch) s += b.loss_kw;
  return s;
}

PowerFlowSolution solve_radial(const Network& net, const TreeConfig& cfg, double tol,
                               int max_sweeps) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_radial: tolerance must be positive");
  RootedOrientation ori = orient(net, cfg);

  int n = net.bus_count();
  int m = net.line_count();
  double s_kw = net.s_base_kw();

  PowerFlowSolution sol;
  sol.v_pu.assign(n, 1.0);
  sol.branch.assign(m, {});

  std::vector<double> v2(n, 1.0);            // squared voltage magnitudes
  std::vector<double> p_send(m, 0.0), q_send(m, 0.0), i_sq(m, 0.0);
  std::vector<double> acc_p(n), acc_q(n);

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    // Backward: aggregate sending-end flows, using last sweep's branch
    // currents for the loss terms.
    for (int i = 0; i < n; ++i) {
      acc_p[i] = net.p_pu(i);
      acc_q[i] = net.q_pu(i);
    }
    for (auto it = ori.order.rbegin(); it != ori.order.rend(); ++it) {
      int u = *it;
      int e = ori.parent_line[u];
      if (e < 0) continue;
      p_send[e] = acc_p[u] + net.r_pu(e) * i_sq[e];
      q_send[e] = acc_q[u] + net.x_pu(e) * i_sq[e];
      acc_p[ori.parent_bus[u]] += p_send[e];
      acc_q[ori.parent_bus[u]] += q_send[e];
    }

    // Forward: branch currents from the sending-end voltage, then the
    // receiving-end voltage drop.
    double max_dv = 0.0;
    bool collapsed = false;
    for (int u : ori.order) {
      int e = ori.parent_line[u];
      if (e < 0) continue;
      int parent = ori.parent_bus[u];
      double r = net.r_pu(e), x = net.x_pu(e);
      i_sq[e] = (p_send[e] * p_send[e] + q_send[e] * q_send[e]) / v2[parent];
      double v2_new = v2[parent] - 2.0 * (r * p_send[e] + x * q_send[e]) +
                      (r * r + x * x) * i_sq[e];
      // Divergence guard: in a load-only radial network voltages cannot
      // exceed the root, and NaN would otherwise masquerade as converged.
      if (!(v2_new >= 0.25) || v2_new > 4.0) collapsed = true;
      double v_new = std::sqrt(std::max(v2_new, 0.0));
      max_dv = std::max(max_dv, std::abs(v_new - sol.v_pu[u]));
      v2[u] = v2_new;
      sol.v_pu[u] = v_new;
    }

    sol.iterations = sweep;
    if (collapsed) {
      sol.collapsed = true;
      break;
    }
    if (max_dv < tol) {
      sol.converged = true;
      break;
    }
  }

  for (int e = 0; e < m; ++e) {
    if (!ori.in_tree[e]) continue;
    sol.branch[e].p_kw = p_send[e] * s_kw;
    sol.branch[e].q_kvar = q_send[e] * s_kw;
    sol.branch[e].i_sq_pu = i_sq[e];
    sol.branch[e].loss_kw = net.r_pu(e) * i_sq[e] * s_kw;
  }
  return sol;
}

double exact_loss_kw(const Network& net, const TreeConfig& cfg) {
  PowerFlowSolution sol = solve_radial(net, cfg);
  if (sol.collapsed) throw std::runtime_error("power flow infeasible: voltage collapse");
  if (!sol.converged) throw std::runtime_error("power flow did not converge");
  return sol.total_loss_kw();
}

AssumptionReport assumption_report(const Network& net, const TreeConfig& cfg) {
  PowerFlowSolution sol = solve_radial(net, cfg);
  if (sol.collapsed) throw std::runtime_error("power flow infeasible: voltage collapse");
  if (!sol.converged) throw std::runtime_error("power flow did not converge");

  AssumptionReport rep;
  for (double v : sol.v_pu) rep.max_v_deviation = std::max(rep.max_v_deviation, std::abs(1.0 - v));

  double exact = sol.total_loss_kw();
  double demand = net.total_p_kw();
  rep.loss_to_demand_ratio = demand > 0.0 ? exact / demand : 0.0;

  double approx = total_loss(net, cfg).total_kw;
  rep.approx_vs_exact_gap = exact > 0.0 ? std::abs(approx - exact) / exact : 0.0;
  return rep;
}

}  // namespace dnr
