#include "dnr/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dnr/loss.hpp"

namespace dnr {

namespace {

struct PathEdge {
  int line_idx;
  int child_bus;  // deeper endpoint in the current tree
};

// Tree path between the endpoints of e_in, split into the two ascents that
// meet at the lowest common ancestor.
struct CyclePath {
  std::vector<PathEdge> a_side;  // from `from` endpoint up to the LCA
  std::vector<PathEdge> b_side;  // from `to` endpoint up to the LCA
};

CyclePath cycle_path(const Network& net, const RootedOrientation& ori, int e_in_idx) {
  const Line& l = net.lines()[e_in_idx];
  int a = net.bus_index(l.from);
  int b = net.bus_index(l.to);
  CyclePath path;
  while (a != b) {
    if (ori.depth[a] >= ori.depth[b]) {
      path.a_side.push_back({ori.parent_line[a], a});
      a = ori.parent_bus[a];
    } else {
      path.b_side.push_back({ori.parent_line[b], b});
      b = ori.parent_bus[b];
    }
  }
  return path;
}

inline double sq_gain(double p, double q, double dp, double dq) {
  // (p+dp)^2 + (q+dq)^2 - p^2 - q^2
  return dp * (2.0 * p + dp) + dq * (2.0 * q + dq);
}

// Per-unit loss delta for removing e_out (child endpoint c) and re-attaching
// its subtree through e_in at attach_in (the e_in endpoint inside the
// subtree) / attach_out (the endpoint that stays with the root component).
double delta_pu(const Network& net, const RootedOrientation& ori, int e_in_idx,
                const std::vector<PathEdge>& below, std::size_t cut_pos, int attach_out) {
  int e_out = below[cut_pos].line_idx;
  double wp = ori.agg_p[e_out];
  double wq = ori.agg_q[e_out];
  double delta = 0.0;

  // Removed line and the new line, which inherits the whole subtree.
  delta -= net.r_pu(e_out) * (wp * wp + wq * wq);
  delta += net.r_pu(e_in_idx) * (wp * wp + wq * wq);

  // Lines between the attach point and the cut reverse direction inside the
  // subtree: their successor block becomes the complement within it.
  for (std::size_t i = 0; i < cut_pos; ++i) {
    int e = below[i].line_idx;
    double ap = ori.agg_p[e], aq = ori.agg_q[e];
    double np = wp - ap, nq = wq - aq;
    delta += net.r_pu(e) * (np * np + nq * nq - ap * ap - aq * aq);
  }

  // Root paths: the old parent side sheds the subtree demand, the new
  // attach side picks it up; contributions above their junction cancel.
  int u = ori.parent_bus[below[cut_pos].child_bus];
  int v = attach_out;
  while (u != v) {
    if (ori.depth[u] >= ori.depth[v]) {
      int e = ori.parent_line[u];
      delta += net.r_pu(e) * sq_gain(ori.agg_p[e], ori.agg_q[e], -wp, -wq);
      u = ori.parent_bus[u];
    } else {
      int e = ori.parent_line[v];
      delta += net.r_pu(e) * sq_gain(ori.agg_p[e], ori.agg_q[e], wp, wq);
      v = ori.parent_bus[v];
    }
  }
  return delta;
}

}  // namespace

double swap_loss_delta_kw(const Network& net, const RootedOrientation& ori, int e_in_id,
                          int e_out_id) {
  int e_in = net.line_index(e_in_id);
  int e_out = net.line_index(e_out_id);
  if (ori.in_tree[e_in]) throw std::invalid_argument("swap delta: e_in is already in the tree");
  CyclePath path = cycle_path(net, ori, e_in);

  const Line& l = net.lines()[e_in];
  for (std::size_t i = 0; i < path.a_side.size(); ++i)
    if (path.a_side[i].line_idx == e_out)
      return delta_pu(net, ori, e_in, path.a_side, i, net.bus_index(l.to)) * net.s_base_kw();
  for (std::size_t i = 0; i < path.b_side.size(); ++i)
    if (path.b_side[i].line_idx == e_out)
      return delta_pu(net, ori, e_in, path.b_side, i, net.bus_index(l.from)) * net.s_base_kw();
  throw std::invalid_argument("swap delta: e_out is not on the fundamental cycle of e_in");
}

SearchTrace branch_exchange(const Network& net, const TreeConfig& init,
                            const SearchParams& params) {
  if (params.epsilon < 0.0 || params.epsilon >= 1.0)
    throw std::invalid_argument("branch_exchange: epsilon must lie in [0, 1)");
  if (!is_spanning_tree(net, init))
    throw std::invalid_argument("branch_exchange: initial configuration is not a spanning tree");

  int max_iters = params.max_iters > 0
                      ? params.max_iters
                      : 10 * net.line_count() * net.bus_count();

  SearchTrace trace;
  trace.final = init;
  RootedOrientation ori = orient(net, trace.final);
  double current = total_loss_kw(net, ori);

  // Open line ids in ascending order; kept in step with the config.
  std::vector<int> open = trace.final.open_lines(net);

  for (int iter = 1; iter <= max_iters; ++iter) {
    int best_in = -1, best_out = -1;
    double best_delta = 0.0;
    bool found = false;

    for (int e_in_id : open) {
      int e_in = net.line_index(e_in_id);
      CyclePath path = cycle_path(net, ori, e_in);
      const Line& l = net.lines()[e_in];

      // Candidate exits in ascending line id for the deterministic
      // tie-break / first-improvement order.
      std::vector<std::pair<int, double>> candidates;  // (e_out id, delta kW)
      for (std::size_t i = 0; i < path.a_side.size(); ++i)
        candidates.emplace_back(
            net.line_id(path.a_side[i].line_idx),
            delta_pu(net, ori, e_in, path.a_side, i, net.bus_index(l.to)) * net.s_base_kw());
      for (std::size_t i = 0; i < path.b_side.size(); ++i)
        candidates.emplace_back(
            net.line_id(path.b_side[i].line_idx),
            delta_pu(net, ori, e_in, path.b_side, i, net.bus_index(l.from)) * net.s_base_kw());
      std::sort(candidates.begin(), candidates.end());

      for (const auto& [e_out_id, delta] : candidates) {
        if (!(current + delta < (1.0 - params.epsilon) * current)) continue;
        if (!found || delta < best_delta) {
          found = true;
          best_delta = delta;
          best_in = e_in_id;
          best_out = e_out_id;
        }
        if (params.pivot == PivotRule::kFirstImprovement) break;
      }
      if (found && params.pivot == PivotRule::kFirstImprovement) break;
    }

    if (!found) {
      trace.converged = true;
      break;
    }

    TreeConfig next = swap_lines(trace.final, best_out, best_in);
    RootedOrientation next_ori = orient(net, next);  // also certifies the tree
    double next_loss = total_loss_kw(net, next_ori);

    if (params.check_invariants) {
      double predicted = current + best_delta;
      double scale = std::max(1.0, std::abs(next_loss));
      if (std::abs(predicted - next_loss) > 1e-7 * scale)
        throw std::logic_error("branch_exchange: incremental delta disagrees with recompute");
      if (!is_spanning_tree(net, next))
        throw std::logic_error("branch_exchange: accepted swap broke the tree");
    }

    trace.steps.push_back({iter, best_in, best_out, current, next_loss});
    trace.final = std::move(next);
    ori = std::move(next_ori);
    current = next_loss;
    open.erase(std::find(open.begin(), open.end(), best_in));
    open.insert(std::lower_bound(open.begin(), open.end(), best_out), best_out);
  }

  trace.final_loss_kw = current;
  return trace;
}

BoundCheck check_bound(const Network& net, const TreeConfig& result, const TreeConfig& optimum,
                       double epsilon) {
  if (!is_spanning_tree(net, result) || !is_spanning_tree(net, optimum))
    throw std::invalid_argument("check_bound: both configurations must be spanning trees");
  BoundCheck bc;
  bc.upper_bound_m = f_super(net, all_line_ids(net));
  bc.lhs = bc.upper_bound_m - total_loss(net, result).total_kw;
  bc.rhs = (1.0 / 6.0 - epsilon) * (bc.upper_bound_m - total_loss(net, optimum).total_kw);
  bc.holds = bc.lhs >= bc.rhs - 1e-9 * std::max(1.0, std::abs(bc.rhs));
  return bc;
}

}  // namespace dnr
