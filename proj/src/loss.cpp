#include "dnr/loss.hpp"

#include <algorithm>
#include <stdexcept>

namespace dnr {

double line_loss_kw(const Network& net, const RootedOrientation& ori, int line_id) {
  int e = net.line_index(line_id);
  if (!ori.in_tree[e]) throw std::invalid_argument("line_loss: line is not in the tree");
  double p = ori.agg_p[e], q = ori.agg_q[e];
  return net.r_pu(e) * (p * p + q * q) * net.s_base_kw();
}

LossBreakdown total_loss(const Network& net, const TreeConfig& cfg) {
  RootedOrientation ori = orient(net, cfg);
  LossBreakdown out;
  out.per_line.reserve(cfg.closed.size());
  for (int id : cfg.closed) {
    double loss = line_loss_kw(net, ori, id);
    out.per_line.emplace_back(id, loss);
    out.total_kw += loss;
  }
  return out;
}

double total_loss_kw(const Network& net, const RootedOrientation& ori) {
  double total = 0.0;
  for (int e = 0; e < net.line_count(); ++e) {
    if (!ori.in_tree[e]) continue;
    double p = ori.agg_p[e], q = ori.agg_q[e];
    total += net.r_pu(e) * (p * p + q * q);
  }
  return total * net.s_base_kw();
}

long long unit_demand_cost(const Network& net, const TreeConfig& cfg) {
  RootedOrientation ori = orient(net, cfg);
  long long cost = 0;
  for (int e = 0; e < net.line_count(); ++e) {
    if (!ori.in_tree[e]) continue;
    long long c = ori.succ_count[e];
    cost += c * c;
  }
  return cost;
}

PathCounts::PathCounts(int line_count, int bus_count)
    : bus_count_(bus_count),
      counts_(static_cast<std::size_t>(line_count) * 2 * bus_count, 0) {}

long long PathCounts::get(const Network& net, int line_id, int first_hop_bus_id,
                          int target_bus_id) const {
  int e = net.line_index(line_id);
  const Line& l = net.lines()[e];
  int dir;
  if (first_hop_bus_id == l.to)
    dir = 0;
  else if (first_hop_bus_id == l.from)
    dir = 1;
  else
    throw std::invalid_argument("PathCounts::get: bus is not an endpoint of the line");
  return at(e, dir, net.bus_index(target_bus_id));
}

namespace {

// DFS over simple paths; every visited vertex terminates one path.
void count_paths_from(const Network& net, const std::vector<char>& active, int u,
                      std::uint64_t visited, long long* row) {
  row[u] += 1;
  for (const Network::Arc& arc : net.adjacent(u)) {
    if (!active[arc.line_idx]) continue;
    if (visited & (1ull << arc.to_bus)) continue;
    count_paths_from(net, active, arc.to_bus, visited | (1ull << arc.to_bus), row);
  }
}

}  // namespace

PathCounts path_counts(const Network& net, const std::vector<int>& line_ids) {
  if (net.bus_count() > 64)
    throw std::invalid_argument("path_counts: supported up to 64 buses");
  std::vector<char> active(net.line_count(), 0);
  for (int id : line_ids) active[net.line_index(id)] = 1;

  PathCounts pc(net.line_count(), net.bus_count());
  for (int e = 0; e < net.line_count(); ++e) {
    if (!active[e]) continue;
    const Line& l = net.lines()[e];
    int u = net.bus_index(l.from);
    int v = net.bus_index(l.to);
    std::uint64_t both = (1ull << u) | (1ull << v);
    count_paths_from(net, active, v, both, &pc.at(e, 0, 0));  // from -> to
    count_paths_from(net, active, u, both, &pc.at(e, 1, 0));  // to -> from
  }
  return pc;
}

double f_super(const Network& net, const std::vector<int>& line_ids) {
  PathCounts pc = path_counts(net, line_ids);
  int root = net.root_index();
  double total = 0.0;
  for (int id : line_ids) {
    int e = net.line_index(id);
    // Orientation (from -> to): paths forward use dir 0, the root factor is
    // the reverse direction. Then the mirror orientation.
    for (int dir = 0; dir < 2; ++dir) {
      long long z0 = pc.at(e, 1 - dir, root);
      if (z0 == 0) continue;
      double sp = 0.0, sq = 0.0;
      for (int k = 0; k < net.bus_count(); ++k) {
        long long z = pc.at(e, dir, k);
        if (z == 0) continue;
        sp += static_cast<double>(z) * net.p_pu(k);
        sq += static_cast<double>(z) * net.q_pu(k);
      }
      total += net.r_pu(e) * static_cast<double>(z0) * (sp * sp + sq * sq);
    }
  }
  return total * net.s_base_kw();
}

std::vector<int> all_line_ids(const Network& net) {
  std::vector<int> ids;
  ids.reserve(net.line_count());
  for (const Line& l : net.lines()) ids.push_back(l.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace dnr
