#include "dnr/tree.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace dnr {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

TreeConfig TreeConfig::from_closed(std::vector<int> line_ids) {
  std::sort(line_ids.begin(), line_ids.end());
  return TreeConfig{std::move(line_ids)};
}

TreeConfig TreeConfig::from_open(const Network& net, const std::vector<int>& open_ids) {
  std::vector<char> open(net.line_count(), 0);
  for (int id : open_ids) open[net.line_index(id)] = 1;
  std::vector<int> closed;
  for (const Line& l : net.lines())
    if (!open[net.line_index(l.id)]) closed.push_back(l.id);
  return from_closed(std::move(closed));
}

std::vector<int> TreeConfig::open_lines(const Network& net) const {
  std::vector<int> out;
  for (const Line& l : net.lines())
    if (!contains(l.id)) out.push_back(l.id);
  std::sort(out.begin(), out.end());
  return out;
}

bool TreeConfig::contains(int line_id) const {
  return std::binary_search(closed.begin(), closed.end(), line_id);
}

bool is_spanning_tree(const Network& net, const TreeConfig& cfg) {
  int n = net.bus_count();
  if (static_cast<int>(cfg.closed.size()) != n - 1) return false;
  UnionFind uf(n);
  for (int id : cfg.closed) {
    const Line& l = net.lines()[net.line_index(id)];
    if (!uf.unite(net.bus_index(l.from), net.bus_index(l.to))) return false;
  }
  return true;  // n-1 acyclic edges on n vertices are connected
}

RootedOrientation orient(const Network& net, const TreeConfig& cfg) {
  if (!is_spanning_tree(net, cfg))
    throw std::invalid_argument("orient: configuration is not a spanning tree");

  int n = net.bus_count();
  int m = net.line_count();
  RootedOrientation ori;
  ori.parent_bus.assign(n, -1);
  ori.parent_line.assign(n, -1);
  ori.depth.assign(n, 0);
  ori.in_tree.assign(m, 0);
  ori.child_bus.assign(m, -1);
  ori.succ_count.assign(m, 0);
  ori.agg_p.assign(m, 0.0);
  ori.agg_q.assign(m, 0.0);
  for (int id : cfg.closed) ori.in_tree[net.line_index(id)] = 1;

  ori.order.reserve(n);
  ori.order.push_back(net.root_index());
  std::vector<char> seen(n, 0);
  seen[net.root_index()] = 1;
  for (std::size_t head = 0; head < ori.order.size(); ++head) {
    int u = ori.order[head];
    for (const Network::Arc& arc : net.adjacent(u)) {
      if (!ori.in_tree[arc.line_idx] || seen[arc.to_bus]) continue;
      seen[arc.to_bus] = 1;
      ori.parent_bus[arc.to_bus] = u;
      ori.parent_line[arc.to_bus] = arc.line_idx;
      ori.depth[arc.to_bus] = ori.depth[u] + 1;
      ori.child_bus[arc.line_idx] = arc.to_bus;
      ori.order.push_back(arc.to_bus);
    }
  }

  // Accumulate successor counts and per-unit demand sums leaf-to-root.
  std::vector<double> acc_p(n), acc_q(n);
  std::vector<int> acc_n(n, 1);
  for (int i = 0; i < n; ++i) {
    acc_p[i] = net.p_pu(i);
    acc_q[i] = net.q_pu(i);
  }
  for (auto it = ori.order.rbegin(); it != ori.order.rend(); ++it) {
    int u = *it;
    int e = ori.parent_line[u];
    if (e < 0) continue;
    ori.succ_count[e] = acc_n[u];
    ori.agg_p[e] = acc_p[u];
    ori.agg_q[e] = acc_q[u];
    int p = ori.parent_bus[u];
    acc_n[p] += acc_n[u];
    acc_p[p] += acc_p[u];
    acc_q[p] += acc_q[u];
  }
  return ori;
}

std::vector<int> successor_ids(const Network& net, const RootedOrientation& ori, int line_id) {
  int e = net.line_index(line_id);
  if (!ori.in_tree[e]) throw std::invalid_argument("successor_ids: line is not in the tree");
  // Successors of e are exactly the buses whose root path passes through e,
  // i.e. descendants of its child endpoint.
  int top = ori.child_bus[e];
  std::vector<char> below(net.bus_count(), 0);
  below[top] = 1;
  std::vector<int> out{net.bus_id(top)};
  for (int u : ori.order) {
    if (u == top || ori.parent_bus[u] < 0) continue;
    if (below[ori.parent_bus[u]]) {
      below[u] = 1;
      out.push_back(net.bus_id(u));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> fundamental_cycle(const Network& net, const TreeConfig& cfg, int e_in) {
  int e = net.line_index(e_in);
  if (cfg.contains(e_in))
    throw std::invalid_argument("fundamental_cycle: line " + std::to_string(e_in) +
                                " is already closed");
  RootedOrientation ori = orient(net, cfg);

  const Line& l = net.lines()[e];
  int a = net.bus_index(l.from);
  int b = net.bus_index(l.to);
  std::vector<int> cycle{e_in};
  while (a != b) {
    if (ori.depth[a] >= ori.depth[b]) {
      cycle.push_back(net.line_id(ori.parent_line[a]));
      a = ori.parent_bus[a];
    } else {
      cycle.push_back(net.line_id(ori.parent_line[b]));
      b = ori.parent_bus[b];
    }
  }
  std::sort(cycle.begin(), cycle.end());
  return cycle;
}

TreeConfig swap_lines(const TreeConfig& cfg, int e_out, int e_in) {
  if (!cfg.contains(e_out))
    throw std::invalid_argument("swap: line " + std::to_string(e_out) + " is not closed");
  if (cfg.contains(e_in))
    throw std::invalid_argument("swap: line " + std::to_string(e_in) + " is already closed");
  std::vector<int> closed;
  closed.reserve(cfg.closed.size());
  for (int id : cfg.closed)
    if (id != e_out) closed.push_back(id);
  closed.push_back(e_in);
  return TreeConfig::from_closed(std::move(closed));
}

TreeConfig random_spanning_tree(const Network& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<std::pair<double, int>> weighted;  // (weight, line idx)
  weighted.reserve(net.line_count());
  for (int e = 0; e < net.line_count(); ++e) weighted.emplace_back(uni(rng), e);
  std::sort(weighted.begin(), weighted.end());

  UnionFind uf(net.bus_count());
  std::vector<int> closed;
  for (const auto& [w, e] : weighted) {
    const Line& l = net.lines()[e];
    if (uf.unite(net.bus_index(l.from), net.bus_index(l.to))) closed.push_back(l.id);
  }
  return TreeConfig::from_closed(std::move(closed));
}

}  // namespace dnr
