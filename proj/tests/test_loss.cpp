#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"

#include "dnr/enumerate.hpp"
#include "dnr/loss.hpp"
#include "dnr/network.hpp"
#include "dnr/tree.hpp"
#include "test_util.hpp"

using dnr::Network;
using dnr::TreeConfig;

namespace {

// Independent simple-path oracle: enumerate all simple paths by explicit
// backtracking over the chosen edge subset.
long long count_simple_paths(const Network& net, const std::vector<int>& line_ids, int target,
                             std::vector<char>& visited, int at) {
  if (at == target) return 1;  // a path ends the moment it reaches the target
  long long total = 0;
  for (const Network::Arc& a : net.adjacent(at)) {
    int id = net.line_id(a.line_idx);
    if (!std::binary_search(line_ids.begin(), line_ids.end(), id)) continue;
    if (visited[a.to_bus]) continue;
    visited[a.to_bus] = 1;
    total += count_simple_paths(net, line_ids, target, visited, a.to_bus);
    visited[a.to_bus] = 0;
  }
  return total;
}

long long oracle_path_count(const Network& net, const std::vector<int>& line_ids, int line_id,
                            int first_hop_id, int target_id) {
  const dnr::Line& l = net.lines()[net.line_index(line_id)];
  int from_id = l.from == first_hop_id ? l.to : l.from;
  int from = net.bus_index(from_id);
  int hop = net.bus_index(first_hop_id);
  int target = net.bus_index(target_id);
  std::vector<char> visited(net.bus_count(), 0);
  visited[from] = 1;
  visited[hop] = 1;
  if (hop == target) return 1;
  long long total = 0;
  for (const Network::Arc& a : net.adjacent(hop)) {
    int id = net.line_id(a.line_idx);
    if (!std::binary_search(line_ids.begin(), line_ids.end(), id)) continue;
    if (visited[a.to_bus]) continue;
    visited[a.to_bus] = 1;
    total += count_simple_paths(net, line_ids, target, visited, a.to_bus);
    visited[a.to_bus] = 0;
  }
  return total;
}

}  // namespace

TEST_CASE("two-bus loss has a closed form") {
  // 0.01 ohm on a 1 kV / 1 MVA base carrying 100 kW: r_pu = 0.01,
  // p_pu = 0.1, loss = 0.01 * 0.1^2 * 1000 kW = 0.1 kW.
  Network net = load_data("two_bus.json");
  TreeConfig cfg = TreeConfig::from_closed({1});
  dnr::LossBreakdown lb = dnr::total_loss(net, cfg);
  CHECK(lb.total_kw == doctest::Approx(0.1));
  REQUIRE(lb.per_line.size() == 1);
  CHECK(lb.per_line[0].first == 1);
  CHECK(lb.per_line[0].second == doctest::Approx(0.1));
}

TEST_CASE("path and star unit-demand costs") {
  // Path with k buses below the root: line e carries (k+1-e) units, so the
  // unit cost is sum of squares. For k = 3: 9 + 4 + 1 = 14.
  Network path = Network::from_case(path_case(4));
  CHECK(dnr::unit_demand_cost(path, TreeConfig::from_closed({1, 2, 3})) == 14);
  // Star: every line carries exactly one unit.
  Network star = Network::from_case(star_case(6));
  CHECK(dnr::unit_demand_cost(star, TreeConfig::from_closed({1, 2, 3, 4, 5, 6})) == 6);
}

TEST_CASE("simplified loss scales with the squared aggregate") {
  Network net = Network::from_case(path_case(3, 2.0, 10.0));
  // Line 1 carries 20 kW -> 2 * 0.02^2 * 1000 = 0.8 kW; line 2 carries
  // 10 kW -> 2 * 0.01^2 * 1000 = 0.2 kW.
  dnr::LossBreakdown lb = dnr::total_loss(net, TreeConfig::from_closed({1, 2}));
  CHECK(lb.total_kw == doctest::Approx(1.0));
  CHECK(lb.per_line[0].second == doctest::Approx(0.8));
  CHECK(lb.per_line[1].second == doctest::Approx(0.2));
}

TEST_CASE("path counts match a backtracking oracle") {
  Network net = load_data("case33.json");
  std::vector<int> all = dnr::all_line_ids(net);
  dnr::PathCounts pc = dnr::path_counts(net, all);
  // Spot check every line against the oracle on a handful of targets.
  std::vector<int> targets{0, 5, 17, 21, 32};
  for (const dnr::Line& l : net.lines()) {
    for (int hop : {l.from, l.to}) {
      for (int t : targets) {
        CHECK(pc.get(net, l.id, hop, t) == oracle_path_count(net, all, l.id, hop, t));
      }
    }
  }
}

TEST_CASE("path counts on a tree are zero-one") {
  Network net = load_data("case33.json");
  TreeConfig cfg = TreeConfig::from_open(net, {33, 34, 35, 36, 37});
  dnr::PathCounts pc = dnr::path_counts(net, cfg.closed);
  for (int id : cfg.closed) {
    const dnr::Line& l = net.lines()[net.line_index(id)];
    for (int t = 0; t < net.bus_count(); ++t) {
      long long a = pc.at(net.line_index(id), 0, t);
      long long b = pc.at(net.line_index(id), 1, t);
      CHECK(a >= 0);
      CHECK(a <= 1);
      CHECK(b >= 0);
      CHECK(b <= 1);
      (void)l;
    }
  }
}

TEST_CASE("set extension is zero on the empty set") {
  Network net = load_data("triangle.json");
  CHECK(dnr::f_super(net, {}) == doctest::Approx(0.0));
}

TEST_CASE("set extension coincides with the tree objective on spanning trees") {
  Network net = load_data("case33.json");
  for (auto open : std::vector<std::vector<int>>{{33, 34, 35, 36, 37},
                                                 {7, 9, 14, 32, 37},
                                                 {7, 9, 14, 28, 32}}) {
    TreeConfig cfg = TreeConfig::from_open(net, open);
    double direct = dnr::total_loss(net, cfg).total_kw;
    double via_f = dnr::f_super(net, cfg.closed);
    CHECK(via_f == doctest::Approx(direct).epsilon(1e-9));
  }
  Network tri = load_data("triangle.json");
  for (auto closed : std::vector<std::vector<int>>{{1, 2}, {1, 3}, {2, 3}}) {
    TreeConfig cfg = TreeConfig::from_closed(closed);
    CHECK(dnr::f_super(tri, cfg.closed) ==
          doctest::Approx(dnr::total_loss(tri, cfg).total_kw).epsilon(1e-9));
  }
}

TEST_CASE("set extension is monotone and supermodular on small networks") {
  // Exhaustive check of f(A + e) - f(A) <= f(B + e) - f(B) for A subset B
  // on the triangle plus one extra bus.
  dnr::CaseData d = path_case(3, 1.0, 5.0);
  d.lines.push_back({3, 0, 2, 2.0, 0.0});
  Network net = Network::from_case(d);
  std::vector<int> ids = dnr::all_line_ids(net);
  int m = static_cast<int>(ids.size());

  auto subset_lines = [&](unsigned mask) {
    std::vector<int> out;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) out.push_back(ids[i]);
    return out;
  };
  std::vector<double> f(1u << m);
  for (unsigned mask = 0; mask < (1u << m); ++mask)
    f[mask] = dnr::f_super(net, subset_lines(mask));

  for (unsigned a = 0; a < (1u << m); ++a)
    for (unsigned b = a;; b = (b + 1) | a) {  // all supersets of a
      for (int i = 0; i < m; ++i) {
        unsigned bit = 1u << i;
        if ((b & bit) || (a & bit)) continue;
        double da = f[a | bit] - f[a];
        double db = f[b | bit] - f[b];
        CHECK(da >= 0.0);                 // monotone
        CHECK(db >= da - 1e-9);           // supermodular
      }
      if (b == (1u << m) - 1) break;
    }
}

TEST_CASE("removing a line never increases the set extension") {
  Network net = load_data("case33.json");
  std::vector<int> all = dnr::all_line_ids(net);
  double full = dnr::f_super(net, all);
  for (int drop : {7, 20, 33, 37}) {
    std::vector<int> rest;
    for (int id : all)
      if (id != drop) rest.push_back(id);
    CHECK(dnr::f_super(net, rest) <= full + 1e-9);
  }
}
