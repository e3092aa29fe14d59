#pragma once

#include <cstdint>
#include <vector>

#include "dnr/network.hpp"

namespace dnr {

/// A candidate radial configuration: the set of closed (in-service) line
/// ids. Validity is asserted separately by is_spanning_tree.
struct TreeConfig {
  std::vector<int> closed;  // sorted line ids

  static TreeConfig from_closed(std::vector<int> line_ids);
  /// Complement helper: closed = all lines except `open_ids`.
  static TreeConfig from_open(const Network& net, const std::vector<int>& open_ids);

  std::vector<int> open_lines(const Network& net) const;
  bool contains(int line_id) const;
  bool operator==(const TreeConfig& other) const { return closed == other.closed; }
};

/// True iff the closed lines form a spanning tree: |N|-1 lines, acyclic,
/// touching every bus. Throws std::out_of_range on unknown line ids.
bool is_spanning_tree(const Network& net, const TreeConfig& cfg);

/// Rooted view of a spanning tree. Everything is indexed by dense bus/line
/// index. For each tree line, the "child" endpoint is the one away from the
/// root, and (agg_p, agg_q, succ_count) describe the successor set c_e.
struct RootedOrientation {
  std::vector<int> parent_bus;    // by bus idx; -1 at root
  std::vector<int> parent_line;   // by bus idx; -1 at root
  std::vector<int> depth;         // by bus idx
  std::vector<int> order;         // bus idx in root-first BFS order
  std::vector<char> in_tree;      // by line idx
  std::vector<int> child_bus;     // by line idx; -1 for open lines
  std::vector<int> succ_count;    // by line idx; |c_e|
  std::vector<double> agg_p;      // by line idx; per-unit sum over c_e
  std::vector<double> agg_q;      // by line idx
};

/// Builds the rooted orientation of a valid spanning tree; rejects
/// non-trees with std::invalid_argument.
RootedOrientation orient(const Network& net, const TreeConfig& cfg);

/// Successor bus ids of a tree line, sorted ascending.
std::vector<int> successor_ids(const Network& net, const RootedOrientation& ori, int line_id);

/// The unique cycle of cfg + e_in, as line ids (tree lines plus e_in).
std::vector<int> fundamental_cycle(const Network& net, const TreeConfig& cfg, int e_in);

/// Applies one branch exchange. Membership checked; tree validity is not
/// (the caller re-checks, mirroring the algorithm's guard).
TreeConfig swap_lines(const TreeConfig& cfg, int e_out, int e_in);

/// Random-weight MST; deterministic per seed.
TreeConfig random_spanning_tree(const Network& net, std::uint64_t seed);

}  // namespace dnr
