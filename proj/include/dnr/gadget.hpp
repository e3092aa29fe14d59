#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dnr/enumerate.hpp"
#include "dnr/network.hpp"

namespace dnr {

/// A 3-Partition instance: k = 3m positive integers summing to m*B with
/// every value strictly between B/4 and B/2.
struct PartitionInstance {
  int m = 0;
  std::vector<long long> a;

  long long sum() const;
  long long bound() const;  // B = sum / m
  int k() const { return static_cast<int>(a.size()); }
};

/// Empty iff the instance satisfies all 3-Partition invariants.
std::vector<std::string> validate_instance(const PartitionInstance& inst);

/// The reduction network: root, m hub nodes on the root, a complete
/// bipartite layer to k item nodes, and a_i - 1 leaves starred on item i.
/// Unit demands, unit resistances.
struct GadgetNetwork {
  Network net;
  std::vector<int> u_ids;                 // hub bus ids, size m
  std::vector<int> v_ids;                 // item bus ids, size k
  std::vector<std::vector<int>> uv_line;  // uv_line[j][i] = line id (u_j, v_i)
};

/// Builds the gadget; throws std::invalid_argument naming the first failed
/// instance invariant.
GadgetNetwork build_gadget(const PartitionInstance& inst);

/// Closed-form optimal gadget cost m(B+1)^2 + sum a_i^2 + (mB - 3m),
/// achieved exactly by balanced triplet assignments.
long long c_min(const PartitionInstance& inst);

struct PartitionDecision {
  enum class Answer { kYes, kNo, kUnknown };
  Answer answer = Answer::kUnknown;
  long long optimum_cost = 0;   // best cost found (certified for Yes/No)
  long long target_cost = 0;    // c_min
  std::vector<std::vector<int>> triplets;  // 1-based item indices, only for Yes
};

/// Decides a 3-Partition instance through the gadget. Uses exhaustive tree
/// enumeration when the gadget is small enough; otherwise falls back to
/// local search, which can certify Yes (cost == c_min) but never No.
PartitionDecision decide_partition(const PartitionInstance& inst,
                                   std::uint64_t tree_limit = kDefaultTreeLimit);

}  // namespace dnr
