#include "dnr/batch.hpp"

#include <cstdint>
#include <limits>

#include "dnr/loss.hpp"
#include "dnr/powerflow.hpp"

namespace dnr {

std::vector<double> batch_approx_loss(const Network& net, const std::vector<TreeConfig>& trees,
                                      bool parallel) {
  std::vector<double> out(trees.size());
  std::int64_t n = static_cast<std::int64_t>(trees.size());
#pragma omp parallel for schedule(dynamic, 256) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = total_loss_kw(net, orient(net, trees[i]));
  }
  return out;
}

std::vector<double> batch_exact_loss(const Network& net, const std::vector<TreeConfig>& trees,
                                     bool parallel) {
  std::vector<double> out(trees.size());
  std::int64_t n = static_cast<std::int64_t>(trees.size());
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    PowerFlowSolution sol = solve_radial(net, trees[i]);
    out[i] = sol.converged && !sol.collapsed ? sol.total_loss_kw()
                                             : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace dnr
