#pragma once

#include <vector>

#include "dnr/network.hpp"
#include "dnr/tree.hpp"

namespace dnr {

/// Batch evaluation kernels over many tree configurations. The parallel
/// variants fan out across OpenMP threads; result slot i always belongs to
/// tree i, so output is identical to the serial reference regardless of
/// thread count. Diverged power flows are reported as NaN.
std::vector<double> batch_approx_loss(const Network& net, const std::vector<TreeConfig>& trees,
                                      bool parallel);
std::vector<double> batch_exact_loss(const Network& net, const std::vector<TreeConfig>& trees,
                                     bool parallel);

}  // namespace dnr
