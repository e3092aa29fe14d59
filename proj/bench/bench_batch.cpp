// Compares the serial reference against the OpenMP batch kernels on the
// full spanning-tree set of the bundled 33-bus case.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dnr/batch.hpp"
#include "dnr/enumerate.hpp"
#include "dnr/network.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_s(const std::function<void()>& fn) {
  auto t0 = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::string case_path = argc > 1 ? argv[1] : std::string(DNR_DATA_DIR) + "/case33.json";
  dnr::Network net = dnr::load_case(case_path);
  std::vector<dnr::TreeConfig> trees = dnr::all_spanning_trees(net);
  std::printf("case %s: %zu spanning trees\n", net.name().c_str(), trees.size());

  std::vector<double> serial_a, parallel_a, serial_e, parallel_e;
  double t_sa = time_s([&] { serial_a = dnr::batch_approx_loss(net, trees, false); });
  double t_pa = time_s([&] { parallel_a = dnr::batch_approx_loss(net, trees, true); });
  double t_se = time_s([&] { serial_e = dnr::batch_exact_loss(net, trees, false); });
  double t_pe = time_s([&] { parallel_e = dnr::batch_exact_loss(net, trees, true); });

  auto identical = [](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::isnan(a[i]) != std::isnan(b[i])) return false;
      if (!std::isnan(a[i]) && a[i] != b[i]) return false;
    }
    return true;
  };

  std::printf("approx loss   serial %.3fs   parallel %.3fs   speedup %.2fx   identical %s\n",
              t_sa, t_pa, t_sa / t_pa, identical(serial_a, parallel_a) ? "yes" : "NO");
  std::printf("exact  loss   serial %.3fs   parallel %.3fs   speedup %.2fx   identical %s\n",
              t_se, t_pe, t_se / t_pe, identical(serial_e, parallel_e) ? "yes" : "NO");
  return identical(serial_a, parallel_a) && identical(serial_e, parallel_e) ? 0 : 1;
}
