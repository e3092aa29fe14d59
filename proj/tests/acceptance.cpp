// Acceptance gate: one line per criterion, [PASS]/[FAIL], exit code = number
// of failures. Tolerances are pinned here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dnr/batch.hpp"
#include "dnr/enumerate.hpp"
#include "dnr/gadget.hpp"
#include "dnr/loss.hpp"
#include "dnr/network.hpp"
#include "dnr/powerflow.hpp"
#include "dnr/search.hpp"
#include "dnr/tree.hpp"

using dnr::Network;
using dnr::TreeConfig;

namespace {

constexpr double kLossRelTol = 0.005;      // +-0.5% on published kW figures
constexpr double kTreeAgreementTol = 1e-9; // relative, objective vs extension
constexpr double kSupermodularSlack = 1e-9;
constexpr double kRankCorrelationFloor = 0.99;
constexpr double kRankCorrelationBaseline = 0.9956;  // first computed value
constexpr double kOptimizeRuntimeLimitS = 5.0;

const std::vector<int> kPublishedOptimum{7, 9, 14, 32, 37};

std::string data_file(const char* name) { return std::string(DNR_DATA_DIR) + "/" + name; }

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

bool within(double value, double expect, double rel) {
  return std::abs(value - expect) <= rel * std::abs(expect);
}

// Random connected network: a random tree plus a few chords. Resistances
// are uniform when asked (root-edge property needs that), demands strictly
// positive to keep optima unique up to the property under test.
dnr::CaseData random_case(std::mt19937_64& rng, int max_nodes, bool uniform_r, int max_extra) {
  std::uniform_int_distribution<int> nodes_d(4, max_nodes);
  int n = nodes_d(rng);
  dnr::CaseData d;
  d.name = "random";
  d.root = 0;
  d.base = {1.0, 1.0};
  std::uniform_real_distribution<double> demand_d(0.5, 3.0);
  d.buses.push_back({0, 0.0, 0.0});
  for (int i = 1; i < n; ++i) d.buses.push_back({i, demand_d(rng), demand_d(rng) * 0.5});

  std::uniform_real_distribution<double> r_d(0.2, 2.0);
  auto resistance = [&] { return uniform_r ? 1.0 : r_d(rng); };
  std::set<std::pair<int, int>> used;
  int id = 1;
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> parent_d(0, i - 1);
    int p = parent_d(rng);
    used.insert({p, i});
    d.lines.push_back({id++, p, i, resistance(), 0.0});
  }
  std::uniform_int_distribution<int> extra_d(1, max_extra);
  int extra = extra_d(rng);
  std::uniform_int_distribution<int> bus_d(0, n - 1);
  for (int t = 0; t < 20 && extra > 0; ++t) {
    int u = bus_d(rng), v = bus_d(rng);
    if (u == v) continue;
    auto key = std::minmax(u, v);
    if (!used.insert(key).second) continue;
    d.lines.push_back({id++, key.first, key.second, resistance(), 0.0});
    --extra;
  }
  return d;
}

// --- criterion 1: CLI end-to-end run of the published experiment ---------
void criterion_1() {
  std::string out_path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                         "/dnr_accept_optimize.json";
  std::string cmd = std::string(DNR_CLI_PATH) + " --json optimize " + data_file("case33.json") +
                    " --init open:33,34,35,36,37 > " + out_path;
  auto t0 = std::chrono::steady_clock::now();
  int rc = std::system(cmd.c_str());
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool pass = rc == 0;
  std::string detail;
  if (!pass) {
    detail = "CLI exited with code " + std::to_string(rc);
  } else {
    std::ifstream in(out_path);
    nlohmann::json rep = nlohmann::json::parse(in, nullptr, false);
    if (rep.is_discarded()) {
      pass = false;
      detail = "CLI emitted no parsable run report";
    } else {
      std::vector<int> open = rep["results"]["open_lines"].get<std::vector<int>>();
      double exact = rep["results"]["exact_loss_kw"].get<double>();
      pass = open == kPublishedOptimum && within(exact, 139.552, kLossRelTol) &&
             elapsed < kOptimizeRuntimeLimitS;
      std::ostringstream os;
      os << "CLI optimize: open {";
      for (int v : open) os << v << " ";
      os << "}, exact " << exact << " kW, " << elapsed << " s";
      detail = os.str();
    }
  }
  report(1, pass, detail);
}

// --- criterion 2: published losses of the five benchmark configurations --
void criterion_2() {
  Network net = dnr::load_case(data_file("case33.json"));
  struct Row {
    std::vector<int> open;
    double loss_kw;
  };
  const std::vector<Row> rows{{{7, 9, 14, 32, 37}, 139.552},
                              {{7, 9, 14, 28, 32}, 139.976},
                              {{7, 10, 14, 32, 37}, 140.279},
                              {{11, 28, 31, 33, 34}, 146.832},
                              {{33, 34, 35, 36, 37}, 202.670}};
  bool pass = true;
  double worst = 0.0;
  for (const Row& row : rows) {
    double got = dnr::exact_loss_kw(net, TreeConfig::from_open(net, row.open));
    double rel = std::abs(got - row.loss_kw) / row.loss_kw;
    worst = std::max(worst, rel);
    if (rel > kLossRelTol) pass = false;
  }
  std::ostringstream os;
  os << "five benchmark losses, worst relative error " << worst;
  report(2, pass, os.str());
}

// --- criterion 3: tree counting, two independent methods ------------------
void criterion_3() {
  Network net = dnr::load_case(data_file("case33.json"));
  std::uint64_t enumerated = dnr::enumerate_trees(net, nullptr);
  bool pass = enumerated == 50751 && dnr::count_trees_kirchhoff(net) == 50751;

  std::mt19937_64 rng(30331);
  int agreements = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Network g = Network::from_case(random_case(rng, 9, false, 5));
    std::uint64_t a = dnr::enumerate_trees(g, nullptr);
    if (dnr::count_trees_kirchhoff(g) == a)
      ++agreements;
    else
      pass = false;
  }
  std::ostringstream os;
  os << "33-bus tree count " << enumerated << " (both methods), " << agreements
     << "/200 random graphs agree";
  report(3, pass, os.str());
}

// --- criterion 4: brute force vs 1000 restarted local searches ------------
void criterion_4() {
  Network net = dnr::load_case(data_file("case33.json"));
  dnr::GlobalOptimum opt = dnr::global_optimum(net);
  bool pass = opt.best.open_lines(net) == kPublishedOptimum;
  int reached = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    dnr::SearchTrace trace = dnr::branch_exchange(net, dnr::random_spanning_tree(net, seed));
    if (trace.converged && trace.final.open_lines(net) == kPublishedOptimum)
      ++reached;
    else
      pass = false;
  }
  std::ostringstream os;
  os << "global optimum open {7 9 14 32 37}: " << (opt.best.open_lines(net) == kPublishedOptimum)
     << ", " << reached << "/1000 restarts reach it";
  report(4, pass, os.str());
}

// --- criterion 5: supermodularity and monotonicity, sampled triples -------
void criterion_5() {
  std::mt19937_64 rng(50551);
  int violations = 0, monotonicity_violations = 0;
  long long triples = 0;
  for (int net_i = 0; net_i < 100; ++net_i) {
    Network net = Network::from_case(random_case(rng, 8, false, 4));
    std::vector<int> ids = dnr::all_line_ids(net);
    int m = static_cast<int>(ids.size());
    std::vector<double> f(std::size_t(1) << m, -1.0);
    auto fval = [&](unsigned mask) {
      if (f[mask] < 0.0) {
        std::vector<int> sub;
        for (int i = 0; i < m; ++i)
          if (mask & (1u << i)) sub.push_back(ids[i]);
        f[mask] = dnr::f_super(net, sub);
      }
      return f[mask];
    };
    std::uniform_int_distribution<unsigned> mask_d(0, (1u << m) - 1);
    for (int sampled = 0; sampled < 100;) {
      unsigned b = mask_d(rng);
      unsigned a = mask_d(rng) & b;  // A subset of B
      std::vector<int> outside;
      for (int i = 0; i < m; ++i)
        if (!(b & (1u << i))) outside.push_back(i);
      if (outside.empty()) continue;
      ++sampled;
      int e = outside[mask_d(rng) % outside.size()];
      unsigned bit = 1u << e;
      ++triples;
      double da = fval(a | bit) - fval(a);
      double db = fval(b | bit) - fval(b);
      if (da > db + kSupermodularSlack) ++violations;
      if (da < -kSupermodularSlack || db < -kSupermodularSlack) ++monotonicity_violations;
    }
  }
  std::ostringstream os;
  os << triples << " sampled triples on 100 networks: " << violations
     << " supermodularity violations, " << monotonicity_violations << " monotonicity violations";
  report(5, violations == 0 && monotonicity_violations == 0 && triples == 10000, os.str());
}

// --- criterion 6: extension equals the tree objective on trees ------------
void criterion_6() {
  std::mt19937_64 rng(60661);
  bool pass = true;
  double worst = 0.0;
  long long checked = 0;
  for (int net_i = 0; net_i < 50; ++net_i) {
    Network net = Network::from_case(random_case(rng, 7, false, 3));
    dnr::enumerate_trees(net, [&](const TreeConfig& t) {
      double direct = dnr::total_loss(net, t).total_kw;
      double ext = dnr::f_super(net, t.closed);
      double rel = std::abs(ext - direct) / std::max(1e-300, std::abs(direct));
      worst = std::max(worst, rel);
      if (rel > kTreeAgreementTol && std::abs(ext - direct) > 1e-15) pass = false;
      ++checked;
    });
  }
  Network net = dnr::load_case(data_file("case33.json"));
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    TreeConfig t = dnr::random_spanning_tree(net, seed);
    double direct = dnr::total_loss(net, t).total_kw;
    double ext = dnr::f_super(net, t.closed);
    double rel = std::abs(ext - direct) / std::abs(direct);
    worst = std::max(worst, rel);
    if (rel > kTreeAgreementTol) pass = false;
    ++checked;
  }
  std::ostringstream os;
  os << checked << " trees checked, worst relative gap " << worst;
  report(6, pass, os.str());
}

// --- criterion 7: a posteriori worst-case bound ---------------------------
void criterion_7() {
  Network net33 = dnr::load_case(data_file("case33.json"));
  dnr::GlobalOptimum opt33 = dnr::global_optimum(net33);
  dnr::SearchTrace t33 =
      dnr::branch_exchange(net33, TreeConfig::from_open(net33, {33, 34, 35, 36, 37}));
  bool pass = dnr::check_bound(net33, t33.final, opt33.best, 1e-6).holds;

  std::mt19937_64 rng(70771);
  int holds = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Network net = Network::from_case(random_case(rng, 7, false, 3));
    dnr::GlobalOptimum opt = dnr::global_optimum(net);
    dnr::SearchTrace trace =
        dnr::branch_exchange(net, dnr::random_spanning_tree(net, trial));
    if (dnr::check_bound(net, trace.final, opt.best, 1e-6).holds)
      ++holds;
    else
      pass = false;
  }
  std::ostringstream os;
  os << "bound holds on the 33-bus run and " << holds << "/100 random instances";
  report(7, pass, os.str());
}

// --- criterion 8: gadget cost identities and the decision procedure -------
void criterion_8() {
  std::mt19937_64 rng(80881);
  bool pass = true;
  int gadgets = 0;
  long long trees_checked = 0;
  // Instances: every valid multiset with m in {1,2} and small B drawn until
  // 20 gadgets are collected.
  std::vector<dnr::PartitionInstance> instances{{1, {3, 3, 4}},
                                               {1, {4, 4, 4}},
                                               {2, {3, 3, 4, 4, 4, 4}},
                                               {2, {5, 5, 5, 5, 5, 7}}};
  while (static_cast<int>(instances.size()) < 20) {
    dnr::PartitionInstance inst;
    inst.m = 1 + static_cast<int>(rng() % 2);
    long long b = 10 + static_cast<long long>(rng() % 8);
    for (int i = 0; i < 3 * inst.m; ++i)
      inst.a.push_back(b / 4 + 1 + static_cast<long long>(rng() % std::max<long long>(1, (b - 1) / 2 - b / 4)));
    if (inst.sum() == inst.m * b && dnr::validate_instance(inst).empty())
      instances.push_back(inst);
  }

  for (const dnr::PartitionInstance& inst : instances) {
    ++gadgets;
    dnr::GadgetNetwork g = dnr::build_gadget(inst);
    long long const_terms = 0;
    for (long long v : inst.a) const_terms += v * v + (v - 1);
    dnr::enumerate_trees(g.net, [&](const TreeConfig& t) {
      // The decomposition is phrased through the per-hub item sets, which
      // requires every root line in the tree (optimal trees always keep
      // them). Trees dropping a root line are outside the identity's premise.
      bool all_root_lines = true;
      for (std::size_t j = 0; j < g.u_ids.size(); ++j)
        if (!t.contains(static_cast<int>(j) + 1)) all_root_lines = false;
      if (!all_root_lines) return;
      ++trees_checked;
      long long hub_terms = 0, budget = 0;
      for (std::size_t j = 0; j < g.u_ids.size(); ++j) {
        long long load = 1;
        for (std::size_t i = 0; i < g.v_ids.size(); ++i)
          if (t.contains(g.uv_line[j][i])) load += inst.a[i];
        hub_terms += load * load;
        budget += load;
      }
      if (dnr::unit_demand_cost(g.net, t) != hub_terms + const_terms) pass = false;
      if (budget != inst.m * (inst.bound() + 1)) pass = false;
    });
  }
  if (trees_checked == 0) pass = false;

  // Decision procedure vs a direct backtracking solver.
  auto brute = [](const dnr::PartitionInstance& inst) {
    long long b = inst.bound();
    std::vector<long long> load(inst.m, 0);
    std::vector<int> cnt(inst.m, 0);
    std::function<bool(int)> place = [&](int i) -> bool {
      if (i == inst.k()) return true;
      for (int j = 0; j < inst.m; ++j) {
        if (cnt[j] == 3 || load[j] + inst.a[i] > b) continue;
        load[j] += inst.a[i];
        ++cnt[j];
        if (place(i + 1)) return true;
        load[j] -= inst.a[i];
        --cnt[j];
        if (cnt[j] == 0) break;
      }
      return false;
    };
    return place(0);
  };
  int decided = 0;
  for (const dnr::PartitionInstance& inst : instances) {
    dnr::PartitionDecision dec = dnr::decide_partition(inst);
    bool expect = brute(inst);
    bool got_yes = dec.answer == dnr::PartitionDecision::Answer::kYes;
    if (dec.answer == dnr::PartitionDecision::Answer::kUnknown || got_yes != expect)
      pass = false;
    else
      ++decided;
  }
  std::ostringstream os;
  os << gadgets << " gadgets, " << trees_checked
     << " root-complete trees satisfy both identities, " << decided
     << "/20 decisions match the direct solver";
  report(8, pass, os.str());
}

// --- criterion 9: root-adjacent edges of optima under uniform resistance --
void criterion_9() {
  std::mt19937_64 rng(90991);
  bool pass = true;
  int clean = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Network net = Network::from_case(random_case(rng, 8, true, 4));
    dnr::GlobalOptimum opt = dnr::global_optimum(net);
    bool ok = true;
    for (const Network::Arc& a : net.adjacent(net.root_index()))
      if (!opt.best.contains(net.line_id(a.line_idx))) ok = false;
    // Check every optimal tree, not just the first reported one.
    double best = opt.best_loss_kw;
    dnr::enumerate_trees(net, [&](const TreeConfig& t) {
      if (dnr::total_loss(net, t).total_kw > best * (1.0 + 1e-12)) return;
      for (const Network::Arc& a : net.adjacent(net.root_index()))
        if (!t.contains(net.line_id(a.line_idx))) ok = false;
    });
    if (ok)
      ++clean;
    else
      pass = false;
  }
  std::ostringstream os;
  os << clean << "/100 uniform-resistance networks: all optimal trees keep every root edge";
  report(9, pass, os.str());
}

// --- criterion 10: full-enumeration rank comparison -----------------------
void criterion_10() {
  Network net = dnr::load_case(data_file("case33.json"));
  dnr::RankComparison rc = dnr::rank_comparison(net, 1);
  bool pass = rc.spearman > kRankCorrelationFloor && rc.top1_agrees &&
              within(rc.spearman, kRankCorrelationBaseline, 0.001);
  std::ostringstream os;
  os << "rank correlation " << rc.spearman << " (floor " << kRankCorrelationFloor
     << ", baseline " << kRankCorrelationBaseline << "), top-1 "
     << (rc.top1_agrees ? "agrees" : "DISAGREES") << ", " << rc.excluded
     << " infeasible trees excluded";
  report(10, pass, os.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s: %d of 10 criteria failed\n", g_failures == 0 ? "OK" : "FAILED", g_failures);
  return g_failures;
}
