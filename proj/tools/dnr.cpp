// Command-line front end: reconfiguration search, exhaustive enumeration,
// radial power flow, and the 3-Partition reduction gadget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dnr/batch.hpp"
#include "dnr/enumerate.hpp"
#include "dnr/gadget.hpp"
#include "dnr/loss.hpp"
#include "dnr/network.hpp"
#include "dnr/powerflow.hpp"
#include "dnr/search.hpp"
#include "dnr/tree.hpp"

namespace {

constexpr const char* kVersion = "dnr 1.0.0 (case33 dataset rev 1)";

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitLimitExceeded = 4;

using nlohmann::json;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string join_ids(const std::vector<int>& ids, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(ids[i]);
  }
  return out;
}

std::vector<int> parse_id_list(const std::string& s) {
  std::vector<int> ids;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    ids.push_back(std::stoi(tok));
  }
  return ids;
}

// Deterministic fallback start: greedy tree over ascending line ids. On the
// bundled 33-bus case this is exactly the normally-open-tie configuration.
dnr::TreeConfig default_tree(const dnr::Network& net) {
  std::vector<int> ids = dnr::all_line_ids(net);
  std::vector<int> parent(net.bus_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> closed;
  for (int id : ids) {
    const dnr::Line& l = net.lines()[net.line_index(id)];
    int a = find(net.bus_index(l.from)), b = find(net.bus_index(l.to));
    if (a != b) {
      parent[a] = b;
      closed.push_back(id);
    }
  }
  return dnr::TreeConfig::from_closed(std::move(closed));
}

dnr::TreeConfig parse_init(const dnr::Network& net, const std::string& spec) {
  if (spec == "case-default") return default_tree(net);
  if (spec.rfind("random:", 0) == 0)
    return dnr::random_spanning_tree(net, std::stoull(spec.substr(7)));
  if (spec.rfind("open:", 0) == 0)
    return dnr::TreeConfig::from_open(net, parse_id_list(spec.substr(5)));
  throw CLI::ValidationError("--init", "expected case-default, random:SEED or open:ID,ID,...");
}

void emit_report(const std::string& command, const dnr::Network& net, const json& results,
                 double wall_s) {
  json report = {{"command", command},
                 {"input_digest", net.digest()},
                 {"results", results},
                 {"wall_time_s", wall_s},
                 {"version", kVersion}};
  std::cout << report.dump(2) << "\n";
}

void write_trace_csv(const std::string& path, const dnr::SearchTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iter,e_in,e_out,loss_before_kw,loss_after_kw\n";
  for (const dnr::SearchStep& s : trace.steps)
    out << s.iteration << "," << s.e_in << "," << s.e_out << ","
        << fixed(s.loss_before_kw, 6) << "," << fixed(s.loss_after_kw, 6) << "\n";
}

int run_optimize(const std::string& case_path, const std::string& init_spec, double epsilon,
                 const std::string& pivot, const std::string& trace_path, bool as_json) {
  Timer timer;
  dnr::Network net = dnr::load_case(case_path);
  dnr::TreeConfig init = parse_init(net, init_spec);

  dnr::SearchParams params;
  params.epsilon = epsilon;
  params.pivot = pivot == "first" ? dnr::PivotRule::kFirstImprovement
                                  : dnr::PivotRule::kBestImprovement;
  dnr::SearchTrace trace = dnr::branch_exchange(net, init, params);
  if (!trace_path.empty()) write_trace_csv(trace_path, trace);

  std::vector<int> open = trace.final.open_lines(net);
  json results = {{"open_lines", open},
                  {"approx_loss_kw", trace.final_loss_kw},
                  {"steps", trace.steps.size()},
                  {"converged", trace.converged}};
  bool have_exact = false;
  double exact = 0.0;
  try {
    exact = dnr::exact_loss_kw(net, trace.final);
    have_exact = true;
    results["exact_loss_kw"] = exact;
  } catch (const std::runtime_error&) {
    results["exact_loss_kw"] = nullptr;
  }

  if (as_json) {
    emit_report("optimize", net, results, timer.seconds());
  } else {
    std::cout << "open lines: " << join_ids(open, ",") << "\n"
              << "approx loss: " << fixed(trace.final_loss_kw, 3) << " kW\n";
    if (have_exact) std::cout << "exact loss: " << fixed(exact, 3) << " kW\n";
    std::cout << "steps: " << trace.steps.size() << "\n"
              << "converged: " << (trace.converged ? "yes" : "no") << "\n";
  }
  return trace.converged ? kExitOk : kExitNoConvergence;
}

void write_table_csv(const std::string& path, const dnr::Network& net,
                     const std::vector<dnr::TreeConfig>& trees,
                     const std::vector<double>& approx, const std::vector<double>* exact) {
  // Rows sorted by approximate loss; ranks by both objectives.
  std::vector<std::size_t> by_approx(trees.size()), by_exact;
  std::iota(by_approx.begin(), by_approx.end(), 0);
  std::stable_sort(by_approx.begin(), by_approx.end(),
                   [&](std::size_t a, std::size_t b) { return approx[a] < approx[b]; });
  std::vector<int> rank_approx(trees.size());
  for (std::size_t r = 0; r < by_approx.size(); ++r)
    rank_approx[by_approx[r]] = static_cast<int>(r) + 1;

  std::vector<int> rank_exact(trees.size(), 0);
  if (exact) {
    for (std::size_t i = 0; i < trees.size(); ++i)
      if (!std::isnan((*exact)[i])) by_exact.push_back(i);
    std::stable_sort(by_exact.begin(), by_exact.end(),
                     [&](std::size_t a, std::size_t b) { return (*exact)[a] < (*exact)[b]; });
    for (std::size_t r = 0; r < by_exact.size(); ++r)
      rank_exact[by_exact[r]] = static_cast<int>(r) + 1;
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "open_lines,approx_loss_kw,exact_loss_kw,rank_approx,rank_exact\n";
  for (std::size_t r = 0; r < by_approx.size(); ++r) {
    std::size_t i = by_approx[r];
    out << join_ids(trees[i].open_lines(net), ";") << "," << fixed(approx[i], 6) << ",";
    if (exact && !std::isnan((*exact)[i]))
      out << fixed((*exact)[i], 6);
    out << "," << rank_approx[i] << ",";
    if (exact && rank_exact[i] > 0) out << rank_exact[i];
    out << "\n";
  }
}

int run_enumerate(const std::string& case_path, bool count_only, const std::string& table_path,
                  bool with_exact, std::uint64_t limit, bool as_json) {
  Timer timer;
  dnr::Network net = dnr::load_case(case_path);

  if (count_only) {
    std::uint64_t count = dnr::enumerate_trees(net, nullptr, limit);
    auto kirchhoff = dnr::count_trees_kirchhoff(net);
    json results = {{"tree_count", count}, {"kirchhoff_count", kirchhoff.str()}};
    if (as_json)
      emit_report("enumerate", net, results, timer.seconds());
    else
      std::cout << count << "\n";
    return kExitOk;
  }

  std::vector<dnr::TreeConfig> trees = dnr::all_spanning_trees(net, limit);
  std::vector<double> approx = dnr::batch_approx_loss(net, trees, true);
  std::vector<double> exact;
  if (with_exact) exact = dnr::batch_exact_loss(net, trees, true);
  if (!table_path.empty())
    write_table_csv(table_path, net, trees, approx, with_exact ? &exact : nullptr);

  std::size_t best = 0;
  for (std::size_t i = 1; i < approx.size(); ++i)
    if (approx[i] < approx[best]) best = i;
  json results = {{"tree_count", trees.size()},
                  {"best_open_lines", trees[best].open_lines(net)},
                  {"best_approx_loss_kw", approx[best]}};
  if (as_json)
    emit_report("enumerate", net, results, timer.seconds());
  else
    std::cout << "trees: " << trees.size() << "\nbest open lines: "
              << join_ids(trees[best].open_lines(net), ",") << "\nbest approx loss: "
              << fixed(approx[best], 3) << " kW\n";
  return kExitOk;
}

int run_powerflow(const std::string& case_path, const std::string& open_list,
                  const std::string& csv_prefix, bool as_json) {
  Timer timer;
  dnr::Network net = dnr::load_case(case_path);
  dnr::TreeConfig cfg = dnr::TreeConfig::from_open(net, parse_id_list(open_list));
  if (!dnr::is_spanning_tree(net, cfg)) {
    std::cerr << "error: the closed lines do not form a spanning tree\n";
    return kExitInvalidInput;
  }
  dnr::PowerFlowSolution sol = dnr::solve_radial(net, cfg);
  if (sol.collapsed || !sol.converged) {
    std::cerr << (sol.collapsed ? "error: voltage collapse\n" : "error: no convergence\n");
    return kExitNoConvergence;
  }

  if (!csv_prefix.empty()) {
    std::ofstream bus_out(csv_prefix + "_bus.csv");
    bus_out << "bus,v_pu\n";
    for (int i = 0; i < net.bus_count(); ++i)
      bus_out << net.bus_id(i) << "," << fixed(sol.v_pu[i], 6) << "\n";
    std::ofstream line_out(csv_prefix + "_line.csv");
    line_out << "line,p_kw,q_kvar,loss_kw\n";
    for (int id : cfg.closed) {
      const dnr::BranchFlow& b = sol.branch[net.line_index(id)];
      line_out << id << "," << fixed(b.p_kw, 6) << "," << fixed(b.q_kvar, 6) << ","
               << fixed(b.loss_kw, 6) << "\n";
    }
  }

  dnr::AssumptionReport rep = dnr::assumption_report(net, cfg);
  json results = {{"total_loss_kw", sol.total_loss_kw()},
                  {"iterations", sol.iterations},
                  {"max_v_deviation_pu", rep.max_v_deviation},
                  {"loss_to_demand_ratio", rep.loss_to_demand_ratio},
                  {"approx_vs_exact_gap", rep.approx_vs_exact_gap}};
  if (as_json)
    emit_report("powerflow", net, results, timer.seconds());
  else
    std::cout << "total loss: " << fixed(sol.total_loss_kw(), 3) << " kW\n"
              << "sweeps: " << sol.iterations << "\n"
              << "max voltage deviation: " << fixed(rep.max_v_deviation, 4) << " p.u.\n";
  return kExitOk;
}

dnr::PartitionInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dnr::ParseError("cannot open instance file: " + path);
  json j = json::parse(in);
  if (!j.is_object() || !j.contains("m") || !j.contains("a"))
    throw dnr::ParseError(path + ": expected {\"m\": int, \"a\": [int]}");
  dnr::PartitionInstance inst;
  inst.m = j["m"].get<int>();
  inst.a = j["a"].get<std::vector<long long>>();
  return inst;
}

int run_gadget(const std::string& instance_path, bool decide, const std::string& emit_path,
               bool as_json) {
  Timer timer;
  dnr::PartitionInstance inst = read_instance(instance_path);
  std::vector<std::string> problems = dnr::validate_instance(inst);
  if (!problems.empty()) {
    for (const std::string& p : problems) std::cerr << "error: " << p << "\n";
    return kExitInvalidInput;
  }
  dnr::GadgetNetwork g = dnr::build_gadget(inst);

  if (!emit_path.empty()) dnr::save_case(g.net, emit_path);

  json results = {{"buses", g.net.bus_count()},
                  {"lines", g.net.line_count()},
                  {"c_min", dnr::c_min(inst)}};
  if (decide) {
    dnr::PartitionDecision dec = dnr::decide_partition(inst);
    const char* answer = dec.answer == dnr::PartitionDecision::Answer::kYes   ? "yes"
                         : dec.answer == dnr::PartitionDecision::Answer::kNo ? "no"
                                                                             : "unknown";
    results["answer"] = answer;
    results["optimum_cost"] = dec.optimum_cost;
    if (dec.answer == dnr::PartitionDecision::Answer::kYes) results["triplets"] = dec.triplets;
    if (!as_json) {
      std::cout << "answer: " << answer << "\noptimum cost: " << dec.optimum_cost
                << "\ntarget cost: " << dec.target_cost << "\n";
      if (dec.answer == dnr::PartitionDecision::Answer::kYes)
        for (std::size_t j = 0; j < dec.triplets.size(); ++j) {
          std::cout << "S_" << j + 1 << " = { ";
          for (int i : dec.triplets[j]) std::cout << "a" << i << "=" << inst.a[i - 1] << " ";
          std::cout << "}\n";
        }
    }
  } else if (!as_json) {
    std::cout << "gadget: " << g.net.bus_count() << " buses, " << g.net.line_count()
              << " lines, c_min = " << dnr::c_min(inst) << "\n";
  }
  if (as_json) emit_report("gadget", g.net, results, timer.seconds());
  return kExitOk;
}

int run_compare(const std::string& case_path, const std::string& table_path, int top_k,
                std::uint64_t limit, bool as_json) {
  Timer timer;
  dnr::Network net = dnr::load_case(case_path);
  dnr::RankComparison rc = dnr::rank_comparison(net, top_k, limit);

  if (!table_path.empty()) {
    std::ofstream out(table_path);
    if (!out) throw std::runtime_error("cannot write " + table_path);
    out << "open_lines,approx_loss_kw,exact_loss_kw,rank_approx,rank_exact\n";
    for (const dnr::RankRow& row : rc.rows)
      out << join_ids(row.tree.open_lines(net), ";") << "," << fixed(row.approx_loss_kw, 6)
          << "," << fixed(row.exact_loss_kw, 6) << "," << row.rank_approx << ","
          << row.rank_exact << "\n";
  }

  json results = {{"spearman", rc.spearman},
                  {"top1_agrees", rc.top1_agrees},
                  {"max_rank_displacement", rc.max_rank_displacement},
                  {"rows", rc.rows.size()},
                  {"excluded_non_convergent", rc.excluded}};
  if (as_json)
    emit_report("compare", net, results, timer.seconds());
  else
    std::cout << "spearman rank correlation: " << fixed(rc.spearman, 6) << "\n"
              << "top-1 agreement: " << (rc.top1_agrees ? "yes" : "no") << "\n"
              << "max rank displacement (emitted rows): " << rc.max_rank_displacement << "\n"
              << "excluded (power flow infeasible): " << rc.excluded << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribution network reconfiguration toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable run report on stdout");

  std::string case_path, init_spec = "case-default", pivot = "best", trace_path;
  double epsilon = 1e-6;
  auto* optimize = app.add_subcommand("optimize", "branch-exchange loss minimization");
  optimize->add_option("case", case_path, "case file")->required();
  optimize->add_option("--init", init_spec, "case-default | random:SEED | open:ID,ID,...");
  optimize->add_option("--epsilon", epsilon, "relative improvement threshold");
  optimize->add_option("--pivot", pivot, "best | first")
      ->check(CLI::IsMember({"best", "first"}));
  optimize->add_option("--trace", trace_path, "write per-step CSV trace");

  bool count_only = false, with_exact = false;
  std::string table_path;
  std::uint64_t limit = dnr::kDefaultTreeLimit;
  auto* enumerate = app.add_subcommand("enumerate", "exhaustive spanning-tree study");
  enumerate->add_option("case", case_path, "case file")->required();
  enumerate->add_flag("--count-only", count_only, "print the tree count only");
  enumerate->add_option("--table", table_path, "write the full tree table CSV");
  enumerate->add_flag("--with-exact", with_exact, "add exact power-flow losses");
  enumerate->add_option("--limit", limit, "abort beyond this many trees");

  std::string open_list, csv_prefix;
  auto* powerflow = app.add_subcommand("powerflow", "exact radial power flow");
  powerflow->add_option("case", case_path, "case file")->required();
  powerflow->add_option("--open", open_list, "comma-separated open line ids")->required();
  powerflow->add_option("--csv", csv_prefix, "write PREFIX_bus.csv and PREFIX_line.csv");

  std::string instance_path, emit_path;
  bool decide = false;
  auto* gadget = app.add_subcommand("gadget", "3-Partition reduction network");
  gadget->add_option("instance", instance_path, "instance JSON {\"m\":int,\"a\":[int]}")
      ->required();
  gadget->add_flag("--decide", decide, "solve the instance through the gadget");
  gadget->add_option("--emit", emit_path, "write the gadget as a case file");

  int top_k = 5000;
  auto* compare = app.add_subcommand("compare", "approximate vs exact loss ranking");
  compare->add_option("case", case_path, "case file")->required();
  compare->add_option("--table", table_path, "write top-k rank CSV");
  compare->add_option("--top-k", top_k, "rows to emit (0 = all)");
  compare->add_option("--limit", limit, "abort beyond this many trees");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*optimize)
      return run_optimize(case_path, init_spec, epsilon, pivot, trace_path, as_json);
    if (*enumerate)
      return run_enumerate(case_path, count_only, table_path, with_exact, limit, as_json);
    if (*powerflow) return run_powerflow(case_path, open_list, csv_prefix, as_json);
    if (*gadget) return run_gadget(instance_path, decide, emit_path, as_json);
    if (*compare) return run_compare(case_path, table_path, top_k, limit, as_json);
  } catch (const dnr::EnumerationLimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLimitExceeded;
  } catch (const dnr::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const dnr::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
