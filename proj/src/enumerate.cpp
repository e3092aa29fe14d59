#include "dnr/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dnr/batch.hpp"
#include "dnr/loss.hpp"

namespace dnr {

namespace {

struct EnumEdge {
  int u, v;      // contracted vertex labels
  int line_idx;  // original line
};

class TreeEnumerator {
 public:
  TreeEnumerator(const Network& net, const std::function<void(const TreeConfig&)>& visit,
                 std::uint64_t limit)
      : net_(net), visit_(visit), limit_(limit) {}

  std::uint64_t run() {
    std::vector<EnumEdge> edges;
    edges.reserve(net_.line_count());
    for (int e = 0; e < net_.line_count(); ++e) {
      const Line& l = net_.lines()[e];
      edges.push_back({net_.bus_index(l.from), net_.bus_index(l.to), e});
    }
    chosen_.clear();
    recurse(edges, net_.bus_count());
    return count_;
  }

 private:
  void emit() {
    if (++count_ > limit_) throw EnumerationLimitExceeded(limit_);
    if (visit_) {
      std::vector<int> ids;
      ids.reserve(chosen_.size());
      for (int e : chosen_) ids.push_back(net_.line_id(e));
      visit_(TreeConfig::from_closed(std::move(ids)));
    }
  }

  // Invariant: the contracted multigraph is connected and loop-free.
  void recurse(const std::vector<EnumEdge>& edges, int n_vertices) {
    if (n_vertices == 1) {
      emit();
      return;
    }
    const EnumEdge pivot = edges.front();

    // Branch 1: include the pivot. Contract v into u, drop loops.
    {
      std::vector<EnumEdge> next;
      next.reserve(edges.size() - 1);
      for (std::size_t i = 1; i < edges.size(); ++i) {
        EnumEdge e = edges[i];
        if (e.u == pivot.v) e.u = pivot.u;
        if (e.v == pivot.v) e.v = pivot.u;
        if (e.u != e.v) next.push_back(e);
      }
      chosen_.push_back(pivot.line_idx);
      recurse(next, n_vertices - 1);
      chosen_.pop_back();
    }

    // Branch 2: exclude the pivot, only if the rest stays connected.
    {
      std::vector<EnumEdge> next(edges.begin() + 1, edges.end());
      if (connected(next, n_vertices)) recurse(next, n_vertices);
    }
  }

  bool connected(const std::vector<EnumEdge>& edges, int n_vertices) {
    parent_.resize(net_.bus_count());
    std::iota(parent_.begin(), parent_.end(), 0);
    int components = n_vertices;
    for (const EnumEdge& e : edges) {
      int a = find(e.u), b = find(e.v);
      if (a != b) {
        parent_[a] = b;
        if (--components == 1) return true;
      }
    }
    return components == 1;
  }

  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  const Network& net_;
  const std::function<void(const TreeConfig&)>& visit_;
  std::uint64_t limit_;
  std::uint64_t count_ = 0;
  std::vector<int> chosen_;
  std::vector<int> parent_;
};

}  // namespace

std::uint64_t enumerate_trees(const Network& net,
                              const std::function<void(const TreeConfig&)>& visit,
                              std::uint64_t limit) {
  // Vertex labels in the contraction are dense bus indices; the active set
  // shrinks as vertices merge, so only the count of live vertices matters.
  TreeEnumerator en(net, visit, limit);
  return en.run();
}

std::vector<TreeConfig> all_spanning_trees(const Network& net, std::uint64_t limit) {
  std::vector<TreeConfig> out;
  enumerate_trees(net, [&](const TreeConfig& t) { out.push_back(t); }, limit);
  return out;
}

boost::multiprecision::cpp_int count_trees_kirchhoff(const Network& net) {
  using boost::multiprecision::cpp_int;
  int n = net.bus_count();
  if (n <= 1) return 1;

  // Laplacian minor: drop the root row/column.
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (i != net.root_index()) keep.push_back(i);
  int d = n - 1;
  std::vector<std::vector<cpp_int>> a(d, std::vector<cpp_int>(d, 0));
  std::vector<int> pos(n, -1);
  for (int i = 0; i < d; ++i) pos[keep[i]] = i;
  for (const Line& l : net.lines()) {
    int u = net.bus_index(l.from), v = net.bus_index(l.to);
    if (pos[u] >= 0) a[pos[u]][pos[u]] += 1;
    if (pos[v] >= 0) a[pos[v]][pos[v]] += 1;
    if (pos[u] >= 0 && pos[v] >= 0) {
      a[pos[u]][pos[v]] -= 1;
      a[pos[v]][pos[u]] -= 1;
    }
  }

  // Bareiss fraction-free elimination; all divisions are exact.
  cpp_int prev = 1;
  int sign = 1;
  for (int k = 0; k < d - 1; ++k) {
    if (a[k][k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < d; ++i)
        if (a[i][k] != 0) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < d; ++i)
      for (int j = k + 1; j < d; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign > 0 ? a[d - 1][d - 1] : -a[d - 1][d - 1];
}

GlobalOptimum global_optimum(const Network& net, bool keep_table, std::uint64_t limit) {
  std::vector<TreeConfig> trees = all_spanning_trees(net, limit);
  std::vector<double> losses = batch_approx_loss(net, trees, true);

  std::size_t best = 0;
  for (std::size_t i = 1; i < losses.size(); ++i)
    if (losses[i] < losses[best]) best = i;

  GlobalOptimum out;
  out.best = trees[best];
  out.best_loss_kw = losses[best];
  if (keep_table) {
    out.table.rows.reserve(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i)
      out.table.rows.push_back({trees[i].open_lines(net), losses[i], std::nullopt});
  }
  return out;
}

RankComparison rank_comparison(const Network& net, int top_k, std::uint64_t limit) {
  std::vector<TreeConfig> trees = all_spanning_trees(net, limit);
  std::vector<double> approx = batch_approx_loss(net, trees, true);
  std::vector<double> exact = batch_exact_loss(net, trees, true);

  // Rows whose power flow diverged carry a NaN; exclude them from ranking.
  std::vector<std::size_t> valid;
  RankComparison out;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (std::isnan(exact[i]))
      ++out.excluded;
    else
      valid.push_back(i);
  }

  auto ranks_of = [&](const std::vector<double>& vals) {
    std::vector<std::size_t> order = valid;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<int> rank(trees.size(), 0);
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r) + 1;
    return std::pair(order, rank);
  };
  auto [exact_order, exact_rank] = ranks_of(exact);
  auto [approx_order, approx_rank] = ranks_of(approx);

  out.top1_agrees = !exact_order.empty() && exact_order.front() == approx_order.front();

  std::vector<double> exact_valid, approx_valid;
  exact_valid.reserve(valid.size());
  approx_valid.reserve(valid.size());
  for (std::size_t i : valid) {
    exact_valid.push_back(exact[i]);
    approx_valid.push_back(approx[i]);
  }
  out.spearman = spearman_rank_correlation(exact_valid, approx_valid);

  std::size_t k = top_k <= 0 ? exact_order.size()
                             : std::min<std::size_t>(top_k, exact_order.size());
  out.rows.reserve(k);
  for (std::size_t r = 0; r < k; ++r) {
    std::size_t i = exact_order[r];
    RankRow row;
    row.tree = trees[i];
    row.rank_exact = exact_rank[i];
    row.rank_approx = approx_rank[i];
    row.exact_loss_kw = exact[i];
    row.approx_loss_kw = approx[i];
    out.max_rank_displacement =
        std::max(out.max_rank_displacement, std::abs(row.rank_exact - row.rank_approx));
    out.rows.push_back(std::move(row));
  }
  return out;
}

double spearman_rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  std::size_t n = a.size();
  if (n < 2 || b.size() != n) return n == 1 ? 1.0 : 0.0;
  auto ranks = [](const std::vector<double>& vals) {
    std::vector<std::size_t> order(vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return vals[x] < vals[y]; });
    std::vector<double> rank(vals.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<double>(r);
    return rank;
  };
  std::vector<double> ra = ranks(a), rb = ranks(b);
  double mean = (static_cast<double>(n) - 1.0) / 2.0;
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double xa = ra[i] - mean, xb = rb[i] - mean;
    num += xa * xb;
    da += xa * xa;
    db += xb * xb;
  }
  return num / std::sqrt(da * db);
}

}  // namespace dnr
