#include "commflow/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace commflow {

namespace {

// Adjacency-list residual graph over directed arcs with int64 capacity/cost.
struct ArcGraph {
  struct Arc {
    int to;
    std::int64_t cap;
    std::int64_t cost;
    int rev;  // index of the reverse arc in adj[to]
  };
  std::vector<std::vector<Arc>> adj;

  explicit ArcGraph(int n) : adj(static_cast<size_t>(n)) {}
  void add(int from, int to, std::int64_t cap, std::int64_t cost) {
    adj[from].push_back({to, cap, cost, static_cast<int>(adj[to].size())});
    adj[to].push_back({from, 0, -cost, static_cast<int>(adj[from].size()) - 1});
  }
};

}  // namespace

MaxflowOracleResult oracle_maxflow(const FlowNetwork& net, int s, int t) {
  if (s == t) throw std::invalid_argument("source equals sink");
  net.validate();
  ArcGraph g(net.n);
  std::vector<std::pair<int, int>> where;  // edge -> (vertex, arc index)
  for (const auto& e : net.edges) {
    where.emplace_back(e.tail, static_cast<int>(g.adj[e.tail].size()));
    g.add(e.tail, e.head, e.cap, 0);
  }
  MaxflowOracleResult out;
  while (true) {
    std::vector<int> prev_v(static_cast<size_t>(net.n), -1);
    std::vector<int> prev_a(static_cast<size_t>(net.n), -1);
    std::deque<int> queue{s};
    prev_v[s] = s;
    while (!queue.empty() && prev_v[t] < 0) {
      const int v = queue.front();
      queue.pop_front();
      for (int ai = 0; ai < static_cast<int>(g.adj[v].size()); ++ai) {
        const auto& a = g.adj[v][ai];
        if (a.cap > 0 && prev_v[a.to] < 0) {
          prev_v[a.to] = v;
          prev_a[a.to] = ai;
          queue.push_back(a.to);
        }
      }
    }
    if (prev_v[t] < 0) break;
    std::int64_t push = std::numeric_limits<std::int64_t>::max();
    for (int v = t; v != s; v = prev_v[v])
      push = std::min(push, g.adj[prev_v[v]][prev_a[v]].cap);
    for (int v = t; v != s; v = prev_v[v]) {
      auto& a = g.adj[prev_v[v]][prev_a[v]];
      a.cap -= push;
      g.adj[v][a.rev].cap += push;
    }
    out.value += push;
  }
  out.flow.resize(net.edges.size());
  for (size_t e = 0; e < net.edges.size(); ++e) {
    const auto& a = g.adj[where[e].first][where[e].second];
    out.flow[e] = net.edges[e].cap - a.cap;
  }
  return out;
}

MincostOracleResult oracle_mincost(const FlowNetwork& net) {
  net.validate();
  const int n = net.n;
  const int s = n, t = n + 1;
  ArcGraph g(n + 2);
  std::vector<std::pair<int, int>> where;
  for (const auto& e : net.edges) {
    where.emplace_back(e.tail, static_cast<int>(g.adj[e.tail].size()));
    g.add(e.tail, e.head, e.cap, e.cost);
  }
  std::int64_t total_supply = 0;
  for (int v = 0; v < n; ++v) {
    // demand[v] is required net inflow; negative demand supplies flow.
    if (net.demand[v] < 0) {
      g.add(s, v, -net.demand[v], 0);
      total_supply += -net.demand[v];
    } else if (net.demand[v] > 0) {
      g.add(v, t, net.demand[v], 0);
    }
  }

  MincostOracleResult out;
  std::int64_t routed = 0;
  while (true) {
    // Bellman-Ford shortest path s -> t in the residual graph.
    const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> dist(static_cast<size_t>(n + 2), inf);
    std::vector<int> prev_v(static_cast<size_t>(n + 2), -1);
    std::vector<int> prev_a(static_cast<size_t>(n + 2), -1);
    dist[s] = 0;
    for (int pass = 0; pass < n + 2; ++pass) {
      bool relaxed = false;
      for (int v = 0; v < n + 2; ++v) {
        if (dist[v] >= inf) continue;
        for (int ai = 0; ai < static_cast<int>(g.adj[v].size()); ++ai) {
          const auto& a = g.adj[v][ai];
          if (a.cap > 0 && dist[v] + a.cost < dist[a.to]) {
            dist[a.to] = dist[v] + a.cost;
            prev_v[a.to] = v;
            prev_a[a.to] = ai;
            relaxed = true;
          }
        }
      }
      if (!relaxed) break;
    }
    if (dist[t] >= inf) break;
    std::int64_t push = std::numeric_limits<std::int64_t>::max();
    for (int v = t; v != s; v = prev_v[v])
      push = std::min(push, g.adj[prev_v[v]][prev_a[v]].cap);
    for (int v = t; v != s; v = prev_v[v]) {
      auto& a = g.adj[prev_v[v]][prev_a[v]];
      a.cap -= push;
      g.adj[v][a.rev].cap += push;
    }
    routed += push;
  }
  if (routed != total_supply) {
    out.feasible = false;
    return out;
  }
  out.feasible = true;
  out.flow.resize(net.edges.size());
  for (size_t e = 0; e < net.edges.size(); ++e) {
    const auto& a = g.adj[where[e].first][where[e].second];
    out.flow[e] = net.edges[e].cap - a.cap;
    out.cost += net.edges[e].cost * out.flow[e];
  }
  return out;
}

LpOracleResult oracle_lp(const DistributedLP& lp) {
  const int m = lp.m();
  const int n = lp.n();
  if (n > 3 || m > 24)
    throw DimensionGuardError("oracle_lp handles n <= 3, m <= 24 only");
  const Eigen::MatrixXd a = lp.a.dense();
  const double tol = 1e-9 * std::max(1.0, lp.c.cwiseAbs().maxCoeff());
  const double feas_tol =
      1e-8 * std::max({1.0, lp.b.cwiseAbs().maxCoeff(),
                       lp.u.cwiseAbs().maxCoeff()});

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;

  auto consider = [&](const Eigen::VectorXd& x) {
    for (int i = 0; i < m; ++i)
      if (x[i] < lp.l[i] - feas_tol || x[i] > lp.u[i] + feas_tol) return;
    if ((a.transpose() * x - lp.b).cwiseAbs().maxCoeff() > feas_tol) return;
    const double v = lp.c.dot(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  };

  // Pure sign-pattern candidate (covers the box-only case).
  {
    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i) x[i] = lp.c[i] > 0 ? lp.l[i] : lp.u[i];
    consider(x);
  }

  // Dual-guided enumeration: for each n-subset T with A_T invertible, solve
  // A_T z = c_T; reduced-cost signs pin the remaining coordinates, tolerance
  // ties enumerated both ways.
  auto run_subset = [&](const std::vector<int>& t_rows) {
    Eigen::MatrixXd at(n, n);
    Eigen::VectorXd ct(n);
    for (int r = 0; r < n; ++r) {
      at.row(r) = a.row(t_rows[static_cast<size_t>(r)]);
      ct[r] = lp.c[t_rows[static_cast<size_t>(r)]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(at);
    if (!lu.isInvertible()) return;
    Eigen::FullPivLU<Eigen::MatrixXd> lut(at.transpose());
    const Eigen::VectorXd z = lu.solve(ct);
    const Eigen::VectorXd rc = lp.c - a * z;

    std::vector<int> free_rows(t_rows.begin(), t_rows.end());
    std::vector<int> ambiguous;
    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i) x[i] = 0.0;
    std::vector<char> in_t(static_cast<size_t>(m), 0);
    for (int r : t_rows) in_t[static_cast<size_t>(r)] = 1;
    for (int i = 0; i < m; ++i) {
      if (in_t[static_cast<size_t>(i)]) continue;
      if (rc[i] > tol) {
        x[i] = lp.l[i];
      } else if (rc[i] < -tol) {
        x[i] = lp.u[i];
      } else {
        ambiguous.push_back(i);
      }
    }
    if (ambiguous.size() > 4) return;  // degenerate beyond the oracle's scope

    const int patterns = 1 << ambiguous.size();
    for (int mask = 0; mask < patterns; ++mask) {
      for (size_t j = 0; j < ambiguous.size(); ++j)
        x[ambiguous[j]] = (mask >> j) & 1 ? lp.u[ambiguous[j]]
                                          : lp.l[ambiguous[j]];
      // Solve equality constraints for the free coordinates.
      Eigen::VectorXd rhs = lp.b;
      for (int i = 0; i < m; ++i)
        if (!in_t[static_cast<size_t>(i)]) rhs -= a.row(i).transpose() * x[i];
      const Eigen::VectorXd xf = lut.solve(rhs);  // A_T^T x_T = rhs
      for (int r = 0; r < n; ++r) x[t_rows[static_cast<size_t>(r)]] = xf[r];
      consider(x);
    }
  };

  // Enumerate n-subsets of [m].
  std::vector<int> idx(static_cast<size_t>(n), 0);
  if (n >= 1 && m >= n) {
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    while (true) {
      run_subset(idx);
      int k = n - 1;
      while (k >= 0 && idx[static_cast<size_t>(k)] == m - n + k) --k;
      if (k < 0) break;
      ++idx[static_cast<size_t>(k)];
      for (int j = k + 1; j < n; ++j)
        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
  }

  if (!std::isfinite(best))
    throw Error("oracle_lp found no feasible vertex candidate");
  LpOracleResult out;
  out.value = best;
  out.x = best_x;
  return out;
}

}  // namespace commflow
