#include "commflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "commflow/leverage.hpp"

namespace commflow {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Grounding {
  std::vector<int> col_of_vertex;  // -1 for grounded vertices
  int n_cols = 0;
};

// One grounded vertex per connected component of the undirected support.
Grounding ground_vertices(const FlowNetwork& net) {
  UnionFind uf(net.n);
  for (const auto& e : net.edges) uf.unite(e.tail, e.head);
  std::vector<char> root_seen(static_cast<size_t>(net.n), 0);
  Grounding g;
  g.col_of_vertex.assign(static_cast<size_t>(net.n), -1);
  for (int v = 0; v < net.n; ++v) {
    const int r = uf.find(v);
    if (!root_seen[r]) {
      root_seen[r] = 1;  // smallest-index vertex of the component: grounded
      continue;
    }
    g.col_of_vertex[v] = g.n_cols++;
  }
  return g;
}

bool component_demands_balanced(const FlowNetwork& net) {
  UnionFind uf(net.n);
  for (const auto& e : net.edges) uf.unite(e.tail, e.head);
  std::vector<std::int64_t> sum(static_cast<size_t>(net.n), 0);
  for (int v = 0; v < net.n; ++v) sum[uf.find(v)] += net.demand[v];
  for (int v = 0; v < net.n; ++v)
    if (sum[v] != 0) return false;
  return true;
}

DistributedLP assemble_grounded_lp(const FlowNetwork& net, const Grounding& g,
                                   const Eigen::VectorXd& cost, int bits) {
  const int m = net.m();
  std::vector<Triplet> ts;
  ts.reserve(static_cast<size_t>(m) * 2);
  for (int e = 0; e < m; ++e) {
    const int ct = g.col_of_vertex[net.edges[e].tail];
    const int ch = g.col_of_vertex[net.edges[e].head];
    if (ct >= 0) ts.push_back({e, ct, -1.0});
    if (ch >= 0) ts.push_back({e, ch, 1.0});
  }
  DistributedLP lp;
  lp.a = SparseMatrix::from_triplets(m, g.n_cols, std::move(ts));
  lp.b = Eigen::VectorXd::Zero(g.n_cols);
  for (int v = 0; v < net.n; ++v)
    if (g.col_of_vertex[v] >= 0)
      lp.b[g.col_of_vertex[v]] = static_cast<double>(net.demand[v]);
  lp.c = cost;
  lp.l = Eigen::VectorXd::Zero(m);
  lp.u.resize(m);
  for (int e = 0; e < m; ++e) lp.u[e] = static_cast<double>(net.edges[e].cap);
  lp.partition.owner.resize(static_cast<size_t>(m));
  for (int e = 0; e < m; ++e) lp.partition.owner[e] = net.edges[e].owner;
  lp.bits = bits;
  return lp;
}

bool flow_feasible_exact(const FlowNetwork& net,
                         const std::vector<std::int64_t>& f) {
  std::vector<std::int64_t> inflow(static_cast<size_t>(net.n), 0);
  for (int e = 0; e < net.m(); ++e) {
    if (f[e] < 0 || f[e] > net.edges[e].cap) return false;
    inflow[net.edges[e].head] += f[e];
    inflow[net.edges[e].tail] -= f[e];
  }
  for (int v = 0; v < net.n; ++v)
    if (inflow[v] != net.demand[v]) return false;
  return true;
}

// Bellman-Ford negative-cycle detection on the residual graph with exact
// scaled integer costs. Distances fit __int128 comfortably.
bool residual_has_negative_cycle(const FlowNetwork& net,
                                 const std::vector<std::int64_t>& f,
                                 const std::vector<std::int64_t>& c_scaled) {
  struct Arc {
    int from, to;
    std::int64_t cost;
  };
  std::vector<Arc> arcs;
  for (int e = 0; e < net.m(); ++e) {
    if (f[e] < net.edges[e].cap)
      arcs.push_back({net.edges[e].tail, net.edges[e].head, c_scaled[e]});
    if (f[e] > 0)
      arcs.push_back({net.edges[e].head, net.edges[e].tail, -c_scaled[e]});
  }
  std::vector<__int128> dist(static_cast<size_t>(net.n), 0);
  for (int pass = 0; pass < net.n; ++pass) {
    bool relaxed = false;
    for (const Arc& a : arcs) {
      if (dist[a.from] + a.cost < dist[a.to]) {
        dist[a.to] = dist[a.from] + a.cost;
        relaxed = true;
      }
    }
    if (!relaxed) return false;
  }
  return true;
}

}  // namespace

void FlowNetwork::validate() const {
  if (n <= 0) throw std::invalid_argument("network needs vertices");
  if (demand.size() != static_cast<size_t>(n))
    throw std::invalid_argument("demand size mismatch");
  for (const auto& e : edges) {
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.tail == e.head) throw std::invalid_argument("self loops unsupported");
    if (e.cap < 0) throw std::invalid_argument("negative capacity");
    if (e.owner == PartyId::kCoordinator)
      throw std::invalid_argument("edges must be owned by alice or bob");
  }
}

std::int64_t FlowNetwork::magnitude_bound() const {
  std::int64_t w = 1;
  for (const auto& e : edges) {
    w = std::max(w, e.cap);
    w = std::max(w, std::abs(e.cost));
  }
  for (std::int64_t d : demand) w = std::max(w, std::abs(d));
  return w;
}

DistributedLP incidence_lp(const FlowNetwork& net, int bits) {
  net.validate();
  const int m = net.m();
  std::vector<Triplet> ts;
  ts.reserve(static_cast<size_t>(m) * 2);
  for (int e = 0; e < m; ++e) {
    ts.push_back({e, net.edges[e].tail, -1.0});
    ts.push_back({e, net.edges[e].head, 1.0});
  }
  DistributedLP lp;
  lp.a = SparseMatrix::from_triplets(m, net.n, std::move(ts));
  lp.b.resize(net.n);
  for (int v = 0; v < net.n; ++v) lp.b[v] = static_cast<double>(net.demand[v]);
  lp.c.resize(m);
  lp.l = Eigen::VectorXd::Zero(m);
  lp.u.resize(m);
  for (int e = 0; e < m; ++e) {
    lp.c[e] = static_cast<double>(net.edges[e].cost);
    lp.u[e] = static_cast<double>(net.edges[e].cap);
  }
  lp.partition.owner.resize(static_cast<size_t>(m));
  for (int e = 0; e < m; ++e) lp.partition.owner[e] = net.edges[e].owner;
  lp.bits = bits;
  return lp;
}

ConditionCheck condition_bound_check(const FlowNetwork& net) {
  const DistributedLP lp = incidence_lp(net, 62);
  ConditionCheck out;
  out.kappa = gram_condition_number(lp.a.gram());
  out.bound = double(net.n) * std::sqrt(2.0 * net.n);
  out.holds = out.kappa <= out.bound;
  return out;
}

PerturbedCosts perturb_costs(const FlowNetwork& net, Channel& channel) {
  const int m = net.m();
  const std::int64_t w = net.magnitude_bound();
  PerturbedCosts pc;
  pc.denom = 4 * static_cast<std::int64_t>(m) * m * w * w;
  pc.z_num = channel.shared_uniform_int("perturb", m, 1, 2 * m * w);
  pc.cost.resize(m);
  for (int e = 0; e < m; ++e) {
    pc.cost[e] = static_cast<double>(net.edges[e].cost) +
                 static_cast<double>(pc.z_num[e]) /
                     static_cast<double>(pc.denom);
  }
  return pc;
}

int required_bits(const FlowNetwork& net) {
  // Setup payloads carry partial A^T x_init sums and ||c||_1 partials.
  std::vector<double> vertex_cap(static_cast<size_t>(net.n), 0.0);
  double c_l1 = 0.0;
  for (const auto& e : net.edges) {
    vertex_cap[e.tail] += static_cast<double>(e.cap);
    vertex_cap[e.head] += static_cast<double>(e.cap);
    c_l1 += std::abs(static_cast<double>(e.cost)) + 1.0;
  }
  double peak = static_cast<double>(net.magnitude_bound());
  for (double v : vertex_cap) peak = std::max(peak, v);
  peak = std::max(peak, c_l1);
  return ceil_log2(static_cast<std::int64_t>(peak) + 1) + 2;
}

FlowSolution mincost_flow(const FlowNetwork& net, Channel& channel,
                          const SolveOptions& opts) {
  net.validate();
  const int m = net.m();
  const int n = net.n;
  FlowSolution sol;
  sol.flow.assign(static_cast<size_t>(m), 0);

  if (!component_demands_balanced(net)) {
    sol.feasible = false;
    return sol;
  }
  if (m == 0) {
    sol.feasible = true;  // balanced components with no edges: all demands 0
    return sol;
  }

  const std::int64_t w = net.magnitude_bound();
  const Grounding g = ground_vertices(net);
  if (g.n_cols == 0) {
    // Single vertex components only; balanced means zero demand everywhere.
    sol.feasible = true;
    return sol;
  }

  const int retries = opts.max_retries >= 0
                          ? opts.max_retries
                          : ceil_log2(std::max(n, 2)) + 3;
  const double dw = static_cast<double>(w);
  const double dm = static_cast<double>(m);

  IpmOptions ipm = make_ipm_options(opts, m, g.n_cols);
  const double eps = ipm.consts.epsilon;
  const double mu_init = 100.0 * dm * dm * dw * dw * dw / eps;
  const double mu_target =
      std::min(std::pow(dm * dw, -opts.mu_target_exponent),
               1.0 / (120.0 * g.n_cols * dm * dm * dw * dw * dw));
  const double delta_prime = 0.08 / (dw + 1.0);
  const double delta_extract = 1.0 / 64.0;

  for (int attempt = 0; attempt <= retries; ++attempt) {
    ipm.seed = Rng::mix(opts.seed, static_cast<std::uint64_t>(attempt));
    const PerturbedCosts pc = perturb_costs(net, channel);
    DistributedLP lp =
        assemble_grounded_lp(net, g, pc.cost, channel.frac_bits());

    ModifiedLp mod;
    try {
      mod = build_modified_lp(lp, 1.0 / (12.0 * dm * dm * dw * dw * dw), ipm,
                              delta_prime, mu_init, &channel);
      PathResult pf = path_following(mod.lp, mod.init, mu_target,
                                     opts.mode, &channel, ipm);
      sol.iterations += pf.stats.iterations;
      FinalPoint fin = extract_final(mod.lp, pf.triple, delta_extract,
                                     opts.mode, &channel, ipm);

      // Auxiliary-star flow decides feasibility.
      const int aux = static_cast<int>(mod.aux_rows.size());
      if (aux > 0) {
        const double aux_inf = fin.x.tail(aux).cwiseAbs().maxCoeff();
        if (aux_inf >= 0.1) {
          sol.feasible = false;
          sol.retries = attempt;
          return sol;
        }
      }
      if (!fin.residual_within_delta) continue;

      std::vector<std::int64_t> f(static_cast<size_t>(m));
      for (int e = 0; e < m; ++e)
        f[static_cast<size_t>(e)] = std::llround(fin.x[e]);
      if (!flow_feasible_exact(net, f)) continue;
      std::vector<std::int64_t> c_scaled(static_cast<size_t>(m));
      for (int e = 0; e < m; ++e)
        c_scaled[static_cast<size_t>(e)] =
            net.edges[e].cost * pc.denom + pc.z_num[static_cast<size_t>(e)];
      if (residual_has_negative_cycle(net, f, c_scaled)) continue;

      sol.flow = std::move(f);
      sol.feasible = true;
      sol.retries = attempt;
      sol.cost = 0;
      for (int e = 0; e < m; ++e)
        sol.cost += net.edges[e].cost * sol.flow[static_cast<size_t>(e)];
      return sol;
    } catch (const NotCenteredError&) {
      continue;  // fresh perturbation; counts as a failed trial
    } catch (const SketchRetryError&) {
      continue;
    }
  }
  throw RetryExhaustedError("mincost_flow: no attempt verified after " +
                            std::to_string(retries + 1) + " trials");
}

MaxflowReduction maxflow_reduce(const FlowNetwork& net, int s, int t) {
  if (s == t) throw std::invalid_argument("source equals sink");
  net.validate();
  std::int64_t out_cap = 0, in_cap = 0;
  for (const auto& e : net.edges) {
    if (e.tail == s) out_cap += e.cap;
    if (e.head == t) in_cap += e.cap;
  }
  const std::int64_t big_flow = std::min(out_cap, in_cap);

  MaxflowReduction red;
  red.big_flow = big_flow;
  red.augmented = net;
  for (auto& e : red.augmented.edges) e.cost = 0;
  red.augmented.edges.push_back({s, t, big_flow, 1, PartyId::kAlice});
  red.eprime_index = net.m();
  red.augmented.demand.assign(static_cast<size_t>(net.n), 0);
  red.augmented.demand[s] = -big_flow;  // net inflow at the source
  red.augmented.demand[t] = big_flow;
  return red;
}

std::vector<ResidualEdge> residual_graph(const FlowNetwork& net,
                                         const std::vector<std::int64_t>& f,
                                         std::int64_t delta) {
  const std::int64_t cap_limit = 2 * static_cast<std::int64_t>(net.m()) * delta;
  std::vector<ResidualEdge> out;
  for (int e = 0; e < net.m(); ++e) {
    const auto& ed = net.edges[e];
    const std::int64_t fwd = ed.cap - f[static_cast<size_t>(e)];
    const std::int64_t bwd = f[static_cast<size_t>(e)];
    if (fwd >= delta)
      out.push_back({ed.tail, ed.head, std::min(fwd, cap_limit) / delta,
                     ed.owner, e, true});
    if (bwd >= delta)
      out.push_back({ed.head, ed.tail, std::min(bwd, cap_limit) / delta,
                     ed.owner, e, false});
  }
  return out;
}

FlowSolution maxflow_scaling(const FlowNetwork& net, int s, int t,
                             Channel& channel, const SolveOptions& opts) {
  if (s == t) throw std::invalid_argument("source equals sink");
  net.validate();
  const int m = net.m();
  FlowSolution sol;
  sol.flow.assign(static_cast<size_t>(m), 0);

  std::int64_t max_u = 0;
  for (const auto& e : net.edges) max_u = std::max(max_u, e.cap);
  if (m == 0 || max_u == 0) return sol;

  std::int64_t delta = 1;
  while (delta * 2 <= max_u) delta *= 2;  // 2^floor(log2 ||u||_inf)

  SolveOptions round_opts = opts;
  while (delta >= 1) {
    const std::vector<ResidualEdge> res =
        residual_graph(net, sol.flow, delta);
    FlowNetwork rnet;
    rnet.n = net.n;
    rnet.demand.assign(static_cast<size_t>(net.n), 0);
    for (const auto& re : res)
      rnet.edges.push_back({re.tail, re.head, re.cap, 0, re.owner});

    std::int64_t out_cap = 0, in_cap = 0;
    for (const auto& re : res) {
      if (re.tail == s) out_cap += re.cap;
      if (re.head == t) in_cap += re.cap;
    }
    if (std::min(out_cap, in_cap) > 0) {
      MaxflowReduction red = maxflow_reduce(rnet, s, t);
      round_opts.seed = Rng::mix(opts.seed, static_cast<std::uint64_t>(delta));
      FlowSolution inner = mincost_flow(red.augmented, channel, round_opts);
      if (!inner.feasible)
        throw Error("reduced max-flow instance reported infeasible");
      sol.iterations += inner.iterations;
      sol.retries += inner.retries;
      for (size_t j = 0; j < res.size(); ++j) {
        const auto& re = res[j];
        const std::int64_t df = delta * inner.flow[j];
        sol.flow[static_cast<size_t>(re.origin)] += re.forward ? df : -df;
      }
      for (int e = 0; e < m; ++e) {
        if (sol.flow[static_cast<size_t>(e)] < 0 ||
            sol.flow[static_cast<size_t>(e)] > net.edges[e].cap)
          throw Error("residual bookkeeping violated capacity bounds");
      }
    }
    delta /= 2;
  }

  sol.flow_value = 0;
  for (int e = 0; e < m; ++e) {
    if (net.edges[e].head == t) sol.flow_value += sol.flow[static_cast<size_t>(e)];
    if (net.edges[e].tail == t) sol.flow_value -= sol.flow[static_cast<size_t>(e)];
  }
  sol.cost = 0;
  sol.feasible = true;
  return sol;
}

}  // namespace commflow
