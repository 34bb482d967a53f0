#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "commflow/channel.hpp"
#include "commflow/ipm.hpp"
#include "commflow/lp.hpp"

namespace commflow {

// Directed graph with integral capacities, costs and vertex demands. The
// demand convention is required net inflow: sum of incoming minus outgoing
// flow at v must equal demand[v].
struct FlowNetwork {
  struct Edge {
    int tail;
    int head;
    std::int64_t cap;
    std::int64_t cost;
    PartyId owner;
  };
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::int64_t> demand;

  int m() const { return static_cast<int>(edges.size()); }
  void validate() const;
  // W: bound on |u|, |c|, |d| entries (at least 1).
  std::int64_t magnitude_bound() const;
};

struct FlowSolution {
  std::vector<std::int64_t> flow;
  bool feasible = true;
  std::int64_t cost = 0;
  std::int64_t flow_value = 0;
  std::int64_t iterations = 0;
  int retries = 0;
};

// Full (ungrounded) incidence LP: one row per edge, A_{e,tail} = -1,
// A_{e,head} = +1, bounds [0, u], objective c, rhs = demand.
DistributedLP incidence_lp(const FlowNetwork& net, int bits = 16);

struct ConditionCheck {
  double kappa;
  double bound;  // n * sqrt(2n)
  bool holds;
};
// Exact condition number of the incidence matrix over nonzero singular
// values (per connected component implicitly).
ConditionCheck condition_bound_check(const FlowNetwork& net);

struct PerturbedCosts {
  Eigen::VectorXd cost;             // c + z as doubles
  std::vector<std::int64_t> z_num;  // z_e = z_num / denom, z_num in [1, 2mW]
  std::int64_t denom;               // 4 m^2 W^2
};
// Lemma-8.10 perturbation drawn from shared randomness (zero bits).
PerturbedCosts perturb_costs(const FlowNetwork& net, Channel& channel);

// Exact min-cost flow through the IPM pipeline: perturb, solve the modified
// incidence LP, extract, feasibility-test the auxiliary flow, round, verify
// (conservation + negative-cycle certificate on exact scaled costs), retrying
// with fresh perturbations. Infeasibility is a value, not an exception.
FlowSolution mincost_flow(const FlowNetwork& net, Channel& channel,
                          const SolveOptions& opts);

struct MaxflowReduction {
  FlowNetwork augmented;  // costs replaced: 1 on e', 0 elsewhere
  int eprime_index;
  std::int64_t big_flow;  // F
};
// Max flow -> min cost flow: adds e' = (s, t) with capacity F, demands
// d_s = -F, d_t = +F (net-inflow convention). The max-flow value is
// F - f'_{e'}; per-edge flows carry over directly.
MaxflowReduction maxflow_reduce(const FlowNetwork& net, int s, int t);

// Algorithm-5 capacity scaling: rounds over G_f(Delta) with capacities
// scaled to < 2m, each solved via maxflow_reduce + mincost_flow.
FlowSolution maxflow_scaling(const FlowNetwork& net, int s, int t,
                             Channel& channel, const SolveOptions& opts);

// Residual graph at threshold Delta (edges with residual capacity < Delta
// dropped; capacities floor(min(res, 2m*Delta)/Delta)). Exposed for the
// scaling-invariant tests.
struct ResidualEdge {
  int tail;
  int head;
  std::int64_t cap;
  PartyId owner;
  int origin;  // original edge index
  bool forward;
};
std::vector<ResidualEdge> residual_graph(const FlowNetwork& net,
                                         const std::vector<std::int64_t>& f,
                                         std::int64_t delta);

// Wire-width needed to represent the instance (data plus the setup-phase
// aggregates that cross the channel).
int required_bits(const FlowNetwork& net);

}  // namespace commflow
