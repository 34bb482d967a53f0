#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "commflow/flow.hpp"
#include "commflow/lp.hpp"

namespace commflow {

// Exact combinatorial baselines, independent of the IPM code path. Integer
// arithmetic throughout the flow oracles.

struct MaxflowOracleResult {
  std::int64_t value = 0;
  std::vector<std::int64_t> flow;
};
// BFS augmenting paths (Edmonds-Karp).
MaxflowOracleResult oracle_maxflow(const FlowNetwork& net, int s, int t);

struct MincostOracleResult {
  bool feasible = false;
  std::int64_t cost = 0;
  std::vector<std::int64_t> flow;
};
// Successive shortest paths; requires no negative cycle within capacity.
MincostOracleResult oracle_mincost(const FlowNetwork& net);

struct LpOracleResult {
  double value = 0.0;
  Eigen::VectorXd x;
};
// Active-set vertex enumeration for n <= 3, m <= 24 (guarded).
LpOracleResult oracle_lp(const DistributedLP& lp);

}  // namespace commflow
