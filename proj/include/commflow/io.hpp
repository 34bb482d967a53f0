#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "commflow/flow.hpp"
#include "commflow/lp.hpp"
#include "commflow/transcript.hpp"

namespace commflow {

// Coordinate-list matrix text: one "row col value" triple per line, 0-indexed.
SparseMatrix load_coo(std::istream& is, int rows, int cols);
void save_coo(std::ostream& os, const SparseMatrix& a);

// LP JSON: {m, n, L, b, rows: [{owner, cols, vals, c, l, u}]}.
DistributedLP load_lp_json(std::istream& is);
void save_lp_json(std::ostream& os, const DistributedLP& lp);

struct GraphInput {
  FlowNetwork net;
  std::optional<int> source;
  std::optional<int> sink;
};

// Graph JSON mirror: {n, edges: [{tail, head, cap, cost, owner}], demand,
// source?, sink?}. DIMACS: "p min/max" with an "o a|b" ownership token per
// arc line; min-cost node lines carry supplies (positive = supplies flow),
// negated into the internal net-inflow convention.
GraphInput load_graph_json(std::istream& is);
GraphInput load_dimacs(std::istream& is);
void save_graph_json(std::ostream& os, const GraphInput& g);

struct SolutionSummary {
  Eigen::VectorXd x;
  double objective = 0.0;
  double primal_residual_inf = 0.0;
  std::int64_t iterations = 0;
  bool non_conforming_constants = false;
  std::string constants_mode;
};

std::string solution_json(const SolutionSummary& sol,
                          const Transcript& transcript);
std::string flow_solution_json(const FlowSolution& sol, bool maxflow_mode,
                               const Transcript& transcript);

}  // namespace commflow
