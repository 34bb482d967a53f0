#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "commflow/flow.hpp"
#include "commflow/ipm.hpp"

namespace commflow {

struct RunConfig {
  std::string command;  // solve-lp | mincost | maxflow | experiment | verify
  std::string input_path;
  std::string format = "dimacs";  // dimacs | json
  int bits = 16;
  std::uint64_t seed = 1;
  double delta = 1e-3;
  std::string mode = "two_party";      // sequential | two_party
  std::string sampling = "identity";   // identity | bernoulli
  std::string charge_mode = "formula";  // formula | actual
  std::string out_dir = ".";
  // experiment
  std::vector<int> sizes{8, 16, 32, 64};
  std::string family = "complete";  // complete | bipartite | grid | random
  std::string cap_dist = "fixed";   // fixed | uniform
  std::int64_t cap_max = 16;
  double density = 0.5;
  int jobs = 1;
  // verify
  std::string solution_path;
  std::string problem = "maxflow";  // maxflow | mincost
};

SolveOptions solve_options_from(const RunConfig& cfg);

// Seeded experiment graph families. s = 0, t = n_total - 1.
struct ExperimentGraph {
  FlowNetwork net;
  int s = 0;
  int t = 0;
};
ExperimentGraph make_experiment_graph(const std::string& family, int n,
                                      std::int64_t cap_max,
                                      const std::string& cap_dist,
                                      double density, std::uint64_t seed);

struct ExperimentRow {
  int n = 0;
  int m = 0;
  std::int64_t total_bits = 0;
  std::int64_t iterations = 0;
  double wall_time = 0.0;
};
std::vector<ExperimentRow> run_experiment(const RunConfig& cfg);
std::string experiment_csv(const std::vector<ExperimentRow>& rows);

// Full command dispatch; returns the process exit status
// (0 ok, 2 infeasible, 1 error).
int run(const RunConfig& cfg);

// Argument parsing + run().
int cli_main(int argc, char** argv);

int log_level();  // COMMFLOW_LOG, default 0

}  // namespace commflow
