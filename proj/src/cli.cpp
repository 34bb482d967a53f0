#include "commflow/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "commflow/io.hpp"
#include "commflow/oracle.hpp"

namespace commflow {

int log_level() {
  static const int level = [] {
    const char* v = std::getenv("COMMFLOW_LOG");
    return v ? std::atoi(v) : 0;
  }();
  return level;
}

SolveOptions solve_options_from(const RunConfig& cfg) {
  SolveOptions so;
  so.mode = cfg.mode == "sequential" ? StepMode::kSequential
                                     : StepMode::kTwoParty;
  so.sampling = cfg.sampling == "bernoulli" ? SamplingMode::kBernoulli
                                            : SamplingMode::kIdentity;
  so.charge = cfg.charge_mode == "actual" ? ChargeMode::kActual
                                          : ChargeMode::kFormula;
  so.seed = cfg.seed;
  return so;
}

ExperimentGraph make_experiment_graph(const std::string& family, int n,
                                      std::int64_t cap_max,
                                      const std::string& cap_dist,
                                      double density, std::uint64_t seed) {
  Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(n)));
  auto cap = [&]() -> std::int64_t {
    return cap_dist == "uniform" ? rng.uniform_int(1, cap_max) : cap_max;
  };
  auto owner = [&]() {
    return rng.uniform() < 0.5 ? PartyId::kAlice : PartyId::kBob;
  };
  ExperimentGraph g;
  if (family == "complete") {
    g.net.n = n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) g.net.edges.push_back({i, j, cap(), 0, owner()});
    g.s = 0;
    g.t = n - 1;
  } else if (family == "bipartite") {
    // s -> left layer -> right layer -> t, complete in the middle.
    const int half = std::max(1, n / 2);
    g.net.n = 2 * half + 2;
    g.s = 0;
    g.t = 2 * half + 1;
    for (int i = 0; i < half; ++i)
      g.net.edges.push_back({g.s, 1 + i, cap(), 0, owner()});
    for (int i = 0; i < half; ++i)
      for (int j = 0; j < half; ++j)
        g.net.edges.push_back({1 + i, 1 + half + j, cap(), 0, owner()});
    for (int j = 0; j < half; ++j)
      g.net.edges.push_back({1 + half + j, g.t, cap(), 0, owner()});
  } else if (family == "grid") {
    int side = 2;
    while (side * side < n) ++side;
    g.net.n = side * side;
    auto id = [side](int r, int c) { return r * side + c; };
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) {
        if (c + 1 < side)
          g.net.edges.push_back({id(r, c), id(r, c + 1), cap(), 0, owner()});
        if (r + 1 < side)
          g.net.edges.push_back({id(r, c), id(r + 1, c), cap(), 0, owner()});
      }
    g.s = 0;
    g.t = side * side - 1;
  } else if (family == "random") {
    g.net.n = n;
    // Random spanning path for connectivity, then density-driven extras.
    for (int v = 0; v + 1 < n; ++v)
      g.net.edges.push_back({v, v + 1, cap(), 0, owner()});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j || (j == i + 1)) continue;
        if (rng.uniform() < density)
          g.net.edges.push_back({i, j, cap(), 0, owner()});
      }
    g.s = 0;
    g.t = n - 1;
  } else {
    throw std::invalid_argument("unknown graph family '" + family + "'");
  }
  g.net.demand.assign(static_cast<size_t>(g.net.n), 0);
  return g;
}

std::vector<ExperimentRow> run_experiment(const RunConfig& cfg) {
  const SolveOptions base = solve_options_from(cfg);
  auto run_one = [&](int n) -> ExperimentRow {
    ExperimentGraph g = make_experiment_graph(cfg.family, n, cfg.cap_max,
                                              cfg.cap_dist, cfg.density,
                                              cfg.seed);
    const int bits = std::max(cfg.bits, required_bits(g.net));
    Channel channel(bits, Rng::mix(cfg.seed, static_cast<std::uint64_t>(n)));
    SolveOptions so = base;
    so.seed = Rng::mix(cfg.seed, static_cast<std::uint64_t>(n) * 7919u);
    const auto start = std::chrono::steady_clock::now();
    FlowSolution sol = maxflow_scaling(g.net, g.s, g.t, channel, so);
    const auto stop = std::chrono::steady_clock::now();
    ExperimentRow row;
    row.n = n;
    row.m = g.net.m();
    row.total_bits = channel.transcript().total_bits();
    row.iterations = sol.iterations;
    row.wall_time = std::chrono::duration<double>(stop - start).count();
    if (log_level() >= 1)
      std::cerr << "[experiment] n=" << n << " m=" << row.m
                << " bits=" << row.total_bits << " iters=" << row.iterations
                << " wall=" << row.wall_time << "s\n";
    return row;
  };

  std::vector<ExperimentRow> rows;
  if (cfg.jobs > 1) {
    std::vector<std::future<ExperimentRow>> futs;
    for (int n : cfg.sizes)
      futs.push_back(std::async(std::launch::async, run_one, n));
    for (auto& f : futs) rows.push_back(f.get());
  } else {
    for (int n : cfg.sizes) rows.push_back(run_one(n));
  }
  return rows;
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  os << "n,m,total_bits,iterations,wall_time\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.m << ',' << r.total_bits << ',' << r.iterations
       << ',' << r.wall_time << '\n';
  return os.str();
}

namespace {

GraphInput load_graph(const RunConfig& cfg) {
  std::ifstream in(cfg.input_path);
  if (!in) throw Error("cannot open input file " + cfg.input_path);
  return cfg.format == "json" ? load_graph_json(in) : load_dimacs(in);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

void write_transcript(const RunConfig& cfg, const Channel& channel) {
  std::ostringstream os;
  channel.transcript().write_csv(os);
  write_file(cfg.out_dir + "/transcript.csv", os.str());
}

int run_solve_lp(const RunConfig& cfg) {
  std::ifstream in(cfg.input_path);
  if (!in) throw Error("cannot open input file " + cfg.input_path);
  DistributedLP lp = load_lp_json(in);
  const int bits = std::max(cfg.bits, lp.bits);
  Channel channel(bits, cfg.seed);
  lp.bits = bits;
  SolveOptions so = solve_options_from(cfg);
  LpSolveResult res = solve_box_lp(lp, cfg.delta, &channel, so);
  SolutionSummary sum;
  sum.x = res.x;
  sum.objective = res.objective;
  sum.primal_residual_inf = res.primal_residual_inf;
  sum.iterations = res.iterations;
  sum.non_conforming_constants = res.non_conforming;
  write_file(cfg.out_dir + "/solution.json",
             solution_json(sum, channel.transcript()) + "\n");
  write_transcript(cfg, channel);
  return 0;
}

int run_flow(const RunConfig& cfg, bool maxflow_mode) {
  GraphInput g = load_graph(cfg);
  const int bits = std::max(cfg.bits, required_bits(g.net));
  Channel channel(bits, cfg.seed);
  SolveOptions so = solve_options_from(cfg);
  FlowSolution sol;
  if (maxflow_mode) {
    if (!g.source || !g.sink)
      throw Error("max-flow input needs source and sink");
    sol = maxflow_scaling(g.net, *g.source, *g.sink, channel, so);
  } else {
    sol = mincost_flow(g.net, channel, so);
  }
  write_file(cfg.out_dir + "/solution.json",
             flow_solution_json(sol, maxflow_mode, channel.transcript()) +
                 "\n");
  write_transcript(cfg, channel);
  return sol.feasible ? 0 : 2;
}

int run_verify(const RunConfig& cfg) {
  GraphInput g = load_graph(cfg);
  std::ifstream in(cfg.solution_path);
  if (!in) throw Error("cannot open solution file " + cfg.solution_path);
  nlohmann::json sol_json;
  in >> sol_json;

  if (cfg.problem == "maxflow") {
    if (!g.source || !g.sink) throw Error("verify maxflow needs source/sink");
    const auto oracle = oracle_maxflow(g.net, *g.source, *g.sink);
    const std::int64_t claimed = sol_json.at("flow_value").get<std::int64_t>();
    if (claimed != oracle.value) {
      std::cerr << "mismatch: claimed " << claimed << ", oracle "
                << oracle.value << "\n";
      return 1;
    }
  } else {
    const auto oracle = oracle_mincost(g.net);
    const bool claimed_feasible = sol_json.at("feasible").get<bool>();
    if (claimed_feasible != oracle.feasible) {
      std::cerr << "mismatch: feasibility differs from oracle\n";
      return 1;
    }
    if (oracle.feasible) {
      const std::int64_t claimed = sol_json.at("cost").get<std::int64_t>();
      if (claimed != oracle.cost) {
        std::cerr << "mismatch: claimed cost " << claimed << ", oracle "
                  << oracle.cost << "\n";
        return 1;
      }
    }
  }
  return 0;
}

int run_experiment_cmd(const RunConfig& cfg) {
  const auto rows = run_experiment(cfg);
  write_file(cfg.out_dir + "/growth.csv", experiment_csv(rows));
  return 0;
}

}  // namespace

int run(const RunConfig& cfg) {
  if (cfg.command == "solve-lp") return run_solve_lp(cfg);
  if (cfg.command == "mincost") return run_flow(cfg, false);
  if (cfg.command == "maxflow") return run_flow(cfg, true);
  if (cfg.command == "experiment") return run_experiment_cmd(cfg);
  if (cfg.command == "verify") return run_verify(cfg);
  throw Error("unknown command " + cfg.command);
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Two-party communication simulation of an interior-point "
               "solver for box LPs, min-cost flow and max flow"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input_path, "input file");
    sub->add_option("--format", cfg.format, "dimacs|json")
        ->check(CLI::IsMember({"dimacs", "json"}));
    sub->add_option("--bits", cfg.bits, "fractional bits L (default 16)");
    sub->add_option("--seed", cfg.seed, "rng seed");
    sub->add_option("--delta", cfg.delta, "accuracy parameter");
    sub->add_option("--mode", cfg.mode, "sequential|two_party")
        ->check(CLI::IsMember({"sequential", "two_party"}));
    sub->add_option("--sampling", cfg.sampling, "identity|bernoulli")
        ->check(CLI::IsMember({"identity", "bernoulli"}));
    sub->add_option("--charge-mode", cfg.charge_mode, "formula|actual")
        ->check(CLI::IsMember({"formula", "actual"}));
    sub->add_option("--out-dir", cfg.out_dir, "output directory");
  };

  CLI::App* lp = app.add_subcommand("solve-lp", "solve a box LP from JSON");
  add_common(lp);
  lp->get_option("--input")->required();

  CLI::App* mc = app.add_subcommand("mincost", "exact min-cost flow");
  add_common(mc);
  mc->get_option("--input")->required();

  CLI::App* mf = app.add_subcommand("maxflow", "exact max flow");
  add_common(mf);
  mf->get_option("--input")->required();

  CLI::App* ex = app.add_subcommand("experiment",
                                    "communication growth experiment");
  add_common(ex);
  ex->add_option("--sizes", cfg.sizes, "instance sizes")->delimiter(',');
  ex->add_option("--family", cfg.family, "complete|bipartite|grid|random")
      ->check(CLI::IsMember({"complete", "bipartite", "grid", "random"}));
  ex->add_option("--cap-dist", cfg.cap_dist, "fixed|uniform")
      ->check(CLI::IsMember({"fixed", "uniform"}));
  ex->add_option("--cap-max", cfg.cap_max, "capacity bound");
  ex->add_option("--density", cfg.density, "random family density");
  ex->add_option("--jobs", cfg.jobs, "parallel workers");
  cfg.bits = 16;

  CLI::App* vf = app.add_subcommand("verify",
                                    "replay a solution against the oracle");
  add_common(vf);
  vf->get_option("--input")->required();
  vf->add_option("--solution", cfg.solution_path, "solution JSON")->required();
  vf->add_option("--problem", cfg.problem, "maxflow|mincost")
      ->check(CLI::IsMember({"maxflow", "mincost"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  cfg.command = app.get_subcommands().front()->get_name();
  // Experiments default to a wider wire so quantization noise stays far
  // below the step size on the larger instances.
  if (cfg.command == "experiment" && ex->get_option("--bits")->empty())
    cfg.bits = 32;

  try {
    return run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace commflow
