#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "commflow/channel.hpp"
#include "commflow/lp.hpp"
#include "commflow/sketch.hpp"

namespace commflow {

enum class StepMode { kSequential, kTwoParty };
enum class SamplingMode { kIdentity, kBernoulli };

// Tagged substreams shared by Alice and Bob (and mirrored by the sequential
// mode so both modes draw identically).
class SharedRandom {
 public:
  explicit SharedRandom(std::uint64_t seed) : seed_(seed) {}
  Rng stream(const std::string& tag);

 private:
  std::uint64_t seed_;
  std::map<std::string, std::uint64_t> counters_;
};

struct IpmOptions {
  StepConstants consts;
  SamplingMode sampling = SamplingMode::kIdentity;
  ChargeMode charge = ChargeMode::kFormula;
  SketchOptions sketch{};       // verify_dim forced to 0 in the hot loop
  double lambda_sketch = 0.0;   // 0 -> e^gamma (saturates sampling at desk scale)
  double bernoulli_cs = 1.0;
  double dual_residual_scale = 1e-6;  // threshold = scale * max(||c||_2, 1)
  double cond3_floor = 0.0;
  double c_start = 2.0;
  int check_every = 1;
  double lewis_tol = 1e-6;
  int lewis_max_iter = 200;
  std::uint64_t seed = 1;
};

struct NotCenteredError : Error {
  CenteringReport report;
  std::int64_t iteration = -1;
  NotCenteredError(const std::string& msg, CenteringReport rep,
                   std::int64_t iter = -1)
      : Error(msg), report(rep), iteration(iter) {}
};

CenteringReport check_centered(const DistributedLP& lp,
                               const CenteredTriple& triple,
                               const StepConstants& k,
                               double dual_residual_scale = 1e-6,
                               double cond3_floor = 0.0);

// Def-4.5 sampling matrix (diagonal returned as a vector). Identity mode is
// deterministic and trivially valid; bernoulli mode uses
// p_i = min(1, max(cs * sigma_i * log(m) / gamma^2, C_valid^2 |dr_i| / gamma)).
Eigen::VectorXd make_sampling_matrix(const Eigen::VectorXd& dr,
                                     const Eigen::VectorXd& sigma_bar,
                                     const StepConstants& k, SamplingMode mode,
                                     double cs, Rng& rng);

struct StepStats {
  double psi = 0.0;
  double y_norm = 0.0;
  std::int64_t clamp_count = 0;
};

// One short step (Algorithm 3 / Algorithm 4 in two-party mode). Uses mu from
// the triple; returns the state paired with mu_new. kappa_hat feeds the
// protocol-cost formulas.
CenteredTriple short_step(const DistributedLP& lp, const CenteredTriple& triple,
                          double mu_new, StepMode mode, Channel* channel,
                          const IpmOptions& opts, SharedRandom& shared,
                          double kappa_hat, StepStats* stats = nullptr);

struct PathStats {
  std::int64_t iterations = 0;
  double max_psi = 0.0;
  std::int64_t psi_over_m2 = 0;
  double final_mu = 0.0;
};

struct PathResult {
  CenteredTriple triple;
  PathStats stats;
};

// Algorithm 2: iterate short steps with mu <- (1-r) mu until mu <= mu_final.
PathResult path_following(const DistributedLP& lp, const CenteredTriple& init,
                          double mu_final, StepMode mode, Channel* channel,
                          const IpmOptions& opts);

// Closed-form iteration count of the mu schedule.
std::int64_t schedule_iterations(double mu_init, double mu_final, double r);

struct ModifiedLp {
  DistributedLP lp;
  CenteredTriple init;
  double mu_init = 0.0;
  int orig_rows = 0;
  std::vector<int> aux_rows;  // row index in lp -> constraint column
  double beta = 0.0;
  double xi = 0.0;
  double c_tilde = 0.0;
  double delta_prime = 0.0;
};

// Def-8.3-style reduction to an LP with a trivially centered initial point.
// Aux variables are one-sided ([0, 2 xt_init], block entries beta * sign) so
// the path drives them to zero when the original LP is feasible. When
// delta_prime_override is absent it is delta / (10 m 2^{2L}).
ModifiedLp build_modified_lp(const DistributedLP& lp, double delta,
                             const IpmOptions& opts,
                             std::optional<double> delta_prime_override =
                                 std::nullopt,
                             std::optional<double> mu_init_override =
                                 std::nullopt,
                             Channel* channel = nullptr);

struct FinalPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd s;
  double gap_estimate = 0.0;
  double primal_residual_inf = 0.0;
  bool residual_within_delta = true;
  int corrections = 0;
};

// User-facing solver knobs shared by the LP and flow pipelines. Constants are
// derived per LP instance from these.
struct SolveOptions {
  StepMode mode = StepMode::kTwoParty;
  SamplingMode sampling = SamplingMode::kIdentity;
  ChargeMode charge = ChargeMode::kFormula;
  bool conforming = false;  // paper-exact constants; infeasibly slow, kept for
                            // formula tests
  double epsilon = 0.125;
  double band = 2.0;
  double stability = 0.9;
  double lambda_sketch = 0.0;
  double mu_target_exponent = 6.0;  // flow pipelines
  int max_retries = -1;             // flow pipelines; -1 -> ceil(log2 n) + 3
  int check_every = 1;
  std::uint64_t seed = 1;
};

IpmOptions make_ipm_options(const SolveOptions& so, int m, int n);

struct LpSolveResult {
  Eigen::VectorXd x;  // original variables only
  double objective = 0.0;
  double primal_residual_inf = 0.0;
  std::int64_t iterations = 0;
  double gap_estimate = 0.0;
  bool non_conforming = false;
};

// End-to-end Theorem-1 pipeline: modified LP, path following from the trivial
// centered point down to mu_final = delta' ||c||_1 Xi / (10 n), final-point
// extraction, and truncation back to the original variables.
LpSolveResult solve_box_lp(const DistributedLP& lp, double delta,
                           Channel* channel, const SolveOptions& opts);

// Lemma-4.11-style final point: corrective Laplacian-type solves through
// sketch_solve until the primal residual is within delta (reported, never
// silently accepted).
FinalPoint extract_final(const DistributedLP& lp, const CenteredTriple& triple,
                         double delta, StepMode mode, Channel* channel,
                         const IpmOptions& opts);

}  // namespace commflow
