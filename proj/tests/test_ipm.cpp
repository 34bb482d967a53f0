#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "commflow/barrier.hpp"
#include "commflow/ipm.hpp"
#include "commflow/oracle.hpp"
#include "test_util.hpp"

using namespace commflow;
using commflow::testutil::random_feasible_lp;

namespace {

SolveOptions sequential_opts(std::uint64_t seed = 1) {
  SolveOptions so;
  so.mode = StepMode::kSequential;
  so.seed = seed;
  return so;
}

// Exactly centered, exactly feasible triple at the given mu.
CenteredTriple centered_triple(const DistributedLP& lp, double mu,
                               const IpmOptions& opts) {
  CenteredTriple t;
  t.x = 0.5 * (lp.l + lp.u);
  t.mu = mu;
  const BarrierVectors bd = barrier_derivatives(t.x, lp.l, lp.u);
  const SparseMatrix scaled = lp.a.row_scaled(bd.d2.cwiseSqrt().cwiseInverse());
  t.tau = lewis_weights(scaled, central_path_p(lp.m(), lp.n()),
                        Eigen::VectorXd::Constant(lp.m(),
                                                  double(lp.n()) / lp.m()),
                        opts.lewis_tol, opts.lewis_max_iter);
  t.s = (-mu * t.tau.w.array() * bd.d1.array()).matrix();
  return t;
}

}  // namespace

TEST_CASE("barrier: closed forms and domain") {
  auto b = barrier(1.0, 0.0, 2.0);
  CHECK(b.phi == doctest::Approx(0.0));
  CHECK(b.d1 == doctest::Approx(0.0));
  CHECK(b.d2 == doctest::Approx(2.0));

  auto b2 = barrier(0.5, 0.0, 2.0);
  CHECK(b2.d1 == doctest::Approx(-4.0 / 3.0));
  CHECK(b2.d2 == doctest::Approx(4.0 + 4.0 / 9.0));

  CHECK_THROWS_AS(barrier(0.0, 0.0, 2.0), BarrierDomainError);
  CHECK_THROWS_AS(barrier(2.5, 0.0, 2.0), BarrierDomainError);
}

TEST_CASE("barrier: self-concordance |phi'| <= sqrt(phi'')") {
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const double lo = -5.0 + 4.0 * rng.uniform();
    const double hi = lo + 0.1 + 6.0 * rng.uniform();
    const double x = lo + (hi - lo) * (0.001 + 0.998 * rng.uniform());
    auto b = barrier(x, lo, hi);
    CHECK(std::abs(b.d1) <= std::sqrt(b.d2) * (1 + 1e-12));
  }
}

TEST_CASE("step constants: conforming formulas hold verbatim") {
  const int m = 40, n = 5;
  auto k = StepConstants::conforming_constants(m, n);
  CHECK(k.alpha == doctest::Approx(1.0 / (4.0 * std::log(4.0 * m / n))));
  CHECK(k.epsilon == doctest::Approx(k.alpha / k.C));
  CHECK(k.lambda ==
        doctest::Approx(k.C * std::log(k.C * m / (k.epsilon * k.epsilon)) /
                        k.epsilon));
  CHECK(k.gamma == doctest::Approx(k.epsilon / (k.C * k.lambda)));
  CHECK(k.C_norm == doctest::Approx(k.C / (1.0 - k.p)));
  CHECK(k.r == doctest::Approx(k.epsilon * k.gamma /
                               (k.C_norm * std::sqrt(double(n)))));
  CHECK(k.conforming);
}

TEST_CASE("step constants: practical keeps the r identity") {
  auto k = StepConstants::practical(100, 9);
  CHECK(k.r == doctest::Approx(k.epsilon * k.gamma /
                               (k.C_norm * std::sqrt(9.0))));
  CHECK_FALSE(k.conforming);
  CHECK(k.C_valid == k.C_norm);
  CHECK(k.epsilon == doctest::Approx(0.125));
}

TEST_CASE("make_sampling_matrix: identity and capped bernoulli") {
  Rng rng(3);
  auto k = StepConstants::practical(20, 4);
  Eigen::VectorXd dr(4);
  dr << 1.0, -2.0, 0.5, 0.0;
  Eigen::VectorXd sigma = Eigen::VectorXd::Constant(4, 0.5);
  auto r_id = make_sampling_matrix(dr, sigma, k, SamplingMode::kIdentity, 1.0,
                                   rng);
  CHECK((r_id.array() == 1.0).all());
  // Large leverage term saturates every probability: R = I.
  auto r_cap = make_sampling_matrix(dr, sigma, k, SamplingMode::kBernoulli,
                                    1e9, rng);
  CHECK((r_cap.array() == 1.0).all());
}

TEST_CASE("make_sampling_matrix: Def-4.5 moments hold empirically") {
  auto k = StepConstants::practical(64, 16);
  Eigen::VectorXd dr(3);
  dr << 2.0e-3, -1.0e-3, 5.0e-4;
  // Tiny leverage so the step term drives the probabilities.
  Eigen::VectorXd sigma = Eigen::VectorXd::Constant(3, 1e-12);
  const int trials = 20000;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd second = Eigen::VectorXd::Zero(3);
  Rng rng(17);
  for (int t = 0; t < trials; ++t) {
    auto r = make_sampling_matrix(dr, sigma, k, SamplingMode::kBernoulli, 1.0,
                                  rng);
    mean += r;
    second += (r.array() * dr.array()).square().matrix();
  }
  mean /= trials;
  second /= trials;
  for (int i = 0; i < 3; ++i) {
    const double p =
        std::min(1.0, k.C_valid * k.C_valid * std::abs(dr[i]) / k.gamma);
    const double se = std::sqrt((1.0 - p) / (p * trials));
    CHECK(std::abs(mean[i] - 1.0) <= 4.0 * se + 1e-9);
    const double var = second[i] - dr[i] * dr[i] * (2.0 * mean[i] - 1.0);
    CHECK(var <= k.gamma * std::abs(dr[i]) / (k.C_valid * k.C_valid) * 1.2 +
                     1e-12);
  }
}

TEST_CASE("check_centered: exact center has zero residuals") {
  Rng rng(5);
  auto lp = random_feasible_lp(18, 4, rng);
  lp.b = lp.a.apply_transpose(0.5 * (lp.l + lp.u));  // center the box
  auto ipm = make_ipm_options(sequential_opts(), lp.m(), lp.n());
  // s = -mu tau phi' + c - c: build from the definitional center with the
  // dual column z = 0 and cost c = s.
  auto t = centered_triple(lp, 10.0, ipm);
  DistributedLP lp2 = lp;
  lp2.c = t.s;  // s - c = 0 is in range(A)
  auto rep = check_centered(lp2, t, ipm.consts);
  CHECK(rep.centrality_norm <= 1e-10);
  CHECK(rep.dual_residual <= 1e-8);
  CHECK(rep.primal_residual_weighted <= 1e-8);
  CHECK(rep.is_centered);

  // Perturbing x by one quantization step changes the report continuously.
  CenteredTriple t2 = t;
  t2.x[0] += std::ldexp(1.0, -16);
  auto rep2 = check_centered(lp2, t2, ipm.consts);
  CHECK(std::isfinite(rep2.centrality_norm));
  CHECK(rep2.centrality_norm < ipm.consts.epsilon);
}

TEST_CASE("short_step at an exact center moves nothing but infeasibility") {
  Rng rng(9);
  auto lp = random_feasible_lp(16, 3, rng);
  lp.b = lp.a.apply_transpose(0.5 * (lp.l + lp.u));
  auto ipm = make_ipm_options(sequential_opts(), lp.m(), lp.n());
  auto t = centered_triple(lp, 5.0, ipm);
  lp.c = t.s;
  SharedRandom shared(1);
  const double mu_new = (1.0 - ipm.consts.r) * t.mu;
  auto t2 = short_step(lp, t, mu_new, StepMode::kSequential, nullptr, ipm,
                       shared, 10.0);
  // y = 0 => g = 0 => ds = 0; feasible => d2 = 0 so x is unchanged too.
  CHECK((t2.s - t.s).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((t2.x - t.x).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(t2.mu == doctest::Approx(mu_new));
}

TEST_CASE("short_step rejects an oversized mu jump and an uncentered start") {
  Rng rng(10);
  auto lp = random_feasible_lp(14, 3, rng);
  lp.b = lp.a.apply_transpose(0.5 * (lp.l + lp.u));
  auto ipm = make_ipm_options(sequential_opts(), lp.m(), lp.n());
  auto t = centered_triple(lp, 5.0, ipm);
  lp.c = t.s;
  SharedRandom shared(1);
  CHECK_THROWS_AS(short_step(lp, t, 0.5 * t.mu, StepMode::kSequential,
                             nullptr, ipm, shared, 10.0),
                  StepTooLargeError);
  CenteredTriple bad = t;
  bad.s = bad.s.array() + 10.0 * bad.mu;  // wreck the centrality
  CHECK_THROWS_AS(short_step(lp, bad, (1 - ipm.consts.r) * t.mu,
                             StepMode::kSequential, nullptr, ipm, shared,
                             10.0),
                  NotCenteredError);
}

TEST_CASE("gradient of Psi matches finite differences") {
  const double lambda = 16.0;
  auto psi = [&](const Eigen::VectorXd& y) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) s += std::cosh(lambda * y[i]);
    return s;
  };
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd y(6);
    for (int i = 0; i < 6; ++i)
      y[i] = (20.0 / lambda) * (2.0 * rng.uniform() - 1.0);
    const int i = static_cast<int>(rng.uniform_int(0, 5));
    const double h = 1e-6 * std::max(1.0, std::abs(y[i]));
    Eigen::VectorXd yp = y, ym = y;
    yp[i] += h;
    ym[i] -= h;
    const double fd = (psi(yp) - psi(ym)) / (2.0 * h);
    const double an = lambda * std::sinh(lambda * y[i]);
    CHECK(fd == doctest::Approx(an).epsilon(1e-5));
  }
}

TEST_CASE("schedule: closed-form iteration counts") {
  CHECK(schedule_iterations(10.0, 10.0, 0.01) == 0);
  CHECK(schedule_iterations(std::exp(1.0), 1.0, 0.01) == 100);
}

TEST_CASE("build_modified_lp: hand toy") {
  DistributedLP lp;
  lp.a = SparseMatrix::from_triplets(2, 1, {{0, 0, 1.0}, {1, 0, 1.0}});
  lp.b = Eigen::VectorXd::Constant(1, 3.0);
  lp.c = Eigen::VectorXd::Ones(2);
  lp.l = Eigen::VectorXd::Zero(2);
  lp.u = Eigen::VectorXd::Constant(2, 2.0);
  lp.partition = RowPartition::all(PartyId::kAlice, 2);
  lp.bits = 4;
  auto ipm = make_ipm_options(sequential_opts(), 2, 1);
  auto mod = build_modified_lp(lp, 1e-3, ipm);

  CHECK(mod.xi == doctest::Approx(2.0));
  CHECK(mod.beta == doctest::Approx(0.5));  // ||b - A^T x_init||_inf / Xi = 1/2
  REQUIRE(mod.aux_rows.size() == 1);
  const int aux = 2;
  CHECK(mod.init.x[aux] == doctest::Approx(2.0));     // xt_init = 1/beta
  CHECK(mod.lp.l[aux] == doctest::Approx(0.0));        // one-sided aux box
  CHECK(mod.lp.u[aux] == doctest::Approx(4.0));        // 2 * xt_init
  const double delta_prime = 1e-3 / (10.0 * 2 * std::ldexp(1.0, 8));
  CHECK(mod.delta_prime == doctest::Approx(delta_prime));
  CHECK(mod.c_tilde == doctest::Approx(2.0 * 2.0 / delta_prime));
  CHECK(mod.mu_init ==
        doctest::Approx(8.0 * 2 * 2.0 * 2.0 / (ipm.consts.epsilon *
                                               delta_prime)));
  // Aux block entry carries the residual sign (+1 here).
  CHECK(mod.lp.a.row_vals(aux)[0] == doctest::Approx(0.5));
  // The initial point satisfies the equality exactly.
  const auto r = mod.lp.a.apply_transpose(mod.init.x) - mod.lp.b;
  CHECK(r.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("build_modified_lp: beta = 0 shortcut") {
  Rng rng(15);
  auto lp = random_feasible_lp(10, 2, rng);
  lp.b = lp.a.apply_transpose(0.5 * (lp.l + lp.u));
  auto ipm = make_ipm_options(sequential_opts(), lp.m(), lp.n());
  auto mod = build_modified_lp(lp, 1e-3, ipm);
  CHECK(mod.beta == 0.0);
  CHECK(mod.aux_rows.empty());
  CHECK(mod.lp.m() == lp.m());
}

TEST_CASE("build_modified_lp: constructed initial point is centered") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    const int m = n + 4 + static_cast<int>(rng.uniform_int(0, 12));
    auto lp = random_feasible_lp(m, n, rng);
    auto ipm = make_ipm_options(sequential_opts(), m, n);
    auto mod = build_modified_lp(lp, 1e-3, ipm);
    auto rep = check_centered(mod.lp, mod.init, ipm.consts);
    CHECK(rep.is_centered);
  }
}

TEST_CASE("path_following: mu schedule and iteration count") {
  Rng rng(23);
  auto lp = random_feasible_lp(20, 4, rng);
  auto ipm = make_ipm_options(sequential_opts(7), lp.m(), lp.n());
  auto mod = build_modified_lp(lp, 1e-3, ipm);
  ipm = make_ipm_options(sequential_opts(7), mod.lp.m(), mod.lp.n());
  const double ratio = std::exp(2.0);
  const double mu_final = mod.mu_init / ratio;
  auto res = path_following(mod.lp, mod.init, mu_final, StepMode::kSequential,
                            nullptr, ipm);
  const auto expected =
      schedule_iterations(mod.mu_init, mu_final, ipm.consts.r);
  CHECK(res.stats.iterations == expected);
  CHECK(res.triple.mu <= mu_final);
  CHECK(res.triple.mu ==
        doctest::Approx(mod.mu_init *
                        std::pow(1.0 - ipm.consts.r,
                                 static_cast<double>(res.stats.iterations)))
            .epsilon(1e-10));
  CHECK(res.stats.max_psi <= double(mod.lp.m()) * mod.lp.m());
  // Box invariance held at every accepted step, so the final x is interior.
  for (int i = 0; i < mod.lp.m(); ++i) {
    CHECK(res.triple.x[i] > mod.lp.l[i]);
    CHECK(res.triple.x[i] < mod.lp.u[i]);
  }

  // mu_final = mu_init: zero iterations.
  auto res0 = path_following(mod.lp, mod.init, mod.mu_init,
                             StepMode::kSequential, nullptr, ipm);
  CHECK(res0.stats.iterations == 0);
}

TEST_CASE("path_following: slack feasibility along the run") {
  Rng rng(29);
  auto lp = random_feasible_lp(16, 3, rng);
  auto ipm = make_ipm_options(sequential_opts(11), lp.m(), lp.n());
  auto mod = build_modified_lp(lp, 1e-3, ipm);
  ipm = make_ipm_options(sequential_opts(11), mod.lp.m(), mod.lp.n());
  ipm.check_every = 1;  // full Def-4.4 check every iteration
  auto res = path_following(mod.lp, mod.init, mod.mu_init / 50.0,
                            StepMode::kSequential, nullptr, ipm);
  auto rep = check_centered(mod.lp, res.triple, ipm.consts);
  CHECK(rep.is_centered);
  CHECK(rep.dual_residual <= 1e-6 * std::max(mod.lp.c.norm(), 1.0));
}

TEST_CASE("mode equivalence at L = 52 with identity sampling") {
  Rng rng(31);
  auto lp = random_feasible_lp(14, 3, rng);
  auto base = make_ipm_options(sequential_opts(3), lp.m(), lp.n());
  auto mod = build_modified_lp(lp, 1e-3, base);
  auto ipm = make_ipm_options(sequential_opts(3), mod.lp.m(), mod.lp.n());
  const double mu_final = mod.mu_init / 100.0;

  auto seq = path_following(mod.lp, mod.init, mu_final, StepMode::kSequential,
                            nullptr, ipm);

  Channel channel(52, 3);
  auto mod2 = build_modified_lp(lp, 1e-3, base, std::nullopt, std::nullopt,
                                &channel);
  auto tp = path_following(mod2.lp, mod2.init, mu_final, StepMode::kTwoParty,
                           &channel, ipm);
  REQUIRE(seq.stats.iterations == tp.stats.iterations);
  CHECK((seq.triple.x - tp.triple.x).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("two-party step traffic: 8n scalars of vector payload per step") {
  Rng rng(37);
  auto lp = random_feasible_lp(12, 3, rng);
  auto base = make_ipm_options(sequential_opts(5), lp.m(), lp.n());
  Channel channel(24, 5);
  auto mod = build_modified_lp(lp, 1e-3, base, std::nullopt, std::nullopt,
                               &channel);
  auto ipm = make_ipm_options(sequential_opts(5), mod.lp.m(), mod.lp.n());
  const auto before = channel.transcript().events().size();
  SharedRandom shared(5);
  short_step(mod.lp, mod.init, (1.0 - ipm.consts.r) * mod.mu_init,
             StepMode::kTwoParty, &channel, ipm, shared, 10.0);
  std::int64_t vector_scalars = 0;
  int vector_events = 0;
  bool saw_lewis = false, saw_sketch = false;
  for (size_t i = before; i < channel.transcript().events().size(); ++i) {
    const auto& e = channel.transcript().events()[i];
    if (e.phase == "step.vectors") {
      vector_scalars += e.elements;
      ++vector_events;
    }
    saw_lewis |= e.phase == "lewis";
    saw_sketch |= e.phase.rfind("sketch", 0) == 0;
  }
  CHECK(vector_events == 8);
  CHECK(vector_scalars == 8 * mod.lp.n());
  CHECK(saw_lewis);
  CHECK(saw_sketch);
}

TEST_CASE("extract_final: already-feasible point needs no correction") {
  Rng rng(41);
  auto lp = random_feasible_lp(14, 3, rng);
  lp.b = lp.a.apply_transpose(0.5 * (lp.l + lp.u));
  auto ipm = make_ipm_options(sequential_opts(), lp.m(), lp.n());
  auto t = centered_triple(lp, 1.0, ipm);
  lp.c = t.s;
  auto fin = extract_final(lp, t, 1e-3, StepMode::kSequential, nullptr, ipm);
  CHECK(fin.corrections == 0);
  CHECK(fin.primal_residual_inf <= 1e-9);
  CHECK(fin.residual_within_delta);
}

TEST_CASE("solve_box_lp: end to end against the tiny-LP oracle") {
  DistributedLP lp;
  lp.a = SparseMatrix::from_triplets(2, 1, {{0, 0, 1.0}, {1, 0, 1.0}});
  lp.b = Eigen::VectorXd::Constant(1, 3.0);
  lp.c = Eigen::VectorXd(2);
  lp.c << 1.0, 2.0;
  lp.l = Eigen::VectorXd::Zero(2);
  lp.u = Eigen::VectorXd::Constant(2, 2.0);
  lp.partition = RowPartition::all(PartyId::kAlice, 2);
  lp.bits = 8;

  const double delta = 1e-3;
  SolveOptions so = sequential_opts(17);
  auto res = solve_box_lp(lp, delta, nullptr, so);
  auto oracle = oracle_lp(lp);
  CHECK(oracle.value == doctest::Approx(4.0));  // min x1 + 2 x2 on the segment
  CHECK(res.primal_residual_inf <= delta);
  CHECK(res.objective <= oracle.value + delta);
  for (int i = 0; i < 2; ++i) {
    CHECK(res.x[i] >= lp.l[i] - 1e-9);
    CHECK(res.x[i] <= lp.u[i] + 1e-9);
  }
}
