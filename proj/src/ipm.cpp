#include "commflow/ipm.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "commflow/barrier.hpp"
#include "commflow/leverage.hpp"
#include "commflow/lewis.hpp"

namespace commflow {

namespace {
constexpr double kClampLambdaY = 40.0;

Eigen::VectorXd regularizer(int m, int n) {
  return Eigen::VectorXd::Constant(m, double(n) / double(m));
}

LewisWeightVector path_weights(const DistributedLP& lp,
                               const Eigen::VectorXd& d2,
                               const IpmOptions& opts,
                               const Eigen::VectorXd* warm) {
  const int m = lp.m();
  const int n = lp.n();
  const SparseMatrix scaled = lp.a.row_scaled(d2.cwiseSqrt().cwiseInverse());
  LewisWeightVector tau =
      lewis_weights(scaled, central_path_p(m, n), regularizer(m, n),
                    opts.lewis_tol, opts.lewis_max_iter, warm);
  if (!tau.converged)
    throw LewisNonConvergence("Lewis weight iteration did not converge",
                              tau.residual);
  return tau;
}

// Least-squares dual residual min_z || A z - (c - s) ||_2.
double dual_residual(const DistributedLP& lp,
                     const Eigen::LDLT<Eigen::MatrixXd>& gram_plain,
                     const Eigen::VectorXd& s) {
  const Eigen::VectorXd rhs = lp.c - s;
  const Eigen::VectorXd z = gram_plain.solve(lp.a.apply_transpose(rhs));
  return (lp.a.apply(z) - rhs).norm();
}

struct Checker {
  const DistributedLP& lp;
  Eigen::LDLT<Eigen::MatrixXd> gram_plain;

  explicit Checker(const DistributedLP& l) : lp(l), gram_plain(l.a.gram()) {}

  CenteringReport check(const CenteredTriple& t, const StepConstants& k,
                        double dual_scale, double cond3_floor,
                        double level_scale = 1.0) const {
    CenteringReport rep;
    const BarrierVectors bd = barrier_derivatives(t.x, lp.l, lp.u);
    const Eigen::VectorXd& tau = t.tau.w;
    const Eigen::VectorXd denom =
        (t.mu * tau.array() * bd.d2.array().sqrt()).matrix();
    rep.centrality_norm =
        ((t.s.array() + t.mu * tau.array() * bd.d1.array()) / denom.array())
            .abs()
            .maxCoeff();
    rep.dual_residual = dual_residual(lp, gram_plain, t.s);

    const Eigen::VectorXd res = lp.a.apply_transpose(t.x) - lp.b;
    const Eigen::VectorXd d =
        (tau.array() * bd.d2.array()).cwiseInverse().matrix();
    const Eigen::MatrixXd g = lp.a.gram_weighted(d);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    const double q = res.dot(ldlt.solve(res));
    rep.primal_residual_weighted = std::sqrt(std::max(q, 0.0));

    rep.thresholds.centrality = k.epsilon * level_scale;
    rep.thresholds.dual_residual =
        dual_scale * std::max(lp.c.norm(), 1.0);
    rep.thresholds.primal_weighted =
        std::max(k.epsilon * k.gamma / k.C_norm * level_scale, cond3_floor);
    rep.cond1 = rep.centrality_norm <= rep.thresholds.centrality;
    rep.cond2 = rep.dual_residual <= rep.thresholds.dual_residual;
    rep.cond3 =
        rep.primal_residual_weighted <= rep.thresholds.primal_weighted;
    rep.is_centered = rep.cond1 && rep.cond2 && rep.cond3;
    return rep;
  }
};

}  // namespace

Rng SharedRandom::stream(const std::string& tag) {
  return Rng::tagged_stream(seed_, tag, counters_[tag]++);
}

IpmOptions make_ipm_options(const SolveOptions& so, int m, int n) {
  IpmOptions o;
  o.consts = so.conforming
                 ? StepConstants::conforming_constants(m, n)
                 : StepConstants::practical(m, n, so.epsilon, so.band,
                                            so.stability);
  o.sampling = so.sampling;
  o.charge = so.charge;
  o.lambda_sketch = so.lambda_sketch;
  o.check_every = so.check_every;
  o.seed = so.seed;
  return o;
}

CenteringReport check_centered(const DistributedLP& lp,
                               const CenteredTriple& triple,
                               const StepConstants& k,
                               double dual_residual_scale, double cond3_floor) {
  return Checker(lp).check(triple, k, dual_residual_scale, cond3_floor);
}

Eigen::VectorXd make_sampling_matrix(const Eigen::VectorXd& dr,
                                     const Eigen::VectorXd& sigma_bar,
                                     const StepConstants& k, SamplingMode mode,
                                     double cs, Rng& rng) {
  if (dr.size() != sigma_bar.size())
    throw std::invalid_argument("dr / sigma size mismatch");
  const Eigen::Index m = dr.size();
  if (mode == SamplingMode::kIdentity) return Eigen::VectorXd::Ones(m);
  const double log_m = std::log(std::max<double>(static_cast<double>(m), 2.0));
  Eigen::VectorXd r = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double p_lev = cs * sigma_bar[i] * log_m / (k.gamma * k.gamma);
    const double p_step = k.C_valid * k.C_valid * std::abs(dr[i]) / k.gamma;
    const double p = std::min(1.0, std::max(p_lev, p_step));
    const double draw = rng.uniform();
    if (p > 0.0 && draw < p) r[i] = 1.0 / p;
  }
  return r;
}

std::int64_t schedule_iterations(double mu_init, double mu_final, double r) {
  std::int64_t count = 0;
  double mu = mu_init;
  while (mu > mu_final) {
    mu *= (1.0 - r);
    ++count;
  }
  return count;
}

CenteredTriple short_step(const DistributedLP& lp, const CenteredTriple& triple,
                          double mu_new, StepMode mode, Channel* channel,
                          const IpmOptions& opts, SharedRandom& shared,
                          double kappa_hat, StepStats* stats) {
  const int m = lp.m();
  const int n = lp.n();
  const StepConstants& k = opts.consts;
  const double mu = triple.mu;
  const bool two_party = mode == StepMode::kTwoParty;
  if (two_party && channel == nullptr)
    throw std::invalid_argument("two-party mode requires a channel");

  if (std::abs(mu_new - mu) > k.r * mu * (1.0 + 1e-12))
    throw StepTooLargeError("|mu_new - mu| exceeds r*mu");

  const BarrierVectors bd = barrier_derivatives(triple.x, lp.l, lp.u);
  const Eigen::VectorXd sqrt_d2 = bd.d2.cwiseSqrt();

  // Line 1: fix tau(x). In the protocol this is the Lewis-weight
  // subprotocol; its cost is charged by formula.
  CenteredTriple next = triple;
  next.tau = path_weights(lp, bd.d2, opts, &triple.tau.w);
  const Eigen::VectorXd& tau = next.tau.w;
  if (two_party && opts.charge == ChargeMode::kFormula) {
    channel->charge_protocol_cost(
        "lewis", lewis_protocol_bits(n, lp.a.max_row_nnz(),
                                     channel->frac_bits(), kappa_hat));
  }

  // Line 4: centrality vector y; the precondition is the infinity-norm
  // centrality (the caller checks the full Def-4.4 conditions).
  const Eigen::VectorXd y =
      ((triple.s.array() + mu * tau.array() * bd.d1.array()) /
       (mu * tau.array() * sqrt_d2.array()))
          .matrix();
  const double y_norm = y.cwiseAbs().maxCoeff();
  if (y_norm > k.epsilon * (1.0 + 1e-9)) {
    CenteringReport rep;
    rep.centrality_norm = y_norm;
    rep.thresholds.centrality = k.epsilon;
    throw NotCenteredError("short_step precondition: not epsilon-centered",
                           rep);
  }

  // Line 5: g = -gamma grad Psi(y), Psi = sum cosh(lambda y_i).
  double psi = 0.0;
  std::int64_t clamps = 0;
  Eigen::VectorXd g(m);
  for (int i = 0; i < m; ++i) {
    double ly = k.lambda * y[i];
    if (std::abs(ly) > kClampLambdaY) {
      ++clamps;
      ly = std::copysign(kClampLambdaY, ly);
    }
    psi += std::cosh(ly);
    g[i] = -k.gamma * k.lambda * std::sinh(ly);
  }
  if (stats) {
    stats->psi = psi;
    stats->y_norm = y_norm;
    stats->clamp_count = clamps;
  }
  if (clamps > 0)
    throw NotCenteredError(
        "gradient clamp triggered; centering band left entirely",
        CenteringReport{});

  // Line 6: H ~ Abar^T Abar via a fresh sketch each iteration.
  const Eigen::VectorXd abar_scale =
      (tau.array() * bd.d2.array()).sqrt().cwiseInverse().matrix();
  const SparseMatrix abar = lp.a.row_scaled(abar_scale);
  const double lambda_sketch =
      opts.lambda_sketch > 0.0 ? opts.lambda_sketch : std::exp(k.gamma);
  SketchOptions sk_opts = opts.sketch;
  sk_opts.verify_dim = 0;  // hot loop; quality comes from lambda_sketch
  Rng sketch_rng = two_party ? channel->shared_rng("sketch")
                             : shared.stream("sketch");
  const SpectralSketch sketch =
      spectral_approx(abar, lp.partition, lambda_sketch, sk_opts, sketch_rng,
                      two_party ? channel : nullptr, opts.charge, kappa_hat,
                      "sketch");
  Eigen::LDLT<Eigen::MatrixXd> h(sketch.sketch.gram());
  if (h.info() != Eigen::Success || !(h.vectorD().minCoeff() > 0.0))
    throw SingularMatrixError("sketch Gram singular in short_step", 0.0);

  // Lines 7-8 (subprocedure in the two-party protocol): u1 = H^{-1} A^T
  // Phi''^{-1/2} g and u2 = H^{-1}(A^T x - b).
  const Eigen::VectorXd phig = (g.array() / sqrt_d2.array()).matrix();
  Eigen::VectorXd u1, u2;
  if (two_party) {
    Eigen::VectorXd v1[2] = {Eigen::VectorXd::Zero(n),
                             Eigen::VectorXd::Zero(n)};
    Eigen::VectorXd v2[2] = {Eigen::VectorXd::Zero(n),
                             Eigen::VectorXd::Zero(n)};
    for (int i = 0; i < m; ++i) {
      const int who = lp.partition.owner[i] == PartyId::kAlice ? 0 : 1;
      lp.a.add_scaled_row(i, phig[i], v1[who]);
      lp.a.add_scaled_row(i, triple.x[i], v2[who]);
    }
    const Eigen::VectorXd v1a =
        channel->send(PartyId::kAlice, PartyId::kCoordinator, "step.vectors",
                      v1[0]).values;
    const Eigen::VectorXd v1b =
        channel->send(PartyId::kBob, PartyId::kCoordinator, "step.vectors",
                      v1[1]).values;
    const Eigen::VectorXd v2a =
        channel->send(PartyId::kAlice, PartyId::kCoordinator, "step.vectors",
                      v2[0]).values;
    const Eigen::VectorXd v2b =
        channel->send(PartyId::kBob, PartyId::kCoordinator, "step.vectors",
                      v2[1]).values;
    const Eigen::VectorXd u1_full = h.solve(v1a + v1b);
    const Eigen::VectorXd u2_full = h.solve(v2a + v2b - lp.b);
    // Both parties receive identical quantized copies.
    u1 = channel->send(PartyId::kCoordinator, PartyId::kAlice, "step.vectors",
                       u1_full).values;
    channel->send(PartyId::kCoordinator, PartyId::kBob, "step.vectors",
                  u1_full);
    u2 = channel->send(PartyId::kCoordinator, PartyId::kAlice, "step.vectors",
                       u2_full).values;
    channel->send(PartyId::kCoordinator, PartyId::kBob, "step.vectors",
                  u2_full);
  } else {
    u1 = h.solve(lp.a.apply_transpose(phig));
    u2 = h.solve(lp.a.apply_transpose(triple.x) - lp.b);
  }

  const Eigen::VectorXd au1 = lp.a.apply(u1);
  const Eigen::VectorXd au2 = lp.a.apply(u2);
  const Eigen::VectorXd inv_tau_sqrt_d2 =
      (tau.array() * sqrt_d2.array()).cwiseInverse().matrix();
  const Eigen::VectorXd d1v = (au1.array() * inv_tau_sqrt_d2.array()).matrix();
  const Eigen::VectorXd d2v = (au2.array() * inv_tau_sqrt_d2.array()).matrix();
  const Eigen::VectorXd dr = d1v + d2v;

  // Line 9: valid sampling matrix R.
  Eigen::VectorXd r_diag;
  if (opts.sampling == SamplingMode::kIdentity) {
    r_diag = Eigen::VectorXd::Ones(m);
  } else {
    const Eigen::VectorXd sigma_bar = leverage_scores(abar);
    Rng r_rng = two_party ? channel->shared_rng("rsample")
                          : shared.stream("rsample");
    r_diag = make_sampling_matrix(dr, sigma_bar, k, opts.sampling,
                                  opts.bernoulli_cs, r_rng);
  }

  // Lines 10-12: dx = Phi''^{-1/2}(g - R dr), ds = mu T Phi''^{1/2} d1
  // (= mu A u1, which keeps s - c in range(A) exactly).
  const Eigen::VectorXd dx =
      ((g.array() - r_diag.array() * dr.array()) / sqrt_d2.array()).matrix();
  const Eigen::VectorXd ds = mu * au1;

  next.x = triple.x + dx;
  next.s = triple.s + ds;
  next.mu = mu_new;
  for (int i = 0; i < m; ++i) {
    if (!(next.x[i] > lp.l[i] && next.x[i] < lp.u[i]))
      throw StepTooLargeError("step left the barrier domain at row " +
                              std::to_string(i));
  }
  return next;
}

PathResult path_following(const DistributedLP& lp, const CenteredTriple& init,
                          double mu_final, StepMode mode, Channel* channel,
                          const IpmOptions& opts) {
  const StepConstants& k = opts.consts;
  Checker checker(lp);
  const double kappa_hat = gram_condition_number(lp.a.gram());
  SharedRandom shared(opts.seed);

  // Entry gate: the initial point must be eps/C_start-centered.
  {
    CenteringReport rep =
        checker.check(init, k, opts.dual_residual_scale, opts.cond3_floor,
                      1.0 / opts.c_start);
    if (!rep.is_centered)
      throw NotCenteredError("initial point is not eps/C_start-centered", rep);
  }

  PathResult out{init, {}};
  const double m2 = double(lp.m()) * double(lp.m());
  double mu = init.mu;
  StepStats step_stats;
  while (mu > mu_final) {
    const double mu_next = (1.0 - k.r) * mu;
    try {
      out.triple = short_step(lp, out.triple, mu_next, mode, channel, opts,
                              shared, kappa_hat, &step_stats);
    } catch (NotCenteredError& e) {
      throw NotCenteredError(std::string("centering lost at iteration ") +
                                 std::to_string(out.stats.iterations) + ": " +
                                 e.what(),
                             e.report, out.stats.iterations);
    }
    mu = mu_next;
    ++out.stats.iterations;
    out.stats.max_psi = std::max(out.stats.max_psi, step_stats.psi);
    if (step_stats.psi > m2) ++out.stats.psi_over_m2;
    if (opts.check_every > 0 &&
        out.stats.iterations % opts.check_every == 0) {
      CenteringReport rep = checker.check(out.triple, k,
                                          opts.dual_residual_scale,
                                          opts.cond3_floor);
      if (!rep.is_centered)
        throw NotCenteredError("centering lost at iteration " +
                                   std::to_string(out.stats.iterations),
                               rep, out.stats.iterations);
    }
  }
  out.stats.final_mu = mu;
  return out;
}

ModifiedLp build_modified_lp(const DistributedLP& lp, double delta,
                             const IpmOptions& opts,
                             std::optional<double> delta_prime_override,
                             std::optional<double> mu_init_override,
                             Channel* channel) {
  lp.validate();
  const int m = lp.m();
  const int n = lp.n();
  const double xi = (lp.u - lp.l).cwiseAbs().maxCoeff();
  if (!(xi > 0.0)) throw DegenerateBoxError("box has zero width");

  const Eigen::VectorXd x_init = 0.5 * (lp.l + lp.u);

  // Setup exchange: partial A^T x_init plus the ||c||_1 and box-width
  // contributions; every party derives beta, c~, mu from the same primitives.
  Eigen::VectorXd atx;
  double c_l1 = lp.c.cwiseAbs().sum();
  if (channel) {
    Eigen::VectorXd part[2] = {Eigen::VectorXd::Zero(n),
                               Eigen::VectorXd::Zero(n)};
    double cpart[2] = {0.0, 0.0};
    for (int i = 0; i < m; ++i) {
      const int who = lp.partition.owner[i] == PartyId::kAlice ? 0 : 1;
      lp.a.add_scaled_row(i, x_init[i], part[who]);
      cpart[who] += std::abs(lp.c[i]);
    }
    Eigen::VectorXd payload_a(n + 1), payload_b(n + 1);
    payload_a << part[0], cpart[0];
    payload_b << part[1], cpart[1];
    const Eigen::VectorXd qa =
        channel->send(PartyId::kAlice, PartyId::kCoordinator, "setup",
                      payload_a).values;
    const Eigen::VectorXd qb =
        channel->send(PartyId::kBob, PartyId::kCoordinator, "setup",
                      payload_b).values;
    atx = qa.head(n) + qb.head(n);
    c_l1 = qa[n] + qb[n];
    // Broadcast of the combined primitives back to the parties.
    Eigen::VectorXd combined(n + 1);
    combined << atx, c_l1;
    channel->send(PartyId::kCoordinator, PartyId::kAlice, "setup", combined);
    channel->send(PartyId::kCoordinator, PartyId::kBob, "setup", combined);
  } else {
    atx = lp.a.apply_transpose(x_init);
  }

  const Eigen::VectorXd resid = lp.b - atx;
  const double resid_inf = resid.cwiseAbs().maxCoeff();
  const double c_l1_safe = std::max(c_l1, 1.0);
  const double delta_prime =
      delta_prime_override.value_or(delta /
                                    (10.0 * m * std::ldexp(1.0, 2 * lp.bits)));
  const double c_tilde = 2.0 * c_l1_safe / delta_prime;

  ModifiedLp out;
  out.orig_rows = m;
  out.beta = resid_inf / xi;
  out.xi = xi;
  out.c_tilde = c_tilde;
  out.delta_prime = delta_prime;

  // beta = 0 shortcut: x_init already satisfies A^T x = b.
  std::vector<Triplet> ts;
  for (int i = 0; i < m; ++i) {
    auto cols = lp.a.row_cols(i);
    auto vals = lp.a.row_vals(i);
    for (size_t p = 0; p < cols.size(); ++p)
      ts.push_back({i, cols[p], vals[p]});
  }
  std::vector<double> aux_init;
  std::vector<int> aux_rows_col;
  if (out.beta > 0.0) {
    const double zero_tol = 1e-12 * resid_inf;
    for (int j = 0; j < n; ++j) {
      if (std::abs(resid[j]) <= zero_tol) continue;  // eliminated coordinate
      const double sign = resid[j] > 0.0 ? 1.0 : -1.0;
      const int row = m + static_cast<int>(aux_rows_col.size());
      ts.push_back({row, j, out.beta * sign});
      aux_rows_col.push_back(j);
      aux_init.push_back(std::abs(resid[j]) / out.beta);
    }
  }
  const int m_mod = m + static_cast<int>(aux_rows_col.size());
  out.aux_rows = aux_rows_col;

  DistributedLP mod;
  mod.a = SparseMatrix::from_triplets(m_mod, n, std::move(ts));
  mod.b = lp.b;
  mod.bits = lp.bits;
  mod.partition.owner = lp.partition.owner;
  mod.c.resize(m_mod);
  mod.l.resize(m_mod);
  mod.u.resize(m_mod);
  mod.c.head(m) = lp.c;
  mod.l.head(m) = lp.l;
  mod.u.head(m) = lp.u;
  Eigen::VectorXd x0(m_mod);
  x0.head(m) = x_init;
  for (size_t r = 0; r < aux_init.size(); ++r) {
    const int row = m + static_cast<int>(r);
    // One-sided aux box [0, 2 xt_init]: the path drives these to zero when
    // the original program is feasible.
    mod.c[row] = c_tilde;
    mod.l[row] = 0.0;
    mod.u[row] = 2.0 * aux_init[r];
    x0[row] = aux_init[r];
    mod.partition.owner.push_back(PartyId::kAlice);
  }
  out.mu_init = mu_init_override.value_or(
      8.0 * m * c_l1_safe * xi / (opts.consts.epsilon * delta_prime));

  out.init.x = x0;
  out.init.s = mod.c;
  out.init.mu = out.mu_init;
  const BarrierVectors bd = barrier_derivatives(x0, mod.l, mod.u);
  const SparseMatrix scaled =
      mod.a.row_scaled(bd.d2.cwiseSqrt().cwiseInverse());
  out.init.tau = lewis_weights(scaled, central_path_p(m_mod, n),
                               regularizer(m_mod, n), opts.lewis_tol,
                               opts.lewis_max_iter);
  if (!out.init.tau.converged)
    throw LewisNonConvergence("Lewis weights for the initial point",
                              out.init.tau.residual);
  out.lp = std::move(mod);
  return out;
}

FinalPoint extract_final(const DistributedLP& lp, const CenteredTriple& triple,
                         double delta, StepMode mode, Channel* channel,
                         const IpmOptions& opts) {
  const bool two_party = mode == StepMode::kTwoParty && channel != nullptr;
  SharedRandom shared(Rng::mix(opts.seed, 0xE47ULL));
  const double kappa_hat = gram_condition_number(lp.a.gram());
  FinalPoint out;
  out.x = triple.x;
  out.s = triple.s;

  const BarrierVectors bd0 = barrier_derivatives(triple.x, lp.l, lp.u);
  const Eigen::VectorXd d =
      (triple.tau.w.array() * bd0.d2.array()).cwiseInverse().matrix();
  const double lambda_extract = 1.01;  // saturates sampling; near-exact solve

  for (int pass = 0; pass < 5; ++pass) {
    Eigen::VectorXd res;
    if (two_party) {
      Eigen::VectorXd part[2] = {Eigen::VectorXd::Zero(lp.n()),
                                 Eigen::VectorXd::Zero(lp.n())};
      for (int i = 0; i < lp.m(); ++i) {
        const int who = lp.partition.owner[i] == PartyId::kAlice ? 0 : 1;
        lp.a.add_scaled_row(i, out.x[i], part[who]);
      }
      const Eigen::VectorXd qa =
          channel->send(PartyId::kAlice, PartyId::kCoordinator, "extract",
                        part[0]).values;
      const Eigen::VectorXd qb =
          channel->send(PartyId::kBob, PartyId::kCoordinator, "extract",
                        part[1]).values;
      res = lp.b - qa - qb;
    } else {
      res = lp.b - lp.a.apply_transpose(out.x);
    }
    out.primal_residual_inf = res.cwiseAbs().maxCoeff();
    if (out.primal_residual_inf <= 0.5 * delta) break;

    // One Laplacian-type corrective solve through the sketch.
    const SparseMatrix weighted = lp.a.row_scaled(d.cwiseSqrt());
    SketchOptions sk = opts.sketch;
    sk.verify_dim = 0;
    Rng rng = two_party ? channel->shared_rng("extract.sketch")
                        : shared.stream("extract.sketch");
    const SpectralSketch sketch = spectral_approx(
        weighted, lp.partition, lambda_extract, sk, rng,
        two_party ? channel : nullptr, opts.charge, kappa_hat,
        "extract.sketch");
    Eigen::LDLT<Eigen::MatrixXd> h(sketch.sketch.gram());
    Eigen::VectorXd u = h.solve(res);
    if (two_party) {
      u = channel->send(PartyId::kCoordinator, PartyId::kAlice, "extract",
                        u).values;
      channel->send(PartyId::kCoordinator, PartyId::kBob, "extract", u);
    }
    Eigen::VectorXd dx = (d.array() * lp.a.apply(u).array()).matrix();
    // Keep x strictly inside the box; halve the correction if needed.
    double scale = 1.0;
    for (int tries = 0; tries < 60; ++tries) {
      bool ok = true;
      for (int i = 0; i < lp.m(); ++i) {
        const double xi = out.x[i] + scale * dx[i];
        if (!(xi > lp.l[i] && xi < lp.u[i])) {
          ok = false;
          break;
        }
      }
      if (ok) break;
      scale *= 0.5;
    }
    out.x += scale * dx;
    ++out.corrections;
  }
  {
    const Eigen::VectorXd res = lp.b - lp.a.apply_transpose(out.x);
    out.primal_residual_inf = res.cwiseAbs().maxCoeff();
  }
  out.residual_within_delta = out.primal_residual_inf <= delta;
  out.gap_estimate = triple.mu * triple.tau.w.lpNorm<1>() *
                     (1.0 + opts.consts.epsilon) /
                     (1.0 - opts.consts.epsilon);
  return out;
}

LpSolveResult solve_box_lp(const DistributedLP& lp, double delta,
                           Channel* channel, const SolveOptions& opts) {
  lp.validate();
  IpmOptions ipm = make_ipm_options(opts, lp.m(), lp.n());
  ModifiedLp mod = build_modified_lp(lp, delta, ipm, std::nullopt,
                                     std::nullopt, channel);
  const double c_l1 = std::max(lp.c.cwiseAbs().sum(), 1.0);
  const double mu_final =
      mod.delta_prime * c_l1 * mod.xi / (10.0 * std::max(lp.n(), 1));
  PathResult pf = path_following(mod.lp, mod.init, mu_final, opts.mode,
                                 channel, ipm);
  FinalPoint fin =
      extract_final(mod.lp, pf.triple, 0.5 * delta, opts.mode, channel, ipm);

  LpSolveResult out;
  out.x = fin.x.head(lp.m());
  out.objective = lp.c.dot(out.x);
  out.primal_residual_inf =
      (lp.a.apply_transpose(out.x) - lp.b).cwiseAbs().maxCoeff();
  out.iterations = pf.stats.iterations;
  out.gap_estimate = fin.gap_estimate;
  out.non_conforming = !ipm.consts.conforming;
  return out;
}

}  // namespace commflow
