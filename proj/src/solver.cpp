#include "cma/solver.hpp"

#include <cmath>

#include "cma/stencil.hpp"

namespace cma::solve {

using grid::Grid;
using grid::GridKind;
using grid::ScalarField;

void ContinuationSchedule::validate() const {
  if (!s_steps.empty()) {
    if (s_steps.front() != 0.0 || s_steps.back() != 1.0)
      fail(errc::invalid_input, "schedule: s path must start at 0 and end at 1");
    for (std::size_t i = 1; i < s_steps.size(); ++i)
      if (s_steps[i] <= s_steps[i - 1])
        fail(errc::invalid_input, "schedule: s path must increase");
  }
  for (std::size_t i = 0; i < eps_steps.size(); ++i) {
    if (eps_steps[i] <= 0.0) fail(errc::invalid_input, "schedule: eps must be positive");
    if (i > 0 && eps_steps[i] >= eps_steps[i - 1])
      fail(errc::invalid_input, "schedule: eps path must decrease");
  }
  if (newton.admissibility_floor <= 0.0 || newton.admissibility_floor >= 1.0)
    fail(errc::invalid_input, "schedule: admissibility floor must lie in (0,1)");
}

ContinuationSchedule ContinuationSchedule::defaults() {
  ContinuationSchedule s;
  for (int i = 0; i <= 10; ++i) s.s_steps.push_back(i / 10.0);
  s.eps_steps = {1e-1, 1e-2, 1e-3, 1e-4};
  return s;
}

nlohmann::json SolveReport::to_json() const {
  nlohmann::json j;
  j["converged"] = converged;
  j["iterations"] = iterations;
  j["stage_values"] = stage_values;
  j["final_residual"] = final_residual;
  j["rescale_constant"] = rescale_constant;
  j["mean_integral"] = mean_integral;
  j["subsolution_gap"] = subsolution_gap;
  j["barrier_gap"] = barrier_gap;
  j["max_principle_defect"] = max_principle_defect;
  j["monotonicity_violation"] = monotonicity_violation;
  if (!note.empty()) j["note"] = note;
  nlohmann::json mons = nlohmann::json::array();
  for (const StageMonitor& m : monitors) {
    mons.push_back({{"grad_sup", m.grad_sup},
                    {"lap_sup", m.lap_sup},
                    {"boundary_grad_sup", m.boundary_grad_sup},
                    {"boundary_lap_sup", m.boundary_lap_sup},
                    {"lambda_min", m.lambda_min},
                    {"grad_ratio", m.grad_ratio},
                    {"lap_ratio", m.lap_ratio}});
  }
  j["monitors"] = mons;
  return j;
}

namespace {

double sup_interior(const ScalarField& f) {
  const Grid& g = f.grid();
  return par::reduce_max(g.count(), [&](std::size_t lo, std::size_t hi) {
    grid::Walker w(g);
    w.seek(lo);
    double m = 0.0;
    for (std::size_t p = lo; p < hi; ++p, w.advance())
      if (g.is_interior(w.mi())) m = std::max(m, std::abs(f[p]));
    return m;
  });
}

double mean_interior(const ScalarField& f) {
  const Grid& g = f.grid();
  double s = par::reduce_sum(g.count(), [&](std::size_t lo, std::size_t hi) {
    grid::Walker w(g);
    w.seek(lo);
    double acc = 0.0;
    for (std::size_t p = lo; p < hi; ++p, w.advance())
      if (g.is_interior(w.mi())) acc += f[p];
    return acc;
  });
  return s / double(g.interior_count());
}

}  // namespace

double mean_omega(const ScalarField& u, const ma::MAProblem& prob) {
  ScalarField one(prob.gr, 1.0);
  return grid::integrate(u, prob.g) / grid::integrate(one, prob.g);
}

StageMonitor estimate_monitor(const ScalarField& u, const ma::MAProblem& prob) {
  const Grid& g = prob.gr;
  const int nc = g.ncomplex();
  Eigen::MatrixXcd ginv_c;
  if (prob.g.is_constant()) ginv_c = prob.g.constant_value().inverse();
  StageMonitor mon;
  auto [adm, lam] = ma::admissibility(u, prob);
  (void)adm;
  mon.lambda_min = lam;

  const std::size_t chunks = (g.count() + par::kChunk - 1) / par::kChunk;
  struct Part {
    double gi = 0, li = 0, gb = 0, lb = 0;
  };
  std::vector<Part> parts(chunks);
  par::parallel_for(g.count(), [&](std::size_t lo, std::size_t hi) {
    grid::Walker w(g);
    w.seek(lo);
    std::vector<cd> grad(nc), H(nc * nc);
    Part part;
    for (std::size_t p = lo; p < hi; ++p, w.advance()) {
      const bool interior = g.is_interior(w.mi());
      Eigen::MatrixXcd gi = prob.g.is_constant() ? ginv_c : prob.g.at(p).inverse();
      double gn2 = 0.0;
      cd lap(0.0);
      if (interior) {
        grid::gradient_at(u, p, w.mi(), grad.data());
        grid::hessian_at(u, p, w.mi(), H.data());
        for (int a = 0; a < nc; ++a)
          for (int b = 0; b < nc; ++b) {
            gn2 += (gi(b, a) * grad[a] * std::conj(grad[b])).real();
            lap += gi(b, a) * H[a * nc + b];
          }
      } else {
        grid::gradient_general(u, p, w.mi(), grad.data());
        for (int a = 0; a < nc; ++a) {
          const int xa = g.x_axis(a), ya = g.y_axis(a);
          double d2 = grid::d2_general(u, p, w.mi(), xa);
          if (ya >= 0) d2 += grid::d2_general(u, p, w.mi(), ya);
          lap += gi(a, a) * 0.25 * d2;
          for (int b = a + 1; b < nc; ++b) {
            const int xb = g.x_axis(b), yb = g.y_axis(b);
            double re = grid::cross_general(u, w.mi(), xa, xb);
            double im = 0.0;
            if (ya >= 0 && yb >= 0) re += grid::cross_general(u, w.mi(), ya, yb);
            if (yb >= 0) im += grid::cross_general(u, w.mi(), xa, yb);
            if (ya >= 0) im -= grid::cross_general(u, w.mi(), ya, xb);
            lap += 2.0 * (gi(b, a) * 0.25 * cd(re, im)).real();
          }
          for (int b = 0; b < nc; ++b)
            gn2 += (gi(b, a) * grad[a] * std::conj(grad[b])).real();
        }
      }
      const double gn = std::sqrt(std::max(0.0, gn2));
      const double lv = std::abs(lap.real());
      if (interior) {
        part.gi = std::max(part.gi, gn);
        part.li = std::max(part.li, lv);
      } else {
        part.gb = std::max(part.gb, gn);
        part.lb = std::max(part.lb, lv);
      }
    }
    parts[lo / par::kChunk] = part;
  });
  for (const Part& part : parts) {
    mon.grad_sup = std::max(mon.grad_sup, part.gi);
    mon.lap_sup = std::max(mon.lap_sup, part.li);
    mon.boundary_grad_sup = std::max(mon.boundary_grad_sup, part.gb);
    mon.boundary_lap_sup = std::max(mon.boundary_lap_sup, part.lb);
  }
  auto ratio = [](double num, double den) {
    return (num == 0.0 && den == 0.0) ? -1.0 : num / std::max(den, 1e-300);
  };
  if (g.kind() == GridKind::torus) {
    mon.grad_ratio = -1.0;
    mon.lap_ratio = -1.0;
  } else {
    mon.grad_ratio = ratio(mon.grad_sup, mon.boundary_grad_sup);
    mon.lap_ratio = ratio(mon.lap_sup, mon.boundary_lap_sup);
  }
  return mon;
}

NewtonOutcome newton_stage(const ma::MAProblem& prob, ScalarField& u, const NewtonConfig& cfg,
                           bool mean_zero) {
  NewtonOutcome out;
  auto [adm0, lam0] = ma::admissibility(u, prob);
  if (!adm0) {
    out.reason = "seed not admissible";
    return out;
  }
  // Anti-collapse guard: each accepted step may shrink lambda_min by at most
  // the configured factor. Relative to the running iterate rather than the
  // stage seed, so decade-sized eps stages can still descend toward
  // degeneracy without tripping the guard.
  double lam_cur = lam0;

  ScalarField r = ma::log_residual(u, prob);
  double beta = mean_zero ? mean_interior(r) : 0.0;
  auto shifted_sup = [&](const ScalarField& res, double b) {
    const Grid& g = res.grid();
    return par::reduce_max(g.count(), [&](std::size_t lo, std::size_t hi) {
      grid::Walker w(g);
      w.seek(lo);
      double m = 0.0;
      for (std::size_t p = lo; p < hi; ++p, w.advance())
        if (g.is_interior(w.mi())) m = std::max(m, std::abs(res[p] - b));
      return m;
    });
  };
  // Determinant-form residual derived from the log form: stays evaluable and
  // well-conditioned as the equation degenerates, where the log form hits its
  // floating-point floor (noise amplified by 1/det).
  const double detg_scale = prob.g.is_constant()
                                ? prob.g.constant_value().determinant().real()
                                : 1.0;
  auto det_sup = [&](const ScalarField& res, double b, const ScalarField& uu) {
    const Grid& g = res.grid();
    return par::reduce_max(g.count(), [&](std::size_t lo, std::size_t hi) {
      grid::Walker w(g);
      w.seek(lo);
      double m = 0.0;
      for (std::size_t p = lo; p < hi; ++p, w.advance())
        if (g.is_interior(w.mi()))
          m = std::max(m, std::abs(std::expm1(res[p] - b)) *
                              prob.rhs.psi(g, p, uu[p]) * detg_scale);
      return m;
    });
  };
  double res_sup = shifted_sup(r, beta);
  double res_det = det_sup(r, beta, u);
  auto is_converged = [&](double rlog, double rdet) {
    return rlog <= cfg.residual_tol || rdet <= cfg.residual_tol;
  };

  LinSolveOptions lin = cfg.lin;
  lin.project_mean = mean_zero;

  for (int it = 0; it < cfg.max_iter; ++it) {
    if (is_converged(res_sup, res_det)) {
      out.converged = true;
      break;
    }
    ma::LinearizedOp L = ma::linearize(u, prob);
    std::vector<double> rhs(u.size(), 0.0);
    {
      const Grid& g = prob.gr;
      grid::Walker w(g);
      for (std::size_t p = 0; p < g.count(); ++p, w.advance())
        if (g.is_interior(w.mi())) rhs[p] = -(r[p] - beta);
    }
    std::vector<double> delta;
    LinSolveStats st = solve_linear(L, rhs, delta, lin);
    if (!st.converged) {
      out.reason = "linear solve stalled";
      break;
    }

    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= cfg.min_damping) {
      ScalarField trial = u;
      par::parallel_for(trial.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) trial[p] += alpha * delta[p];
      });
      if (mean_zero) trial.shift(-mean_omega(trial, prob));
      auto [adm, lam] = ma::admissibility(trial, prob);
      if (adm && lam >= cfg.admissibility_floor * lam_cur) {
        ScalarField rt = ma::log_residual(trial, prob);
        const double bt = mean_zero ? mean_interior(rt) : 0.0;
        const double rs = shifted_sup(rt, bt);
        const double rd = det_sup(rt, bt, trial);
        if (rs <= (1.0 - 0.2 * alpha) * res_sup || is_converged(rs, rd)) {
          res_det = rd;
          u = std::move(trial);
          r = std::move(rt);
          beta = bt;
          res_sup = rs;
          lam_cur = lam;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    ++out.iterations;
    if (!accepted) {
      out.reason = "damping underflow";
      break;
    }
  }
  if (is_converged(res_sup, res_det)) out.converged = true;
  out.residual = std::min(res_sup, res_det);
  out.shift = beta;
  return out;
}

std::pair<ScalarField, SolveReport> newton_solve(const ma::MAProblem& prob,
                                                 const ScalarField& u0,
                                                 const NewtonConfig& cfg) {
  ScalarField u = u0;
  if (prob.has_boundary_mask()) {
    if (!prob.boundary) fail(errc::invalid_input, "newton: missing boundary data");
    if (ma::boundary_mismatch(u, *prob.boundary) > 1e-12)
      fail(errc::invalid_input, "newton: seed does not match boundary data");
  }
  NewtonOutcome nr = newton_stage(prob, u, cfg, false);
  SolveReport rep;
  rep.converged = nr.converged;
  rep.iterations = {nr.iterations};
  rep.stage_values = {0.0};
  rep.final_residual = nr.residual;
  rep.monitors = {estimate_monitor(u, prob)};
  rep.note = nr.reason;
  return {std::move(u), std::move(rep)};
}

namespace {

double max_principle_defect(const ScalarField& u, const ma::MAProblem& prob) {
  // at the maximum point p of u: det chi(p) >= psi(p, u(p)) det g(p)
  const Grid& g = prob.gr;
  std::size_t argmax = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < g.count(); ++p)
    if (u[p] > best) {
      best = u[p];
      argmax = p;
    }
  const int nc = g.ncomplex();
  Eigen::MatrixXcd chi = prob.chi.at(argmax);
  Eigen::MatrixXcd gm = prob.g.at(argmax);
  const double lhs = chi.determinant().real();
  const double rhs = prob.rhs.psi(g, argmax, best) * gm.determinant().real();
  (void)nc;
  return std::min(0.0, lhs - rhs);
}

}  // namespace

std::pair<ScalarField, SolveReport> continuation_solve(const ma::MAProblem& prob,
                                                       const ContinuationSchedule& sched) {
  sched.validate();
  if (prob.gr.kind() != GridKind::torus)
    fail(errc::invalid_input, "continuation: torus grids only");
  if (!prob.rhs.flags().strict_monotone)
    fail(errc::invalid_input, "continuation: psi must be strictly monotone in u");

  SolveReport rep;
  ScalarField u(prob.gr);  // s = 0 exact solution for det chi = det g e^u setups
  std::vector<double> path = sched.s_steps.empty()
                                 ? ContinuationSchedule::defaults().s_steps
                                 : sched.s_steps;
  std::size_t i = 1;  // path[0] = 0 is the seed
  double s_prev = 0.0;
  int bisections = 0;
  rep.stage_values.push_back(0.0);
  rep.iterations.push_back(0);
  rep.monitors.push_back(estimate_monitor(u, prob));
  while (i < path.size()) {
    const double s = path[i];
    ma::MAProblem stage = prob;
    stage.rhs = ma::RHSSpec::continuation_blend(prob.rhs, s);
    ScalarField trial = u;
    NewtonOutcome nr = newton_stage(stage, trial, sched.newton, false);
    if (!nr.converged) {
      if (++bisections > 6) {
        rep.note = "continuation aborted after 6 bisections at s = " + std::to_string(s);
        rep.converged = false;
        return {std::move(u), std::move(rep)};
      }
      path.insert(path.begin() + i, 0.5 * (s_prev + s));
      continue;
    }
    u = std::move(trial);
    s_prev = s;
    ++i;
    rep.stage_values.push_back(s);
    rep.iterations.push_back(nr.iterations);
    rep.monitors.push_back(estimate_monitor(u, prob));
    rep.final_residual = nr.residual;
  }
  rep.converged = true;
  rep.max_principle_defect = max_principle_defect(u, prob);
  return {std::move(u), std::move(rep)};
}

std::pair<ScalarField, SolveReport> torus_calabi_solve(const ma::MAProblem& prob,
                                                       const ContinuationSchedule& sched) {
  sched.validate();
  if (prob.gr.kind() != GridKind::torus)
    fail(errc::invalid_input, "calabi: torus grids only");
  if (!prob.rhs.flags().u_independent)
    fail(errc::invalid_input, "calabi: psi must not depend on u");

  // compatibility rescale: c0 = int chi^n / int psi omega^n
  const Grid& g = prob.gr;
  ScalarField one(g, 1.0);
  ScalarField psi_samples(g);
  for (std::size_t p = 0; p < g.count(); ++p) psi_samples[p] = prob.rhs.psi(g, p, 0.0);
  const double int_chi = grid::integrate(one, prob.chi);
  const double int_psi = grid::integrate(psi_samples, prob.g);
  if (int_psi <= 0.0) fail(errc::invalid_input, "calabi: psi integrates to zero");
  const double c0 = int_chi / int_psi;
  {
    ScalarField scaled = psi_samples;
    par::parallel_for(scaled.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p < hi; ++p) scaled[p] *= c0;
    });
    const double defect = std::abs(grid::integrate(scaled, prob.g) - int_chi) / int_chi;
    if (defect > 1e-6)
      fail(errc::invalid_input, "calabi: compatibility violated beyond rescaling");
  }

  ma::MAProblem work = prob;
  work.rhs = ma::RHSSpec::scaled(prob.rhs, c0);
  ScalarField u(g);
  u.shift(-mean_omega(u, work));
  NewtonOutcome nr = newton_stage(work, u, sched.newton, true);

  SolveReport rep;
  rep.converged = nr.converged;
  rep.iterations = {nr.iterations};
  rep.stage_values = {1.0};
  rep.final_residual = nr.residual;
  rep.rescale_constant = c0 * std::exp(nr.shift);
  u.shift(-mean_omega(u, work));
  rep.mean_integral = grid::integrate(u, work.g);
  rep.monitors = {estimate_monitor(u, work)};
  rep.note = nr.reason;
  return {std::move(u), std::move(rep)};
}

std::pair<ScalarField, SolveReport> dirichlet_solve(const ma::MAProblem& prob,
                                                    const ContinuationSchedule& sched) {
  sched.validate();
  if (prob.gr.kind() == GridKind::torus)
    fail(errc::invalid_input, "dirichlet: bounded grids only");
  if (!prob.subsolution) fail(errc::invalid_input, "dirichlet: subsolution required");
  prob.validate();

  const Grid& g = prob.gr;
  // barrier: Delta h + tr chi = 0, h = phi on the boundary
  ScalarField trchi(g);
  Eigen::MatrixXcd ginv_c;
  if (prob.g.is_constant()) ginv_c = prob.g.constant_value().inverse();
  for (std::size_t p = 0; p < g.count(); ++p) {
    Eigen::MatrixXcd gi = prob.g.is_constant() ? ginv_c : prob.g.at(p).inverse();
    Eigen::MatrixXcd chi = prob.chi.at(p);
    cd tr(0.0);
    for (int a = 0; a < g.ncomplex(); ++a)
      for (int b = 0; b < g.ncomplex(); ++b) tr += gi(b, a) * chi(a, b);
    trchi[p] = -tr.real();
  }
  ScalarField h = solve_poisson_dirichlet(g, prob.g, trchi, *prob.boundary);

  ScalarField u = *prob.subsolution;
  NewtonOutcome nr = newton_stage(prob, u, sched.newton, false);

  SolveReport rep;
  rep.converged = nr.converged;
  rep.iterations = {nr.iterations};
  rep.stage_values = {1.0};
  rep.final_residual = nr.residual;
  double sub_gap = 0.0, bar_gap = 0.0;
  for (std::size_t p = 0; p < g.count(); ++p) {
    sub_gap = std::max(sub_gap, (*prob.subsolution)[p] - u[p]);
    bar_gap = std::max(bar_gap, u[p] - h[p]);
  }
  rep.subsolution_gap = sub_gap;
  rep.barrier_gap = bar_gap;
  rep.monitors = {estimate_monitor(u, prob)};
  rep.note = nr.reason;
  return {std::move(u), std::move(rep)};
}

std::vector<EpsStage> epsilon_sweep(const ma::MAProblem& prob,
                                    const ContinuationSchedule& sched) {
  sched.validate();
  if (!prob.subsolution) fail(errc::invalid_input, "eps sweep: subsolution required");
  if (sched.eps_steps.empty()) fail(errc::invalid_input, "eps sweep: empty eps path");
  const Grid& g = prob.gr;
  const int dim = g.ncomplex();

  // subsolution must dominate eps0 * omega for the largest swept eps
  auto [sub_adm, sub_lam] = ma::admissibility(*prob.subsolution, prob);
  if (!sub_adm || sub_lam < sched.eps_steps.front())
    fail(errc::precondition, "eps sweep: chi_usub >= eps0 omega fails for the largest eps");

  std::vector<EpsStage> stages;
  ScalarField u = *prob.subsolution;
  ScalarField prev_u = u;
  bool have_prev = false;
  for (double eps : sched.eps_steps) {
    ma::MAProblem stage = prob;
    stage.rhs = ma::RHSSpec::band_regularized(prob.rhs, eps, dim);
    // pointwise band assertion on a pass over the grid at the current iterate
    {
      const double eps_pow = std::pow(eps, dim);
      for (std::size_t p = 0; p < g.count(); ++p) {
        const double psi = prob.rhs.psi(g, p, u[p]);
        const double reg = ma::RHSSpec::regularize_value(psi, eps_pow);
        if (reg < ma::RHSSpec::band_lo(psi, eps, dim) - 1e-14 ||
            reg > ma::RHSSpec::band_hi(psi, eps, dim) + 1e-14)
          fail(errc::internal, "eps sweep: regularized psi left the admissible band");
      }
    }
    stage.validate();  // re-checks the subsolution inequality for psi^eps
    ScalarField trial = u;
    NewtonOutcome nr = newton_stage(stage, trial, sched.newton, false);

    EpsStage st;
    st.eps = eps;
    st.report.converged = nr.converged;
    st.report.iterations = {nr.iterations};
    st.report.stage_values = {eps};
    st.report.final_residual = nr.residual;
    st.report.note = nr.reason;
    if (!nr.converged) {
      st.u = std::move(trial);
      stages.push_back(std::move(st));
      break;  // truncate the sweep, return the partial sequence
    }
    u = std::move(trial);
    double mono = 0.0;
    if (have_prev)
      for (std::size_t p = 0; p < g.count(); ++p) mono = std::max(mono, prev_u[p] - u[p]);
    st.report.monotonicity_violation = mono;
    double sub_gap = 0.0;
    for (std::size_t p = 0; p < g.count(); ++p)
      sub_gap = std::max(sub_gap, (*prob.subsolution)[p] - u[p]);
    st.report.subsolution_gap = sub_gap;
    st.report.monitors = {estimate_monitor(u, stage)};
    st.u = u;
    stages.push_back(std::move(st));
    prev_u = u;
    have_prev = true;
  }
  return stages;
}

double comparison_gap(const ma::MAProblem& prob_a, const ma::MAProblem& prob_b,
                      const ContinuationSchedule& sched) {
  auto [ua, ra] = dirichlet_solve(prob_a, sched);
  auto [ub, rb] = dirichlet_solve(prob_b, sched);
  if (!ra.converged || !rb.converged)
    fail(errc::internal, "comparison: stage solves did not converge");
  double gap = 0.0;
  for (std::size_t p = 0; p < ua.size(); ++p) gap = std::max(gap, ua[p] - ub[p]);
  return gap;
}

}  // namespace cma::solve
