#include "percher/ipm.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

namespace percher {

namespace {

void check_finite(const Eigen::VectorXd& v, const IpmProblem& p, bool eq) {
  for (int i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw NumericalFailure("non-finite value in " +
                             (eq ? p.eq_name(i) : p.ineq_name(i)));
}

void check_finite_triplets(const std::vector<SpTriplet>& ts,
                           const IpmProblem& p, bool eq) {
  for (const auto& t : ts)
    if (!std::isfinite(t.value()))
      throw NumericalFailure("non-finite derivative in " +
                             (eq ? p.eq_name(t.row()) : p.ineq_name(t.row())));
}

struct EvalData {
  double f = 0.0;
  Eigen::VectorXd grad;
  Eigen::SparseMatrix<double> H;   // Gauss-Newton objective Hessian
  Eigen::VectorXd cE, cI;
  Eigen::SparseMatrix<double> JE, JI;
};

void eval_all(const IpmProblem& p, const Eigen::VectorXd& z, EvalData& d) {
  const int n = p.num_vars();
  std::vector<SpTriplet> ht, jet, jit;
  d.f = p.eval_objective(z, &d.grad, &ht);
  p.eval_eq(z, d.cE, &jet);
  p.eval_ineq(z, d.cI, &jit);
  if (!std::isfinite(d.f)) throw NumericalFailure("non-finite objective");
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(d.grad[i]))
      throw NumericalFailure("non-finite objective gradient");
  check_finite(d.cE, p, true);
  check_finite(d.cI, p, false);
  check_finite_triplets(jet, p, true);
  check_finite_triplets(jit, p, false);
  d.H.resize(n, n);
  d.H.setFromTriplets(ht.begin(), ht.end());
  d.JE.resize(p.num_eq(), n);
  d.JE.setFromTriplets(jet.begin(), jet.end());
  d.JI.resize(p.num_ineq(), n);
  d.JI.setFromTriplets(jit.begin(), jit.end());
}

void eval_values(const IpmProblem& p, const Eigen::VectorXd& z, double& f,
                 Eigen::VectorXd& cE, Eigen::VectorXd& cI) {
  f = p.eval_objective(z, nullptr, nullptr);
  p.eval_eq(z, cE, nullptr);
  p.eval_ineq(z, cI, nullptr);
}

double inf_norm(const Eigen::VectorXd& v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

IpmResult ipm_solve(const IpmProblem& problem, const Eigen::VectorXd& z0,
                    const IpmOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  const int n = problem.num_vars();
  const int mE = problem.num_eq();
  const int mI = problem.num_ineq();

  IpmResult res;
  Eigen::VectorXd z = z0;
  EvalData d;
  eval_all(problem, z, d);

  Eigen::VectorXd t = d.cI.cwiseMax(1e-3);
  double mu = opts.mu_init;
  Eigen::VectorXd w = (mu * t.cwiseInverse()).cwiseMax(1e-10).cwiseMin(1e10);
  Eigen::VectorXd yE = Eigen::VectorXd::Zero(mE);

  double nu = 1.0;  // l1 merit penalty
  double reg = opts.reg_init;
  int stall_count = 0;

  auto finish = [&](IpmStatus status, int iters, double stat, double eqv,
                    double comp) {
    res.status = status;
    res.z = z;
    res.mult_eq = yE;
    res.mult_ineq = w;
    res.slack = t;
    res.iterations = iters;
    res.objective = d.f;
    res.stationarity = stat;
    res.eq_violation = eqv;
    res.complementarity = comp;
    res.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start)
            .count();
    return res;
  };

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    // --- residuals and convergence test (mu = 0) ---
    Eigen::VectorXd r_stat =
        d.grad - d.JE.transpose() * yE - d.JI.transpose() * w;
    const double s_d =
        std::max(100.0, (yE.lpNorm<1>() + w.lpNorm<1>()) /
                            std::max(1, mE + mI)) /
        100.0;
    const double s_c =
        std::max(100.0, (mI ? w.lpNorm<1>() / mI : 0.0)) / 100.0;
    const double stat = inf_norm(r_stat) / s_d;
    const double eqv = inf_norm(d.cE);
    Eigen::VectorXd tw = t.cwiseProduct(w);
    const double comp_raw = inf_norm(tw);
    const double comp = comp_raw / s_c;
    const double r4inf = mI ? inf_norm(d.cI - t) : 0.0;

    if (stat < opts.tol_stationarity && eqv < opts.tol_equality &&
        comp < opts.tol_complementarity && r4inf < opts.tol_equality &&
        (mI == 0 || d.cI.minCoeff() > 0.0)) {
      if (!res.trace.empty()) res.trace.back().barrier_reduced = false;
      return finish(IpmStatus::Converged, iter, stat, eqv, comp);
    }

    // --- monotone barrier reduction ---
    const double comp_mu = mI ? inf_norm(tw.array().matrix() -
                                         Eigen::VectorXd::Constant(mI, mu))
                              : 0.0;
    bool reduced = false;
    // The stationarity gate never demands more than half the final
    // tolerance: once the iterate is stationary enough to terminate, only
    // complementarity should hold the barrier back.
    const double stat_gate =
        std::max(10.0 * mu, 0.5 * opts.tol_stationarity);
    if (mu > opts.mu_min && stat <= stat_gate &&
        std::max({eqv, comp_mu / s_c, r4inf}) <= 10.0 * mu) {
      // Cap the new barrier well below the current complementarity so that
      // complementarity (<= 11 mu at the next trigger) shrinks at least 10x
      // between reductions.
      mu = std::max(opts.mu_min,
                    std::min(opts.mu_shrink * mu, 0.009 * comp_raw));
      reduced = true;
      stall_count = 0;
    }

    // --- Newton step on the perturbed KKT system (t, w eliminated) ---
    Eigen::VectorXd sigma = w.cwiseQuotient(t);
    Eigen::VectorXd r4 = d.cI - t;
    Eigen::VectorXd comp_res =
        (Eigen::VectorXd::Constant(mI, mu) - t.cwiseProduct(w))
            .cwiseQuotient(t);
    Eigen::VectorXd rhs(n + mE);
    rhs.head(n) = -r_stat + d.JI.transpose() *
                                (comp_res - sigma.cwiseProduct(r4));
    rhs.tail(mE) = -d.cE;

    // Lagrangian curvature of the nonlinear constraints, refreshed with the
    // current multipliers.
    std::vector<SpTriplet> curv_t;
    problem.add_constraint_curvature(z, yE, w, &curv_t);
    for (const auto& tr : curv_t)
      if (!std::isfinite(tr.value()))
        throw NumericalFailure("non-finite constraint curvature");
    Eigen::SparseMatrix<double> Hcurv(n, n);
    Hcurv.setFromTriplets(curv_t.begin(), curv_t.end());

    Eigen::VectorXd dz, dyE, dt, dw;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool solved = false;
    double reg_try = reg;
    for (int attempt = 0; attempt < 8 && !solved; ++attempt) {
      // Hbar = H + curvature + reg I + JI^T Sigma JI via scaled rows.
      Eigen::SparseMatrix<double> JIs = d.JI;
      Eigen::VectorXd sq = sigma.cwiseSqrt();
      for (int k = 0; k < JIs.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(JIs, k); it; ++it)
          it.valueRef() *= sq[it.row()];
      Eigen::SparseMatrix<double> Hbar = d.H;
      Hbar += Hcurv;
      Hbar += (JIs.transpose() * JIs).pruned();
      Eigen::SparseMatrix<double> I(n, n);
      I.setIdentity();
      Hbar += reg_try * I;

      std::vector<SpTriplet> kt;
      kt.reserve(Hbar.nonZeros() + 2 * d.JE.nonZeros() + mE);
      for (int k = 0; k < Hbar.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(Hbar, k); it; ++it)
          kt.emplace_back(it.row(), it.col(), it.value());
      for (int k = 0; k < d.JE.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(d.JE, k); it; ++it) {
          kt.emplace_back(n + it.row(), it.col(), it.value());
          kt.emplace_back(it.col(), n + it.row(), it.value());
        }
      for (int i = 0; i < mE; ++i) kt.emplace_back(n + i, n + i, -1e-10);
      Eigen::SparseMatrix<double> K(n + mE, n + mE);
      K.setFromTriplets(kt.begin(), kt.end());

      lu.compute(K);
      if (lu.info() == Eigen::Success) {
        Eigen::VectorXd sol = lu.solve(rhs);
        if (sol.allFinite()) {
          dz = sol.head(n);
          dyE = -sol.tail(mE);
          // The exact curvature can make the reduced Hessian indefinite;
          // accept the factorization only if the step has descent curvature.
          double quad = dz.dot(Hbar * dz);
          if (quad > 0.0 || dz.norm() == 0.0) {
            solved = true;
            reg = reg_try;
            break;
          }
        }
      }
      reg_try = std::max(reg_try * 100.0, 1e-6);
    }
    if (!solved)
      throw NumericalFailure("KKT factorization failed at iteration " +
                             std::to_string(iter));

    dt = d.JI * dz + r4;
    dw = comp_res - sigma.cwiseProduct(dt);

    // --- fraction-to-boundary step limits ---
    double alpha_p = 1.0, alpha_d = 1.0;
    for (int i = 0; i < mI; ++i) {
      if (dt[i] < 0.0) alpha_p = std::min(alpha_p, -opts.tau * t[i] / dt[i]);
      if (dw[i] < 0.0) alpha_d = std::min(alpha_d, -opts.tau * w[i] / dw[i]);
    }

    // --- l1 merit line search on (z, t) ---
    // The penalty must dominate the current multipliers; decay it gradually
    // when they shrink so an early spike does not block full steps forever.
    const double nu_req = 1.2 * std::max({inf_norm(yE + dyE),
                                          mI ? inf_norm(w + dw) : 0.0, 1.0});
    nu = nu_req > nu ? nu_req : std::max(nu_req, 0.5 * nu);
    auto merit = [&](const Eigen::VectorXd& zz, const Eigen::VectorXd& tt,
                     double& f_out) {
      Eigen::VectorXd cE2, cI2;
      eval_values(problem, zz, f_out, cE2, cI2);
      double m = f_out + nu * cE2.lpNorm<1>();
      if (mI) {
        m += nu * (cI2 - tt).lpNorm<1>();
        m -= mu * tt.array().log().sum();
      }
      return m;
    };
    double barrier0 = mI ? -mu * t.array().log().sum() : 0.0;
    double merit0 = d.f + barrier0 + nu * d.cE.lpNorm<1>() +
                    (mI ? nu * r4.lpNorm<1>() : 0.0);
    double dphi = d.grad.dot(dz) + nu * (-d.cE.lpNorm<1>()) -
                  (mI ? mu * dt.cwiseQuotient(t).sum() : 0.0) -
                  (mI ? nu * r4.lpNorm<1>() : 0.0);

    double alpha = alpha_p;
    double f_trial = d.f;
    bool accepted = false;
    bool tried_soc = false;
    while (alpha > 1e-12) {
      Eigen::VectorXd zt = z + alpha * dz;
      Eigen::VectorXd tt = t + alpha * dt;
      double m = merit(zt, tt, f_trial);
      if (std::isfinite(m) && m <= merit0 + 1e-4 * alpha * std::min(dphi, 0.0)) {
        z = zt;
        t = tt;
        accepted = true;
        break;
      }
      if (!tried_soc && alpha == alpha_p) {
        // Second-order correction: the l1 merit otherwise rejects full
        // Newton steps whose constraint violation grows quadratically
        // (Maratos effect). Reuse the factorization to restore feasibility
        // at the trial point, then retest the corrected step.
        tried_soc = true;
        double f_t;
        Eigen::VectorXd cE_t, cI_t;
        eval_values(problem, zt, f_t, cE_t, cI_t);
        if (cE_t.allFinite() && cI_t.allFinite()) {
          Eigen::VectorXd r4_t = cI_t - tt;
          Eigen::VectorXd rhs2(n + mE);
          rhs2.head(n) = -d.JI.transpose() * sigma.cwiseProduct(r4_t);
          rhs2.tail(mE) = -cE_t;
          Eigen::VectorXd sol2 = lu.solve(rhs2);
          if (sol2.allFinite()) {
            Eigen::VectorXd dzc = sol2.head(n);
            Eigen::VectorXd dtc = d.JI * dzc + r4_t;
            double ac = 1.0;
            for (int i = 0; i < mI; ++i)
              if (dtc[i] < 0.0)
                ac = std::min(ac, -opts.tau * tt[i] / dtc[i]);
            Eigen::VectorXd zc = zt + ac * dzc;
            Eigen::VectorXd tc = tt + ac * dtc;
            double mc = merit(zc, tc, f_trial);
            if (std::isfinite(mc) &&
                mc <= merit0 + 1e-4 * alpha * std::min(dphi, 0.0)) {
              z = zc;
              t = tc;
              accepted = true;
              break;
            }
          }
        }
      }
      alpha *= 0.5;
    }

    IpmIterRecord rec;
    rec.iter = iter;
    rec.mu = mu;
    rec.objective = d.f;
    rec.merit_before = merit0;
    rec.stationarity = stat;
    rec.eq_violation = eqv;
    rec.complementarity = comp_raw;
    rec.alpha = accepted ? alpha : 0.0;
    rec.barrier_reduced = reduced;

    if (!accepted) {
      // Line search stall: back off one barrier stage, give up after two.
      ++stall_count;
      rec.merit_after = merit0;
      res.trace.push_back(rec);
      if (stall_count >= 2)
        return finish(IpmStatus::MaxIterations, iter + 1, stat, eqv, comp);
      mu = std::min(opts.mu_init, mu / opts.mu_shrink);
      reg = std::min(reg * 100.0, 1e-2);
      continue;
    }

    yE += alpha * dyE;
    w += alpha_d * dw;
    // Keep duals in a safeguarded band around mu/t.
    for (int i = 0; i < mI; ++i)
      w[i] = std::clamp(w[i], std::max(1e-14, mu / (1e10 * t[i])),
                        std::max(1.0, 1e10 * mu) / t[i]);

    eval_all(problem, z, d);
    double m_after = d.f + nu * d.cE.lpNorm<1>();
    if (mI)
      m_after += nu * (d.cI - t).lpNorm<1>() - mu * t.array().log().sum();
    rec.merit_after = m_after;
    res.trace.push_back(rec);
    // Levenberg adaptation: a truncated line search means the quadratic
    // model overshoots, so damp the next step; full steps relax the damping.
    if (alpha < 0.1)
      reg = std::min(reg * 3.0, 1e4);
    else if (alpha >= 0.5)
      reg = std::max(opts.reg_init, reg * 0.2);

    if (opts.verbose && iter % 10 == 0)
      std::printf(
          "it %4d mu %.1e f %.6e stat %.2e eq %.2e comp %.2e alpha %.2e "
          "ap %.2e ad %.2e nu %.1e dphi %.2e reg %.1e\n",
          iter, mu, d.f, stat, eqv, comp, alpha, alpha_p, alpha_d, nu, dphi,
          reg);
  }

  // Recompute final residuals for the report.
  Eigen::VectorXd r_stat =
      d.grad - d.JE.transpose() * yE - d.JI.transpose() * w;
  return finish(IpmStatus::MaxIterations, opts.max_iterations,
                inf_norm(r_stat), inf_norm(d.cE),
                mI ? inf_norm(t.cwiseProduct(w)) : 0.0);
}

}  // namespace percher
