#include "percher/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace percher {

namespace {

constexpr double kJunctionTol = 1e-9;

double max_state_deviation(const RobotState& a, const RobotState& b) {
  return (a.to_vector() - b.to_vector()).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<Violation> audit_collisions(const Trajectory& traj,
                                        const std::vector<LineSegment>& segments,
                                        const RobotParams& params) {
  std::vector<Violation> out;
  for (const auto& sample : traj.samples)
    for (size_t s = 0; s < segments.size(); ++s) {
      const double h = collision_constraint_hca(sample.x, segments[s], params);
      if (h < 0.0)
        out.push_back({sample.t, static_cast<int>(s), h, sample.x.p_wb});
    }
  return out;
}

DecisionVector resample_solution(const DecisionVector& dv, int n_old,
                                 int n_new) {
  DecisionVector out;
  out.horizon_T = dv.horizon_T;
  out.states.reserve(n_new + 1);
  for (int i = 0; i <= n_new; ++i) {
    const double s = static_cast<double>(i) * n_old / n_new;
    const int j = std::min(static_cast<int>(s), n_old - 1);
    const double a = s - j;
    const RobotState& lo = dv.states[j];
    const RobotState& hi = dv.states[j + 1];
    RobotState x;
    x.p_wb = (1.0 - a) * lo.p_wb + a * hi.p_wb;
    Quatd qhi = hi.q_wb;
    if (lo.q_wb.dot(qhi) < 0.0) qhi = -qhi;
    x.q_wb = quat_normalized<double>((1.0 - a) * lo.q_wb + a * qhi);
    x.v_w = (1.0 - a) * lo.v_w + a * hi.v_w;
    x.omega_b = (1.0 - a) * lo.omega_b + a * hi.omega_b;
    x.gamma = (1.0 - a) * lo.gamma + a * hi.gamma;
    out.states.push_back(x);
  }
  out.inputs.reserve(n_new);
  for (int i = 0; i < n_new; ++i) {
    const double mid = (i + 0.5) * n_old / n_new;
    out.inputs.push_back(dv.inputs[std::min(static_cast<int>(mid), n_old - 1)]);
  }
  if (dv.slacks.size() == 2 * (n_old + 1)) {
    out.slacks.resize(2 * (n_new + 1));
    for (int i = 0; i <= n_new; ++i) {
      const double s = static_cast<double>(i) * n_old / n_new;
      const int j = std::min(static_cast<int>(s), n_old - 1);
      const double a = s - j;
      for (int which = 0; which < 2; ++which)
        out.slacks[2 * i + which] = (1.0 - a) * dv.slacks[2 * j + which] +
                                    a * dv.slacks[2 * (j + 1) + which];
    }
  }
  return out;
}

RobotState default_recovery_target(const Scenario& scn) {
  Vec3 approach = scn.x_perch.p_wb - scn.x_init.p_wb;
  approach.z() = 0.0;
  if (approach.norm() < 1e-6) approach = Vec3::UnitX();
  approach.normalize();

  RobotState target;
  target.p_wb = scn.x_perch.p_wb - 1.5 * approach;
  target.p_wb.z() = std::max(target.p_wb.z(), scn.z_min + 0.5);
  target.q_wb = quat_identity();
  target.gamma = Vec4::Constant(scn.robot.hover_thrust_per_rotor());
  return target;
}

Scenario make_recovery_scenario(const Scenario& scn,
                                const RobotState& perch_end) {
  Scenario rec = scn;
  rec.x_init = perch_end;
  rec.x_perch = default_recovery_target(scn);
  if (scn.recovery.has_target_position)
    rec.x_perch.p_wb = scn.recovery.target_position;
  rec.t_min = scn.recovery.t_min;
  rec.t_max = scn.recovery.t_max;
  rec.perception_enabled = false;
  return rec;
}

namespace {

DecisionVector reversed_guess(const DecisionVector& perch,
                              const Scenario& rec_scn) {
  const int n_from = static_cast<int>(perch.inputs.size());
  DecisionVector rev;
  rev.horizon_T = perch.horizon_T;
  rev.states.resize(n_from + 1);
  rev.inputs.resize(n_from);
  for (int k = 0; k <= n_from; ++k) {
    RobotState x = perch.states[n_from - k];
    x.v_w = -x.v_w;
    x.omega_b = -x.omega_b;
    rev.states[k] = x;
  }
  for (int k = 0; k < n_from; ++k) rev.inputs[k] = -perch.inputs[n_from - 1 - k];
  if (n_from != rec_scn.n_nodes)
    rev = resample_solution(rev, n_from, rec_scn.n_nodes);
  rev.states.front() = rec_scn.x_init;
  rev.horizon_T =
      std::clamp(rev.horizon_T, rec_scn.t_min, rec_scn.t_max);
  return rev;
}

}  // namespace

Trajectory chain(const Trajectory& perch, const Trajectory& recovery) {
  if (recovery.samples.empty()) return perch;
  if (perch.samples.empty()) return recovery;

  const double dev = max_state_deviation(perch.samples.back().x,
                                         recovery.samples.front().x);
  if (dev > kJunctionTol) throw ChainingError(dev);

  Trajectory out = perch;
  const double t_junction = perch.samples.back().t;
  const double t0_rec = recovery.samples.front().t;
  for (size_t i = 1; i < recovery.samples.size(); ++i) {
    TrajectorySample s = recovery.samples[i];
    s.t = t_junction + (s.t - t0_rec);
    out.samples.push_back(s);
  }
  return out;
}

ManeuverResult generate_maneuver(const Scenario& scenario, double dt,
                                 const DecisionVector* guess) {
  ManeuverResult result;

  auto integrate_nodes = [&](const Scenario& scn, const DecisionVector& sol,
                             double T) {
    return integrate_fine(scn.x_init, sol.inputs, T / scn.n_nodes, dt,
                          scn.robot);
  };

  // A perching solve is usable when it converged onto the target pose and
  // the end of the finely integrated input schedule is a feasible start for
  // the recovery stage. An aggressive local optimum can satisfy the node
  // constraints while the open-loop integration diverges into the ground.
  auto usable = [&](const DecisionVector& sol, const SolveReport& rep,
                    const Trajectory& fine) {
    if (rep.status != SolveStatus::Converged) return false;
    const RobotState& xN = sol.states.back();
    if ((xN.p_wb - scenario.x_perch.p_wb).norm() > 0.05) return false;
    const Quatd q_err =
        quat_mul<double>(quat_conj<double>(scenario.x_perch.q_wb), xN.q_wb);
    const double angle =
        2.0 * std::atan2(q_err.tail<3>().norm(), std::abs(q_err[0]));
    if (angle > 10.0 * M_PI / 180.0) return false;
    const RobotState& xe = fine.samples.back().x;
    if (xe.p_wb.z() < scenario.z_min) return false;
    for (const auto& seg : scenario.segments)
      if (collision_constraint_hca(xe, seg, scenario.robot) < 0.0)
        return false;
    return true;
  };

  // Stage 1: perching solve at the configured resolution. The interpolated
  // cold start is tried first; when it is unusable and perception is active,
  // the solve is retried warm-started from the perception-free solution,
  // which escapes the basin where the visibility terms block large attitude
  // maneuvers.
  PerchingNlp nlp(scenario, NlpMode::Perching);
  DecisionVector dv;
  SolveReport rep;
  Trajectory perch;
  bool have_solution = false;
  if (guess) {
    std::tie(dv, rep) = solve(nlp, *guess);
    if (rep.status != SolveStatus::Converged)
      throw StageError("perch-solve", rep);
    perch = integrate_nodes(scenario, dv, dv.horizon_T);
    have_solution = true;
  } else {
    std::tie(dv, rep) = solve(nlp, initial_guess(scenario, NlpMode::Perching));
    if (rep.status == SolveStatus::Converged) {
      perch = integrate_nodes(scenario, dv, dv.horizon_T);
      have_solution = usable(dv, rep, perch);
    }
    if (!have_solution && nlp.perception_active()) {
      Scenario warm_scn = scenario;
      warm_scn.perception_enabled = false;
      PerchingNlp warm_nlp(warm_scn, NlpMode::Perching);
      auto [wdv, wrep] =
          solve(warm_nlp, initial_guess(warm_scn, NlpMode::Perching));
      if (wrep.status == SolveStatus::Converged) {
        seed_perception_slacks(scenario, &wdv);
        std::tie(dv, rep) = solve(nlp, wdv);
        if (rep.status == SolveStatus::Converged) {
          perch = integrate_nodes(scenario, dv, dv.horizon_T);
          have_solution = usable(dv, rep, perch);
        }
      }
    }
    if (!have_solution) throw StageError("perch-solve", rep);
  }
  std::vector<Violation> audit =
      audit_collisions(perch, scenario.segments, scenario.robot);

  // Stage 2: violations between shooting nodes trigger one re-solve at
  // doubled resolution, warm-started from the coarse solution.
  if (!audit.empty()) {
    Scenario fine_scn = scenario;
    fine_scn.n_nodes = 2 * scenario.n_nodes;
    PerchingNlp fine_nlp(fine_scn, NlpMode::Perching);
    DecisionVector warm =
        resample_solution(dv, scenario.n_nodes, fine_scn.n_nodes);
    auto [dv2, rep2] = solve(fine_nlp, warm);
    if (rep2.status != SolveStatus::Converged)
      throw StageError("perch-resolve", rep2);
    dv = std::move(dv2);
    rep = std::move(rep2);
    perch = integrate_nodes(fine_scn, dv, dv.horizon_T);
    audit = audit_collisions(perch, scenario.segments, scenario.robot);
    if (!audit.empty()) throw AuditFailure("perch-resolve", audit);
    result.used_higher_n = true;
  }

  result.perch_solution = dv;
  result.perch_report = rep;
  result.perch_trajectory = perch;

  // Stage 3: recovery from the end of the integrated perching maneuver to a
  // safe hover, without the perception objective.
  Scenario rec_scn = make_recovery_scenario(scenario, perch.samples.back().x);
  result.recovery_scenario = rec_scn;
  // The recovery has to undo the perching attitude maneuver, so the
  // time-reversed perching solution (negated velocities, rates and inputs)
  // is a far better seed than an interpolated guess.
  PerchingNlp rec_nlp(rec_scn, NlpMode::Recovery);
  auto [rdv, rrep] = solve(rec_nlp, reversed_guess(dv, rec_scn));
  if (rrep.status != SolveStatus::Converged) {
    auto [rdv2, rrep2] =
        solve(rec_nlp, initial_guess(rec_scn, NlpMode::Recovery));
    if (rrep2.status != SolveStatus::Converged)
      throw StageError("recovery-solve", rrep2);
    rdv = std::move(rdv2);
    rrep = std::move(rrep2);
  }

  // Integrate the recovery on the perching trajectory's uniform grid so the
  // chained maneuver keeps one global dt even though the node durations of
  // the two legs share no divisor.
  Trajectory recovery = integrate_on_grid(
      rec_scn.x_init, rdv.inputs, rdv.horizon_T / rec_scn.n_nodes,
      perch.dt, perch.samples.back().t, rec_scn.robot);
  std::vector<Violation> rec_audit =
      audit_collisions(recovery, scenario.segments, scenario.robot);
  if (!rec_audit.empty()) throw AuditFailure("recovery", rec_audit);

  result.recovery_solution = rdv;
  result.recovery_report = rrep;
  result.recovery_trajectory = recovery;
  result.chained = chain(perch, recovery);
  return result;
}

}  // namespace percher
