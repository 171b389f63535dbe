// Acceptance suite: one self-contained check per release criterion, each
// printing a single PASS/FAIL line. The process exits with the number of
// failed criteria.
#include <ceres/jet.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "percher/constraints.hpp"
#include "percher/pipeline.hpp"
#include "percher/scenario_io.hpp"

using namespace percher;

#ifndef SCENARIO_DIR
#define SCENARIO_DIR "scenarios"
#endif

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::mt19937 rng(20240817);

double urand(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Quatd random_unit_quat() {
  Quatd q;
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 4; ++i) q[i] = n(rng);
  return q.normalized();
}

Vec3 random_unit_vec() {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

double wall_seconds(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

std::string scenario_path(const char* name) {
  return std::string(SCENARIO_DIR) + "/" + name;
}

// ---------------------------------------------------------------------------
// 1. Collision-oracle equivalence.
//
// Independent oracle: clearance of the segment from the robot's inflated
// ellipsoid, computed by scanning the segment densely in the ellipsoid-scaled
// body frame and polishing the minimum with a ternary search.
//
// The comparison excludes the sigmoid transition shell, defined as the pairs
// where the end-cap augmentation materially interacts with the raw value:
// robot closer than one ellipsoid radius to the end of the span
// (dist >= half_length - max_radius) or augmentation k >= |raw| - 1e-3.
// Outside the shell the nearest point of the line is interior to the segment
// and the augmentation is too small to flip the sign, so the signs must
// agree exactly.
// ---------------------------------------------------------------------------

double oracle_scaled_clearance(const RobotState& x, const LineSegment& seg,
                               const RobotParams& pr) {
  const Vec3 radii = inflated_radii(pr, seg);
  auto scaled_dist = [&](double t) {
    const Vec3 pt = seg.origin_w + t * seg.direction_w;
    const Vec3 o_b = quat_rotate_inv<double>(x.q_wb, Vec3(pt - x.p_wb));
    return (o_b.cwiseQuotient(radii)).norm();
  };
  const int n = 4000;
  double best_t = -seg.half_length, best = scaled_dist(best_t);
  for (int i = 1; i <= n; ++i) {
    const double t = -seg.half_length + 2.0 * seg.half_length * i / n;
    const double d = scaled_dist(t);
    if (d < best) {
      best = d;
      best_t = t;
    }
  }
  double lo = std::max(-seg.half_length, best_t - 2.0 * seg.half_length / n);
  double hi = std::min(seg.half_length, best_t + 2.0 * seg.half_length / n);
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (scaled_dist(m1) < scaled_dist(m2))
      hi = m2;
    else
      lo = m1;
  }
  return scaled_dist(0.5 * (lo + hi)) - 1.0;
}

Outcome criterion_collision_oracle() {
  RobotParams pr;
  int compared = 0, mismatches = 0, pos = 0, neg = 0;
  const int total = 10000;
  const double runtime = wall_seconds([&] {
    for (int trial = 0; trial < total; ++trial) {
      LineSegment seg;
      seg.origin_w = Vec3(urand(-2, 2), urand(-2, 2), urand(-2, 2));
      seg.direction_w = random_unit_vec();
      seg.half_length = urand(0.3, 3.0);
      seg.wire_radius = urand(0.0, 0.02);

      RobotState x;
      x.q_wb = random_unit_quat();
      // Bias the position toward the segment so both signs occur often.
      const double along = urand(-1.2, 1.2) * seg.half_length;
      Vec3 lateral = random_unit_vec();
      lateral -= lateral.dot(seg.direction_w) * seg.direction_w;
      if (lateral.norm() < 1e-6) continue;
      lateral.normalize();
      x.p_wb = seg.origin_w + along * seg.direction_w +
               urand(0.0, 0.9) * lateral;

      const double h = collision_constraint_hca(x, seg, pr);
      if (std::abs(h) < 1e-3) continue;  // indeterminate band

      const Vec3 radii = inflated_radii(pr, seg);
      const double dist = (x.p_wb - seg.origin_w).norm();
      const ScaledLine sl = scale_line(seg, x, pr);
      const double raw = collision_raw(sl);
      const double k = augmentation_k(x, seg, pr);
      const bool in_shell = dist >= seg.half_length - radii.maxCoeff() ||
                            k >= std::abs(raw) - 1e-3;
      if (in_shell) continue;

      const double clearance = oracle_scaled_clearance(x, seg, pr);
      ++compared;
      (clearance > 0.0 ? pos : neg)++;
      if ((h > 0.0) != (clearance > 0.0)) ++mismatches;
    }
  });
  std::ostringstream os;
  os << compared << "/" << total << " pairs compared (" << pos << " clear, "
     << neg << " colliding), " << mismatches << " sign mismatches, "
     << std::fixed << runtime << " s";
  return {mismatches == 0 && compared > 1000 && pos > 100 && neg > 100 &&
              runtime < 120.0,
          os.str()};
}

// ---------------------------------------------------------------------------
// 2. Gradient suite: forward-mode derivatives vs central finite differences.
// ---------------------------------------------------------------------------

// Max component error of (ad - fd) relative to the gradient scale.
double rel_gradient_error(const Eigen::VectorXd& ad, const Eigen::VectorXd& fd) {
  const double scale = std::max(1.0, ad.cwiseAbs().maxCoeff());
  return (ad - fd).cwiseAbs().maxCoeff() / scale;
}

Outcome criterion_gradient_suite() {
  const double step = 1e-6, tol = 1e-5;
  RobotParams pr;
  CameraModel cam;
  cam.extrinsics.position = Vec3(0.1, 0.0, 0.0);
  cam.extrinsics.orientation = Quatd(0.5, -0.5, 0.5, -0.5);
  std::ostringstream os;
  bool ok = true;

  // --- state_derivative over (x, u) ---
  {
    using J = ceres::Jet<double, 21>;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      StateT<double> x;
      InputT<double> u;
      for (int i = 0; i < kStateDim; ++i) x[i] = urand(-2.0, 2.0);
      x.segment<4>(3) = random_unit_quat();
      for (int i = 0; i < kInputDim; ++i) u[i] = urand(-5.0, 5.0);

      StateT<J> xj;
      InputT<J> uj;
      for (int i = 0; i < kStateDim; ++i) xj[i] = J(x[i], i);
      for (int i = 0; i < kInputDim; ++i) uj[i] = J(u[i], kStateDim + i);
      StateT<J> dj = state_derivative_t<J>(xj, uj, pr);

      for (int col = 0; col < kStateDim + kInputDim; ++col) {
        auto eval = [&](double delta) {
          StateT<double> xp = x;
          InputT<double> up = u;
          if (col < kStateDim)
            xp[col] += delta;
          else
            up[col - kStateDim] += delta;
          return StateT<double>(state_derivative_t<double>(xp, up, pr));
        };
        StateT<double> fd = (eval(step) - eval(-step)) / (2.0 * step);
        Eigen::VectorXd ad(kStateDim);
        for (int r = 0; r < kStateDim; ++r) ad[r] = dj[r].v[col];
        worst = std::max(worst, rel_gradient_error(ad, fd));
      }
    }
    os << "f' " << std::scientific << worst;
    ok = ok && worst < tol;
  }

  // --- pose-dependent scalars: h_ca, h_lc, h_sv, reprojection ---
  {
    using J = ceres::Jet<double, 7>;
    LineSegment seg;
    seg.origin_w = Vec3(0.0, 0.0, 2.0);
    seg.direction_w = Vec3::UnitY();
    seg.half_length = 2.5;
    seg.wire_radius = 0.01;

    struct Fn {
      const char* name;
      std::function<J(const Vec3T<J>&, const QuatT<J>&)> eval;
    };
    std::vector<Fn> fns;
    fns.push_back({"h_ca", [&](const Vec3T<J>& p, const QuatT<J>& q) {
                     return collision_constraint_t<J>(seg, p, q, pr);
                   }});
    fns.push_back({"h_lc", [&](const Vec3T<J>& p, const QuatT<J>& q) {
                     return cheirality_constraint_t<J>(
                         line_in_camera_t<J>(seg, p, q, cam));
                   }});
    fns.push_back({"h_sv", [&](const Vec3T<J>& p, const QuatT<J>& q) {
                     return visibility_constraint_t<J>(
                         line_in_camera_t<J>(seg, p, q, cam));
                   }});
    fns.push_back({"reproj", [&](const Vec3T<J>& p, const QuatT<J>& q) {
                     return reprojection_error_t<J>(
                         line_in_camera_t<J>(seg, p, q, cam));
                   }});

    for (const auto& fn : fns) {
      double worst = 0.0;
      int accepted = 0;
      while (accepted < 100) {
        // Pose roughly facing the line from a couple of meters away, with a
        // moderate random attitude so the camera geometry stays
        // well-conditioned (non-degenerate points only).
        Vec3 p(urand(-3.0, -1.0), urand(-0.8, 0.8), urand(1.2, 2.8));
        Quatd dq = random_unit_quat();
        Quatd q = quat_normalized<double>(Quatd(1.0, 0.15 * dq[1], 0.15 * dq[2],
                                                0.15 * dq[3]));
        RobotState xs;
        xs.p_wb = p;
        xs.q_wb = q;
        PerceptionVectors pv = line_in_camera(xs, seg, cam);
        if (pv.degenerate || std::abs(pv.d3d.z()) < 1.0 ||
            pv.n_i.head<2>().norm() < 1.0)
          continue;
        ++accepted;

        Eigen::Matrix<double, 7, 1> z;
        z << p, q;
        Vec3T<J> pj;
        QuatT<J> qj;
        for (int i = 0; i < 3; ++i) pj[i] = J(z[i], i);
        for (int i = 0; i < 4; ++i) qj[i] = J(z[3 + i], 3 + i);
        J val = fn.eval(pj, qj);
        Eigen::VectorXd ad = val.v;

        Eigen::VectorXd fd(7);
        for (int i = 0; i < 7; ++i) {
          auto eval = [&](double delta) {
            Eigen::Matrix<double, 7, 1> zp = z;
            zp[i] += delta;
            Vec3T<J> pp;
            QuatT<J> qp;
            for (int j = 0; j < 3; ++j) pp[j] = J(zp[j]);
            for (int j = 0; j < 4; ++j) qp[j] = J(zp[3 + j]);
            return fn.eval(pp, qp).a;
          };
          fd[i] = (eval(step) - eval(-step)) / (2.0 * step);
        }
        worst = std::max(worst, rel_gradient_error(ad, fd));
      }
      os << "  " << fn.name << " " << std::scientific << worst;
      ok = ok && worst < tol;
    }
  }

  // --- cost-term vectors, through the assembled NLP objective gradient ---
  {
    Scenario s;
    s.x_init.p_wb = Vec3(-2.0, 0.0, 1.65);
    s.x_init.gamma = Vec4::Constant(s.robot.hover_thrust_per_rotor());
    s.x_perch = s.x_init;
    s.x_perch.p_wb = Vec3(-0.5, 0.0, 1.65);
    s.t_min = 0.5;
    s.t_max = 5.0;
    s.n_nodes = 4;
    s.segments.push_back({Vec3(0.0, 0.0, 2.0), Vec3::UnitY(), 2.5, 0.01});
    s.perception_enabled = true;

    PerchingNlp nlp(s, NlpMode::Perching);
    Eigen::VectorXd z0 = nlp.pack(initial_guess(s, NlpMode::Perching));
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd z = z0;
      for (int i = 0; i < z.size(); ++i) z[i] += urand(-1e-3, 1e-3);
      Eigen::VectorXd grad;
      nlp.eval_objective(z, &grad, nullptr);
      Eigen::VectorXd fd(z.size());
      for (int i = 0; i < z.size(); ++i) {
        Eigen::VectorXd zp = z, zm = z;
        zp[i] += step;
        zm[i] -= step;
        fd[i] = (nlp.eval_objective(zp, nullptr, nullptr) -
                 nlp.eval_objective(zm, nullptr, nullptr)) /
                (2.0 * step);
      }
      worst = std::max(worst, rel_gradient_error(grad, fd));
    }
    os << "  cost-terms " << std::scientific << worst;
    ok = ok && worst < tol;
  }

  return {ok, "max relative errors:" + os.str() + " (tol 1e-5)"};
}

// ---------------------------------------------------------------------------
// 3. Stationary solve pins the hover and the minimum horizon.
// ---------------------------------------------------------------------------

Outcome criterion_stationary() {
  Scenario s;
  s.x_init.p_wb = Vec3(0.0, 0.0, 1.0);
  s.x_init.gamma = Vec4::Constant(s.robot.hover_thrust_per_rotor());
  s.x_perch = s.x_init;
  s.t_min = 0.5;
  s.t_max = 5.0;
  s.n_nodes = 10;
  s.perception_enabled = false;

  PerchingNlp nlp(s, NlpMode::Perching);
  auto [dv, rep] = solve(nlp, initial_guess(s, NlpMode::Perching));
  double max_dev = 0.0;
  for (const auto& x : dv.states)
    max_dev = std::max(max_dev, (x.p_wb - s.x_perch.p_wb).norm());
  const double t_gap = dv.horizon_T - s.t_min;
  std::ostringstream os;
  os << to_string(rep.status) << ", max position deviation " << std::scientific
     << max_dev << " m, T - T_min = " << t_gap << " s (allowed "
     << 1e-3 * (s.t_max - s.t_min) << ")";
  return {rep.status == SolveStatus::Converged && max_dev < 1e-3 &&
              std::abs(t_gap) < 1e-3 * (s.t_max - s.t_min),
          os.str()};
}

// ---------------------------------------------------------------------------
// 4. 80-degree desk-scale perching.
// ---------------------------------------------------------------------------

struct ManeuverCache {
  Scenario scenario;
  ManeuverResult result;
  double wall = 0.0;
  bool valid = false;
  std::string error;
};

ManeuverCache run_pipeline(const char* file) {
  ManeuverCache c;
  try {
    c.scenario = load_scenario(scenario_path(file));
    c.wall = wall_seconds([&] { c.result = generate_maneuver(c.scenario); });
    c.valid = true;
  } catch (const std::exception& e) {
    c.error = e.what();
  }
  return c;
}

Outcome criterion_perch80(const ManeuverCache& c) {
  if (!c.valid) return {false, "pipeline failed: " + c.error};
  const auto& r = c.result;
  const double term_err =
      (r.perch_solution.states.back().p_wb - c.scenario.x_perch.p_wb).norm();
  double min_h = 1e300, min_g = 1e300, max_g = -1e300, min_z = 1e300;
  for (const auto& smp : r.perch_trajectory.samples) {
    for (const auto& seg : c.scenario.segments)
      min_h = std::min(min_h,
                       collision_constraint_hca(smp.x, seg, c.scenario.robot));
    min_g = std::min(min_g, smp.x.gamma.minCoeff());
    max_g = std::max(max_g, smp.x.gamma.maxCoeff());
    min_z = std::min(min_z, smp.x.p_wb.z());
  }
  std::ostringstream os;
  os << to_string(r.perch_report.status) << " in "
     << r.perch_report.iterations << " iterations, terminal error "
     << std::scientific << term_err << " m, fine grid: min h_ca "
     << std::fixed << min_h << ", thrust [" << min_g << ", " << max_g
     << "], min z " << min_z << ", wall " << c.wall << " s";
  return {r.perch_report.status == SolveStatus::Converged &&
              r.perch_report.iterations <= 5000 && term_err < 0.01 &&
              min_h >= 0.0 && min_g >= 0.0 &&
              max_g <= c.scenario.robot.gamma_max + 1e-9 &&
              min_z >= c.scenario.z_min && c.wall < 60.0,
          os.str()};
}

// ---------------------------------------------------------------------------
// 5. 180-degree upside-down maneuver with recovery.
// ---------------------------------------------------------------------------

Outcome criterion_perch180(const ManeuverCache& c) {
  if (!c.valid) return {false, "pipeline failed: " + c.error};
  const auto& r = c.result;

  // Terminal tilt: angle between the body z axis and world up.
  const Quatd qN = r.perch_trajectory.samples.back().x.q_wb;
  const Vec3 body_z = quat_rotate<double>(qN, Vec3::UnitZ());
  const double tilt_deg =
      std::acos(std::clamp(body_z.z(), -1.0, 1.0)) * 180.0 / M_PI;

  double min_g = 1e300;
  for (const auto& smp : r.chained.samples)
    min_g = std::min(min_g, smp.x.gamma.minCoeff());
  double min_rec_z = 1e300;
  for (const auto& smp : r.recovery_trajectory.samples)
    min_rec_z = std::min(min_rec_z, smp.x.p_wb.z());

  std::ostringstream os;
  os << to_string(r.perch_report.status) << ", terminal tilt " << std::fixed
     << tilt_deg << " deg, min thrust " << std::scientific << min_g
     << " N, recovery min z " << std::fixed << min_rec_z << " m (floor "
     << c.scenario.z_min << "), wall " << c.wall << " s";
  return {r.perch_report.status == SolveStatus::Converged &&
              r.recovery_report.status == SolveStatus::Converged &&
              std::abs(tilt_deg - 180.0) <= 1.0 && min_g >= 0.0 &&
              min_rec_z >= c.scenario.z_min,
          os.str()};
}

// ---------------------------------------------------------------------------
// 6. Perception awareness lowers the reprojection error.
// ---------------------------------------------------------------------------

double mean_abs_reproj_first70(const Trajectory& traj, const Scenario& scn) {
  const LineSegment& seg = scn.segments[scn.objective_segment];
  const double t_cut =
      traj.samples.front().t + 0.7 * traj.duration();
  double acc = 0.0;
  int n = 0;
  for (const auto& smp : traj.samples) {
    if (smp.t > t_cut) break;
    acc += std::abs(reprojection_error(smp.x, seg, scn.camera));
    ++n;
  }
  return acc / std::max(1, n);
}

Outcome criterion_perception_effect(const ManeuverCache& c80) {
  if (!c80.valid) return {false, "pipeline failed: " + c80.error};

  // Perception-disabled plan of the same scenario.
  Scenario blind = c80.scenario;
  blind.perception_enabled = false;
  PerchingNlp nlp(blind, NlpMode::Perching);
  auto [dv, rep] = solve(nlp, initial_guess(blind, NlpMode::Perching));
  if (rep.status != SolveStatus::Converged)
    return {false, "perception-disabled solve did not converge"};
  Trajectory blind_traj =
      integrate_fine(blind.x_init, dv.inputs, dv.horizon_T / blind.n_nodes,
                     1e-3, blind.robot);

  const double aware =
      mean_abs_reproj_first70(c80.result.perch_trajectory, c80.scenario);
  const double unaware = mean_abs_reproj_first70(blind_traj, c80.scenario);

  // Softened perception constraints hold exactly over the non-decayed
  // portion (first 70% of the nodes) of the perception-aware plan.
  const auto& states = c80.result.perch_solution.states;
  const int n_nodes = static_cast<int>(states.size()) - 1;
  const LineSegment& seg = c80.scenario.segments[c80.scenario.objective_segment];
  double worst_violation = 0.0;
  for (int k = 0; k <= n_nodes; ++k) {
    if (k > 0.7 * n_nodes) break;
    const double lc =
        cheirality_constraint_hlc(states[k], seg, c80.scenario.camera);
    const double sv =
        visibility_constraint_hsv(states[k], seg, c80.scenario.camera);
    worst_violation = std::max({worst_violation, -lc, -sv});
  }

  std::ostringstream os;
  os << "mean |reproj| over first 70%: aware " << std::fixed << aware
     << " px vs unaware " << unaware
     << " px; worst early h_lc/h_sv violation " << std::scientific
     << worst_violation;
  return {aware < unaware && worst_violation <= 1e-6, os.str()};
}

// ---------------------------------------------------------------------------
// 7. Catenary fit accuracy and monotonicity.
// ---------------------------------------------------------------------------

Outcome criterion_catenary() {
  CatenarySpec spec;
  spec.start = Vec3(0.0, 0.0, 20.0);
  spec.end = Vec3(185.0, 0.0, 20.0);
  spec.sag = 5.0;
  spec.samples = 1024;
  std::vector<Vec3> poly = catenary_world_polyline(spec);

  FitError e15 = fit_error(poly, fit_segments_count(poly, 15));
  bool monotone = true;
  double prev = 1e300;
  std::ostringstream counts;
  for (int count : {4, 6, 8, 10, 12, 15, 18, 24}) {
    FitError e = fit_error(poly, fit_segments_count(poly, count));
    if (e.max_error > prev + 1e-12) monotone = false;
    prev = e.max_error;
    counts << " " << count << ":" << std::fixed << e.max_error;
  }
  std::ostringstream os;
  os << "15 segments: mean " << std::fixed << e15.mean_error << " m, max "
     << e15.max_error << " m; max error by count:" << counts.str();
  return {e15.mean_error <= 0.05 && monotone, os.str()};
}

// ---------------------------------------------------------------------------
// 8. Chaining continuity.
// ---------------------------------------------------------------------------

Outcome criterion_chaining(const ManeuverCache& c) {
  if (!c.valid) return {false, "pipeline failed: " + c.error};
  const auto& r = c.result;
  const double junction =
      (r.perch_trajectory.samples.back().x.to_vector() -
       r.recovery_trajectory.samples.front().x.to_vector())
          .cwiseAbs()
          .maxCoeff();
  bool increasing = true, uniform = true;
  const auto& s = r.chained.samples;
  for (size_t i = 1; i < s.size(); ++i) {
    if (s[i].t <= s[i - 1].t) increasing = false;
    if (std::abs((s[i].t - s[i - 1].t) - r.chained.dt) > 1e-9 * r.chained.dt)
      uniform = false;
  }
  std::ostringstream os;
  os << "junction mismatch " << std::scientific << junction << ", "
     << s.size() << " samples, dt " << r.chained.dt
     << (increasing ? ", strictly increasing" : ", NOT increasing")
     << (uniform ? ", uniform" : ", NOT uniform");
  return {junction < 1e-9 && increasing && uniform, os.str()};
}

// ---------------------------------------------------------------------------
// 9. Higher-resolution re-solve path.
// ---------------------------------------------------------------------------

Outcome criterion_resolve_path() {
  Scenario s = load_scenario(scenario_path("adversarial_coarse.json"));
  ManeuverResult r = generate_maneuver(s);
  const auto final_audit = audit_collisions(r.chained, s.segments, s.robot);
  std::ostringstream os;
  os << (r.used_higher_n ? "re-solve triggered" : "re-solve NOT triggered")
     << ", final audit " << final_audit.size() << " violations";
  return {r.used_higher_n && final_audit.empty() && r.audit.empty(), os.str()};
}

// ---------------------------------------------------------------------------
// 10. Bitwise determinism of generation.
// ---------------------------------------------------------------------------

Outcome criterion_determinism() {
  Scenario s = load_scenario(scenario_path("climb.json"));
  ManeuverResult a = generate_maneuver(s);
  ManeuverResult b = generate_maneuver(s);
  const std::string csv_a = trajectory_to_csv(a.chained);
  const std::string csv_b = trajectory_to_csv(b.chained);
  std::ostringstream os;
  os << csv_a.size() << " bytes vs " << csv_b.size() << " bytes, "
     << (csv_a == csv_b ? "identical" : "DIFFERENT");
  return {csv_a == csv_b, os.str()};
}

void report(int id, const char* title, const std::function<Outcome()>& fn,
            int* failures) {
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %2d [%s]: %s — %s\n", id, title,
              o.pass ? "PASS" : "FAIL", o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++*failures;
}

}  // namespace

int main() {
  int failures = 0;
  ManeuverCache c80, c180;

  report(1, "collision oracle", criterion_collision_oracle, &failures);
  report(2, "gradient suite", criterion_gradient_suite, &failures);
  report(3, "stationary solve", criterion_stationary, &failures);
  c80 = run_pipeline("perch80.json");
  report(4, "80 deg perching", [&] { return criterion_perch80(c80); },
         &failures);
  c180 = run_pipeline("perch180.json");
  report(5, "180 deg maneuver", [&] { return criterion_perch180(c180); },
         &failures);
  report(6, "perception effect",
         [&] { return criterion_perception_effect(c80); }, &failures);
  report(7, "catenary fit", criterion_catenary, &failures);
  report(8, "chaining", [&] { return criterion_chaining(c80); }, &failures);
  report(9, "re-solve path", criterion_resolve_path, &failures);
  report(10, "determinism", criterion_determinism, &failures);

  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures;
}
