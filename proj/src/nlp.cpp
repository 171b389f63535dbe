#include "percher/nlp.hpp"

#include <ceres/jet.h>

#include "percher/dual2.hpp"

#include <cmath>
#include <utility>

namespace percher {

namespace {

using Jet7 = ceres::Jet<double, 7>;
using Jet22 = ceres::Jet<double, 22>;
// Second-order forward scalars for the Lagrangian curvature terms.
using Dual7 = Dual2<7>;
using Dual22 = Dual2<22>;

// Denominator conditioning for the reprojection error inside the NLP only;
// the standalone constraint functions keep the exact formula.
constexpr double kReprojSmoothing = 1e-6;

// Clearance added to the altitude floor at interior and terminal nodes, so
// the inter-node arc of the integrated trajectory cannot dip below z_min
// when the floor constraint is active.
constexpr double kZFloorMargin = 0.02;

template <typename J>
void seed_pose(const Eigen::VectorXd& z, int base, Vec3T<J>* p, QuatT<J>* q) {
  for (int i = 0; i < 3; ++i) (*p)[i] = J(z[base + i], i);
  for (int i = 0; i < 4; ++i) (*q)[i] = J(z[base + 3 + i], 3 + i);
}

void seed2_pose(const Eigen::VectorXd& z, int base, Vec3T<Dual7>* p,
                QuatT<Dual7>* q) {
  for (int i = 0; i < 3; ++i) (*p)[i] = Dual7(z[base + i], i);
  for (int i = 0; i < 4; ++i) (*q)[i] = Dual7(z[base + 3 + i], 3 + i);
}

// Gradient accumulation for one weighted squared residual entry.
struct QuadAccum {
  double* f;
  Eigen::VectorXd* grad;
  std::vector<SpTriplet>* hess;

  void add(double weight, double e,
           const std::vector<std::pair<int, double>>& g) const {
    *f += weight * e * e;
    if (grad)
      for (auto& [c, v] : g) (*grad)[c] += 2.0 * weight * e * v;
    if (hess)
      for (auto& [c1, v1] : g)
        for (auto& [c2, v2] : g)
          hess->emplace_back(c1, c2, 2.0 * weight * v1 * v2);
  }
};

Eigen::Matrix<double, 3, 4> quat_error_jacobian(const Quatd& q_perch,
                                                double sign) {
  // rows 1..3 of the left-multiplication matrix of q_perch^-1.
  const Quatd a = quat_conj<double>(q_perch);
  Eigen::Matrix<double, 3, 4> jac;
  jac << a[1], a[0], -a[3], a[2],
         a[2], a[3], a[0], -a[1],
         a[3], -a[2], a[1], a[0];
  return sign * jac;
}

}  // namespace

void Scenario::validate() const {
  robot.validate();
  camera.validate();
  x_init.validate();
  x_perch.validate();
  for (const auto& s : segments) s.validate();
  if (!(t_min < t_max))
    throw std::invalid_argument("Scenario: need t_min < t_max");
  if (!(t_min > 0.0)) throw std::invalid_argument("Scenario: t_min must be > 0");
  if (n_nodes < 2) throw std::invalid_argument("Scenario: need N >= 2");
  if (shooting_substeps < 1)
    throw std::invalid_argument("Scenario: need shooting_substeps >= 1");
  if (!segments.empty() &&
      (objective_segment < 0 ||
       objective_segment >= static_cast<int>(segments.size())))
    throw std::invalid_argument("Scenario: objective_segment out of range");
  if (perception_enabled && segments.empty())
    throw std::invalid_argument(
        "Scenario: perception requires at least one segment");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

Eigen::Matrix<double, 8, 1> running_cost_terms(const RobotState& x,
                                               const Vec4& u, double T, int k,
                                               const Scenario& scn,
                                               bool perception_active) {
  const double N = scn.n_nodes;
  Eigen::Matrix<double, 8, 1> y;
  y.segment<4>(0) = x.gamma * (T / N) + u * (T * T / (2.0 * N * N));
  y.segment<3>(4) = x.omega_b;
  y[7] = 0.0;
  if (perception_active && !scn.segments.empty()) {
    const double decay =
        std::exp(-scn.weights.perception_decay_rate * k / N);
    auto pv = line_in_camera_t<double>(scn.segments[scn.objective_segment],
                                       x.p_wb, x.q_wb, scn.camera);
    y[7] = decay * reprojection_error_t<double>(pv, kReprojSmoothing);
  }
  return y;
}

Eigen::Matrix<double, 12, 1> terminal_cost_terms(const RobotState& x,
                                                 const Scenario& scn) {
  Eigen::Matrix<double, 12, 1> y;
  y.segment<3>(0) = x.p_wb - scn.x_perch.p_wb;
  Quatd qe = quat_mul<double>(quat_conj<double>(scn.x_perch.q_wb), x.q_wb);
  if (qe[0] < 0.0) qe = -qe;
  y.segment<3>(3) = qe.segment<3>(1);
  y.segment<3>(6) = x.v_w - scn.x_perch.v_w;
  y.segment<3>(9) = x.omega_b - scn.x_perch.omega_b;
  return y;
}

PerchingNlp::PerchingNlp(const Scenario& scenario, NlpMode mode)
    : scn_(scenario), mode_(mode) {
  scn_.validate();
  N_ = scn_.n_nodes;
  perception_ = mode_ == NlpMode::Perching && scn_.perception_enabled &&
                !scn_.segments.empty();

  slack_base_ = 1 + kStateDim * (N_ + 1) + kInputDim * N_;
  num_vars_ = slack_base_ + (perception_ ? 2 * (N_ + 1) : 0);

  for (const auto& seg : scn_.segments) {
    double dmin = inflated_radii(scn_.robot, seg).minCoeff();
    ca_scale_.push_back(dmin * dmin * dmin * dmin);
  }
  lc_scale_ = 1.0 / (scn_.camera.fx * scn_.camera.fy);
  sv_scale_ = 1.0 / (scn_.camera.fx * scn_.camera.fy);
  u_scale_ = 1.0 / std::max(std::abs(scn_.robot.u_min), scn_.robot.u_max);

  num_ineq_ = 2                                     // horizon bounds
              + (N_ + 1)                            // z_min
              + 8 * (N_ + 1)                        // thrust bounds
              + 8 * N_                              // input bounds
              + (N_ + 1) * static_cast<int>(scn_.segments.size())  // h_ca
              + (perception_ ? 4 * (N_ + 1) : 0);   // soft rows + slack >= 0

  // The pinned initial state must satisfy the hard bounds itself.
  const RobotState& x0 = scn_.x_init;
  if (x0.p_wb.z() < scn_.z_min)
    throw InfeasibleStartError("x_init violates z_min");
  if (x0.gamma.minCoeff() < 0.0 || x0.gamma.maxCoeff() > scn_.robot.gamma_max)
    throw InfeasibleStartError("x_init thrusts outside [0, gamma_max]");
  for (size_t i = 0; i < scn_.segments.size(); ++i)
    if (collision_constraint_hca(x0, scn_.segments[i], scn_.robot) < 0.0)
      throw InfeasibleStartError("x_init collides with segment " +
                                 std::to_string(i));
}

int PerchingNlp::num_vars() const { return num_vars_; }
int PerchingNlp::num_eq() const { return kStateDim * (N_ + 1); }
int PerchingNlp::num_ineq() const { return num_ineq_; }

double PerchingNlp::eval_objective(const Eigen::VectorXd& z,
                                   Eigen::VectorXd* grad,
                                   std::vector<SpTriplet>* hessian) const {
  double f = 0.0;
  if (grad) grad->setZero(num_vars_);
  QuadAccum acc{&f, grad, hessian};

  const double range = scn_.t_max - scn_.t_min;
  const double T = theta_to_T(z[idx_theta()]);
  const double N = N_;
  const Weights& W = scn_.weights;

  for (int k = 0; k < N_; ++k) {
    const int xs = idx_state(k);
    const int us = idx_input(k);
    // Thrust integral over the node, gamma T/N + u T^2/(2 N^2).
    for (int i = 0; i < 4; ++i) {
      const double g = z[xs + 13 + i];
      const double u = z[us + i];
      const double e = g * T / N + u * T * T / (2.0 * N * N);
      acc.add(W.thrust, e,
              {{xs + 13 + i, T / N},
               {us + i, T * T / (2.0 * N * N)},
               {idx_theta(), (g / N + u * T / (N * N)) * range}});
      if (hessian) {
        // residual curvature 2 w e d2e; the residual is bilinear in
        // (gamma, u) x T so Gauss-Newton alone misses these cross terms.
        const double w2e = 2.0 * W.thrust * e;
        const double d_gt = w2e * range / N;
        const double d_ut = w2e * range * T / (N * N);
        hessian->emplace_back(xs + 13 + i, idx_theta(), d_gt);
        hessian->emplace_back(idx_theta(), xs + 13 + i, d_gt);
        hessian->emplace_back(us + i, idx_theta(), d_ut);
        hessian->emplace_back(idx_theta(), us + i, d_ut);
        hessian->emplace_back(idx_theta(), idx_theta(),
                              w2e * range * range * u / (N * N));
      }
    }
    for (int i = 0; i < 3; ++i)
      acc.add(W.omega, z[xs + 10 + i], {{xs + 10 + i, 1.0}});
  }

  if (perception_ && W.reproj > 0.0) {
    const LineSegment& seg = scn_.segments[scn_.objective_segment];
    for (int k = 0; k < N_; ++k) {
      const int xs = idx_state(k);
      const double decay = std::exp(-W.perception_decay_rate * k / N);
      if (grad || hessian) {
        Vec3T<Jet7> p;
        QuatT<Jet7> q;
        seed_pose(z, xs, &p, &q);
        Jet7 r = reprojection_error_t<Jet7>(
            line_in_camera_t<Jet7>(seg, p, q, scn_.camera), kReprojSmoothing);
        std::vector<std::pair<int, double>> g;
        for (int j = 0; j < 7; ++j) g.emplace_back(xs + j, decay * r.v[j]);
        acc.add(W.reproj, decay * r.a, g);
      } else {
        Vec3 p = z.segment<3>(xs);
        Quatd q = z.segment<4>(xs + 3);
        double r = reprojection_error_t<double>(
            line_in_camera_t<double>(seg, p, q, scn_.camera),
            kReprojSmoothing);
        f += W.reproj * decay * decay * r * r;
      }
    }
  }

  // Terminal block.
  {
    const int xs = idx_state(N_);
    for (int i = 0; i < 3; ++i)
      acc.add(W.terminal_pos, z[xs + i] - scn_.x_perch.p_wb[i], {{xs + i, 1.0}});
    Quatd qN = z.segment<4>(xs + 3);
    Quatd qe = quat_mul<double>(quat_conj<double>(scn_.x_perch.q_wb), qN);
    double sign = qe[0] < 0.0 ? -1.0 : 1.0;
    auto jq = quat_error_jacobian(scn_.x_perch.q_wb, sign);
    for (int i = 0; i < 3; ++i) {
      std::vector<std::pair<int, double>> g;
      for (int j = 0; j < 4; ++j) g.emplace_back(xs + 3 + j, jq(i, j));
      acc.add(W.terminal_att, sign * qe[1 + i], g);
    }
    for (int i = 0; i < 3; ++i)
      acc.add(W.terminal_vel, z[xs + 7 + i] - scn_.x_perch.v_w[i],
              {{xs + 7 + i, 1.0}});
    for (int i = 0; i < 3; ++i)
      acc.add(W.terminal_omega, z[xs + 10 + i] - scn_.x_perch.omega_b[i],
              {{xs + 10 + i, 1.0}});
  }

  if (perception_) {
    for (int k = 0; k <= N_; ++k) {
      const double decay = std::exp(-W.perception_decay_rate * k / N);
      for (int which = 0; which < 2; ++which) {
        const int si = idx_slack(k, which);
        acc.add(W.soft_penalty * decay, z[si], {{si, 1.0}});
      }
    }
  }
  return f;
}

void PerchingNlp::eval_eq(const Eigen::VectorXd& z, Eigen::VectorXd& c,
                          std::vector<SpTriplet>* jac) const {
  c.resize(num_eq());
  const double range = scn_.t_max - scn_.t_min;
  const double T = theta_to_T(z[idx_theta()]);

  // x_0 = x_init
  for (int i = 0; i < kStateDim; ++i) {
    c[i] = z[idx_state(0) + i] - scn_.x_init.to_vector()[i];
    if (jac) jac->emplace_back(i, idx_state(0) + i, 1.0);
  }

  for (int k = 0; k < N_; ++k) {
    const int row = kStateDim * (k + 1);
    const int xs = idx_state(k);
    const int us = idx_input(k);
    if (jac) {
      StateT<Jet22> xj;
      InputT<Jet22> uj;
      for (int i = 0; i < kStateDim; ++i) xj[i] = Jet22(z[xs + i], i);
      for (int i = 0; i < kInputDim; ++i)
        uj[i] = Jet22(z[us + i], kStateDim + i);
      Jet22 Tj(T, kStateDim + kInputDim);
      StateT<Jet22> pred = shooting_step_t<Jet22>(xj, uj, Tj, N_, scn_.robot, scn_.shooting_substeps);
      for (int i = 0; i < kStateDim; ++i) {
        c[row + i] = z[idx_state(k + 1) + i] - pred[i].a;
        jac->emplace_back(row + i, idx_state(k + 1) + i, 1.0);
        for (int j = 0; j < kStateDim; ++j)
          jac->emplace_back(row + i, xs + j, -pred[i].v[j]);
        for (int j = 0; j < kInputDim; ++j)
          jac->emplace_back(row + i, us + j, -pred[i].v[kStateDim + j]);
        jac->emplace_back(row + i, idx_theta(),
                          -pred[i].v[kStateDim + kInputDim] * range);
      }
    } else {
      StateT<double> xk = z.segment<kStateDim>(xs);
      Vec4 uk = z.segment<kInputDim>(us);
      StateT<double> pred = shooting_step_t<double>(xk, uk, T, N_, scn_.robot, scn_.shooting_substeps);
      c.segment<kStateDim>(row) =
          z.segment<kStateDim>(idx_state(k + 1)) - pred;
    }
  }
}

void PerchingNlp::eval_ineq(const Eigen::VectorXd& z, Eigen::VectorXd& c,
                            std::vector<SpTriplet>* jac) const {
  c.resize(num_ineq_);
  int r = 0;
  auto set = [&](double value, std::initializer_list<std::pair<int, double>> g) {
    c[r] = value;
    if (jac)
      for (auto& [col, v] : g) jac->emplace_back(r, col, v);
    ++r;
  };

  const double theta = z[idx_theta()];
  set(theta, {{idx_theta(), 1.0}});
  set(1.0 - theta, {{idx_theta(), -1.0}});

  // Node altitudes keep a small margin above the floor so the continuous
  // trajectory between nodes stays feasible when the bound is active. The
  // initial node is exempt: its state is pinned to x_init, which only has
  // to clear the raw floor.
  for (int k = 0; k <= N_; ++k) {
    const int xs = idx_state(k);
    const double margin = (k == 0) ? 0.0 : kZFloorMargin;
    set(z[xs + 2] - (scn_.z_min + margin), {{xs + 2, 1.0}});
  }
  for (int k = 0; k <= N_; ++k) {
    const int xs = idx_state(k);
    for (int i = 0; i < 4; ++i) set(z[xs + 13 + i], {{xs + 13 + i, 1.0}});
    for (int i = 0; i < 4; ++i)
      set(scn_.robot.gamma_max - z[xs + 13 + i], {{xs + 13 + i, -1.0}});
  }
  for (int k = 0; k < N_; ++k) {
    const int us = idx_input(k);
    for (int i = 0; i < 4; ++i)
      set((z[us + i] - scn_.robot.u_min) * u_scale_, {{us + i, u_scale_}});
    for (int i = 0; i < 4; ++i)
      set((scn_.robot.u_max - z[us + i]) * u_scale_, {{us + i, -u_scale_}});
  }

  for (int k = 0; k <= N_; ++k) {
    const int xs = idx_state(k);
    for (size_t s = 0; s < scn_.segments.size(); ++s) {
      if (jac) {
        Vec3T<Jet7> p;
        QuatT<Jet7> q;
        seed_pose(z, xs, &p, &q);
        Jet7 h = collision_constraint_t<Jet7>(scn_.segments[s], p, q,
                                              scn_.robot);
        c[r] = ca_scale_[s] * h.a;
        for (int j = 0; j < 7; ++j)
          jac->emplace_back(r, xs + j, ca_scale_[s] * h.v[j]);
        ++r;
      } else {
        Vec3 p = z.segment<3>(xs);
        Quatd q = z.segment<4>(xs + 3);
        c[r++] = ca_scale_[s] *
                 collision_constraint_t<double>(scn_.segments[s], p, q,
                                                scn_.robot);
      }
    }
  }

  if (perception_) {
    const LineSegment& seg = scn_.segments[scn_.objective_segment];
    for (int k = 0; k <= N_; ++k) {
      const int xs = idx_state(k);
      const int s_lc = idx_slack(k, 0);
      const int s_sv = idx_slack(k, 1);
      if (jac) {
        Vec3T<Jet7> p;
        QuatT<Jet7> q;
        seed_pose(z, xs, &p, &q);
        auto pv = line_in_camera_t<Jet7>(seg, p, q, scn_.camera);
        Jet7 hlc = cheirality_constraint_t<Jet7>(pv);
        Jet7 hsv = visibility_constraint_t<Jet7>(pv);
        c[r] = lc_scale_ * hlc.a + z[s_lc];
        for (int j = 0; j < 7; ++j)
          jac->emplace_back(r, xs + j, lc_scale_ * hlc.v[j]);
        jac->emplace_back(r, s_lc, 1.0);
        ++r;
        c[r] = sv_scale_ * hsv.a + z[s_sv];
        for (int j = 0; j < 7; ++j)
          jac->emplace_back(r, xs + j, sv_scale_ * hsv.v[j]);
        jac->emplace_back(r, s_sv, 1.0);
        ++r;
      } else {
        Vec3 p = z.segment<3>(xs);
        Quatd q = z.segment<4>(xs + 3);
        auto pv = line_in_camera_t<double>(seg, p, q, scn_.camera);
        c[r++] = lc_scale_ * cheirality_constraint_t<double>(pv) + z[s_lc];
        c[r++] = sv_scale_ * visibility_constraint_t<double>(pv) + z[s_sv];
      }
      set(z[s_lc], {{s_lc, 1.0}});
      set(z[s_sv], {{s_sv, 1.0}});
    }
  }
}

std::string PerchingNlp::eq_name(int i) const {
  if (i < kStateDim) return "initial_state[" + std::to_string(i) + "]";
  int k = i / kStateDim - 1;
  return "continuity[k=" + std::to_string(k) + "," +
         std::to_string(i % kStateDim) + "]";
}

std::string PerchingNlp::ineq_name(int i) const {
  if (i == 0) return "horizon_lower";
  if (i == 1) return "horizon_upper";
  int r = i - 2;
  if (r < N_ + 1) return "z_min[k=" + std::to_string(r) + "]";
  r -= N_ + 1;
  if (r < 8 * (N_ + 1))
    return "thrust_bound[k=" + std::to_string(r / 8) + "]";
  r -= 8 * (N_ + 1);
  if (r < 8 * N_) return "input_bound[k=" + std::to_string(r / 8) + "]";
  r -= 8 * N_;
  const int ns = static_cast<int>(scn_.segments.size());
  if (r < (N_ + 1) * ns)
    return "h_ca[k=" + std::to_string(r / ns) + ",seg=" +
           std::to_string(r % ns) + "]";
  r -= (N_ + 1) * ns;
  static const char* kind[4] = {"h_lc_soft", "h_sv_soft", "slack_lc",
                                "slack_sv"};
  return std::string(kind[r % 4]) + "[k=" + std::to_string(r / 4) + "]";
}

void PerchingNlp::add_constraint_curvature(const Eigen::VectorXd& z,
                                           const Eigen::VectorXd& y_eq,
                                           const Eigen::VectorXd& y_ineq,
                                           std::vector<SpTriplet>* hess) const {
  const double range = scn_.t_max - scn_.t_min;
  const double T = theta_to_T(z[idx_theta()]);

  // Shooting continuity: c = x_{k+1} - step(x_k, u_k, T). The curvature
  // contribution -sum_i y_i d2c_i equals +sum_i y_i d2step_i.
  for (int k = 0; k < N_; ++k) {
    const int row = kStateDim * (k + 1);
    const int xs = idx_state(k);
    const int us = idx_input(k);

    StateT<Dual22> xj;
    InputT<Dual22> uj;
    for (int i = 0; i < kStateDim; ++i) xj[i] = Dual22(z[xs + i], i);
    for (int i = 0; i < kInputDim; ++i)
      uj[i] = Dual22(z[us + i], kStateDim + i);
    Dual22 Tj(T, kStateDim + kInputDim);
    StateT<Dual22> pred = shooting_step_t<Dual22>(xj, uj, Tj, N_, scn_.robot, scn_.shooting_substeps);

    // weighted second-derivative matrix, local slots (x:0-16, u:17-20, T:21)
    Eigen::Matrix<double, 22, 22> acc = Eigen::Matrix<double, 22, 22>::Zero();
    for (int i = 0; i < kStateDim; ++i) {
      const double y = y_eq[row + i];
      if (y == 0.0) continue;
      acc += y * pred[i].h;
    }
    auto col_of = [&](int local) {
      if (local < kStateDim) return xs + local;
      if (local < kStateDim + kInputDim) return us + (local - kStateDim);
      return idx_theta();
    };
    const int tslot = kStateDim + kInputDim;
    for (int a = 0; a < 22; ++a)
      for (int b = 0; b < 22; ++b) {
        double v = acc(a, b);
        if (v == 0.0) continue;
        if (a == tslot) v *= range;
        if (b == tslot) v *= range;
        hess->emplace_back(col_of(a), col_of(b), v);
      }
  }

  // Collision rows, c = scale * h_ca(p, q) >= 0: contribution -y d2c.
  int r = 2 + (N_ + 1) + 8 * (N_ + 1) + 8 * N_;
  for (int k = 0; k <= N_; ++k) {
    const int xs = idx_state(k);
    for (size_t s = 0; s < scn_.segments.size(); ++s, ++r) {
      const double y = y_ineq[r];
      if (y == 0.0) continue;
      Vec3T<Dual7> p;
      QuatT<Dual7> q;
      seed2_pose(z, xs, &p, &q);
      Dual7 h =
          collision_constraint_t<Dual7>(scn_.segments[s], p, q, scn_.robot);
      const double wgt = -y * ca_scale_[s];
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) {
          double v = wgt * h.h(a, b);
          if (v != 0.0) hess->emplace_back(xs + a, xs + b, v);
        }
    }
  }

  if (perception_) {
    const LineSegment& seg = scn_.segments[scn_.objective_segment];
    for (int k = 0; k <= N_; ++k) {
      const double y_lc = y_ineq[r];
      const double y_sv = y_ineq[r + 1];
      r += 4;  // soft rows plus the two linear slack bounds
      if (y_lc == 0.0 && y_sv == 0.0) continue;
      const int xs = idx_state(k);
      Vec3T<Dual7> p;
      QuatT<Dual7> q;
      seed2_pose(z, xs, &p, &q);
      auto pv = line_in_camera_t<Dual7>(seg, p, q, scn_.camera);
      Dual7 mix =
          Dual7(-y_lc * lc_scale_) * cheirality_constraint_t<Dual7>(pv) +
          Dual7(-y_sv * sv_scale_) * visibility_constraint_t<Dual7>(pv);
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) {
          double v = mix.h(a, b);
          if (v != 0.0) hess->emplace_back(xs + a, xs + b, v);
        }
    }
  }
}

Eigen::VectorXd PerchingNlp::pack(const DecisionVector& dv) const {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(num_vars_);
  double theta = (dv.horizon_T - scn_.t_min) / (scn_.t_max - scn_.t_min);
  z[idx_theta()] = std::clamp(theta, 0.0, 1.0);
  for (int k = 0; k <= N_; ++k)
    z.segment<kStateDim>(idx_state(k)) = dv.states[k].to_vector();
  for (int k = 0; k < N_; ++k)
    z.segment<kInputDim>(idx_input(k)) = dv.inputs[k];
  if (perception_) {
    if (dv.slacks.size() == 2 * (N_ + 1))
      z.segment(slack_base_, 2 * (N_ + 1)) = dv.slacks;
    else
      z.segment(slack_base_, 2 * (N_ + 1)).setConstant(1e-2);
  }
  return z;
}

DecisionVector PerchingNlp::unpack(const Eigen::VectorXd& z) const {
  DecisionVector dv;
  dv.horizon_T = theta_to_T(z[idx_theta()]);
  dv.states.reserve(N_ + 1);
  for (int k = 0; k <= N_; ++k)
    dv.states.push_back(
        RobotState::from_vector(z.segment<kStateDim>(idx_state(k))));
  for (int k = 0; k < N_; ++k)
    dv.inputs.push_back(z.segment<kInputDim>(idx_input(k)));
  if (perception_) dv.slacks = z.segment(slack_base_, 2 * (N_ + 1));
  return dv;
}

PerchingNlp build_problem(const Scenario& scenario, NlpMode mode) {
  return PerchingNlp(scenario, mode);
}

DecisionVector initial_guess(const Scenario& scn, NlpMode mode) {
  const int N = scn.n_nodes;
  DecisionVector dv;
  dv.horizon_T = 0.5 * (scn.t_min + scn.t_max);
  const double hover = scn.robot.hover_thrust_per_rotor();
  for (int k = 0; k <= N; ++k) {
    double a = static_cast<double>(k) / N;
    RobotState s;
    s.p_wb = (1.0 - a) * scn.x_init.p_wb + a * scn.x_perch.p_wb;
    s.q_wb = quat_slerp(scn.x_init.q_wb, scn.x_perch.q_wb, a);
    s.v_w = (1.0 - a) * scn.x_init.v_w + a * scn.x_perch.v_w;
    s.omega_b = (1.0 - a) * scn.x_init.omega_b + a * scn.x_perch.omega_b;
    s.gamma = Vec4::Constant(hover);
    if (k == 0) s = scn.x_init;
    dv.states.push_back(s);
  }
  dv.inputs.assign(N, Vec4::Zero());

  const bool perception = mode == NlpMode::Perching &&
                          scn.perception_enabled && !scn.segments.empty();
  if (perception) seed_perception_slacks(scn, &dv);
  return dv;
}

void seed_perception_slacks(const Scenario& scn, DecisionVector* dv) {
  const int N = scn.n_nodes;
  const double lc_scale = 1.0 / (scn.camera.fx * scn.camera.fy);
  const double sv_scale = lc_scale;
  const LineSegment& seg = scn.segments[scn.objective_segment];
  dv->slacks.resize(2 * (N + 1));
  for (int k = 0; k <= N; ++k) {
    auto pv = line_in_camera_t<double>(seg, dv->states[k].p_wb,
                                       dv->states[k].q_wb, scn.camera);
    double hlc = lc_scale * cheirality_constraint_t<double>(pv);
    double hsv = std::abs(pv.d3d[2]) < 1e-12
                     ? -1.0
                     : sv_scale * visibility_constraint_t<double>(pv);
    dv->slacks[2 * k] = std::max(1e-2, 1e-2 - hlc);
    dv->slacks[2 * k + 1] = std::max(1e-2, 1e-2 - hsv);
  }
}

std::pair<DecisionVector, SolveReport> solve(const PerchingNlp& problem,
                                             const DecisionVector& guess) {
  IpmResult r = ipm_solve(problem, problem.pack(guess),
                          problem.scenario().solver);
  SolveReport rep;
  rep.status = r.status == IpmStatus::Converged ? SolveStatus::Converged
                                                : SolveStatus::MaxIterations;
  rep.iterations = r.iterations;
  rep.kkt_stationarity = r.stationarity;
  rep.kkt_equality = r.eq_violation;
  rep.kkt_complementarity = r.complementarity;
  rep.objective = r.objective;
  rep.wall_time_s = r.wall_time_s;
  rep.trace = std::move(r.trace);
  DecisionVector dv = problem.unpack(r.z);
  rep.horizon_T = dv.horizon_T;
  return {std::move(dv), std::move(rep)};
}

}  // namespace percher
