#include "percher/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace percher {

StateT<double> RobotState::to_vector() const {
  StateT<double> x;
  x.segment<3>(0) = p_wb;
  x.segment<4>(3) = q_wb;
  x.segment<3>(7) = v_w;
  x.segment<3>(10) = omega_b;
  x.segment<4>(13) = gamma;
  return x;
}

RobotState RobotState::from_vector(const StateT<double>& x) {
  RobotState s;
  s.p_wb = x.segment<3>(0);
  s.q_wb = x.segment<4>(3);
  s.v_w = x.segment<3>(7);
  s.omega_b = x.segment<3>(10);
  s.gamma = x.segment<4>(13);
  return s;
}

void RobotState::validate() const {
  if (std::abs(q_wb.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("RobotState: quaternion must be unit norm");
}

void RobotParams::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("RobotParams: mass <= 0");
  if (!(inertia_diag.minCoeff() > 0.0))
    throw std::invalid_argument("RobotParams: inertia components must be > 0");
  if (!(gamma_max > 0.0))
    throw std::invalid_argument("RobotParams: gamma_max must be > 0");
  if (!(u_min < 0.0 && u_max > 0.0))
    throw std::invalid_argument("RobotParams: need u_min < 0 < u_max");
  if (!(ellipsoid_radii.minCoeff() > 0.0))
    throw std::invalid_argument("RobotParams: ellipsoid radii must be > 0");
  for (int i = 0; i < 4; ++i)
    if (spin_dirs[i] != 1.0 && spin_dirs[i] != -1.0)
      throw std::invalid_argument("RobotParams: spin_dirs must be +/-1");
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> thrust_wrench(
    const Vec4& gamma, const RobotParams& params) {
  Eigen::Vector3d collective(0.0, 0.0, gamma.sum());
  Eigen::Vector3d torque(params.rotor_y.dot(gamma), -params.rotor_x.dot(gamma),
                         params.drag_torque_const * params.spin_dirs.dot(gamma));
  return {collective, torque};
}

StateT<double> state_derivative(const RobotState& x, const ControlInput& u,
                                const RobotParams& params) {
  return state_derivative_t<double>(x.to_vector(), u.u, params);
}

RobotState shooting_step(const RobotState& x, const ControlInput& u, double T,
                         int N, const RobotParams& params) {
  if (!(T > 0.0)) throw std::invalid_argument("shooting_step: T must be > 0");
  if (N < 1) throw std::invalid_argument("shooting_step: N must be >= 1");
  return RobotState::from_vector(
      shooting_step_t<double>(x.to_vector(), u.u, T, N, params));
}

namespace {

StateT<double> rk4_physical(const StateT<double>& x, const Vec4& u, double h,
                            const RobotParams& pr) {
  StateT<double> k1 = state_derivative_t<double>(x, u, pr);
  StateT<double> k2 = state_derivative_t<double>(x + 0.5 * h * k1, u, pr);
  StateT<double> k3 = state_derivative_t<double>(x + 0.5 * h * k2, u, pr);
  StateT<double> k4 = state_derivative_t<double>(x + h * k3, u, pr);
  StateT<double> out = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  out.segment<4>(3).normalize();
  return out;
}

}  // namespace

Trajectory integrate_fine(const RobotState& x0, const std::vector<Vec4>& inputs,
                          double node_dt, double dt,
                          const RobotParams& params) {
  if (!(dt > 0.0))
    throw std::invalid_argument("integrate_fine: dt must be > 0");
  if (!(node_dt > 0.0))
    throw std::invalid_argument("integrate_fine: node_dt must be > 0");

  // Snap dt downward to the nearest divisor of node_dt.
  int steps_per_node =
      static_cast<int>(std::ceil(node_dt / dt - 1e-9));
  double h = node_dt / steps_per_node;

  Trajectory traj;
  traj.dt = h;
  StateT<double> x = x0.to_vector();
  Vec4 u0 = inputs.empty() ? Vec4::Zero().eval() : inputs.front();
  traj.samples.push_back({0.0, x0, u0});
  long idx = 0;
  for (size_t k = 0; k < inputs.size(); ++k) {
    for (int j = 0; j < steps_per_node; ++j) {
      x = rk4_physical(x, inputs[k], h, params);
      ++idx;
      traj.samples.push_back({idx * h, RobotState::from_vector(x), inputs[k]});
    }
  }
  return traj;
}

Trajectory integrate_on_grid(const RobotState& x0,
                             const std::vector<Vec4>& inputs, double node_dt,
                             double dt, double t0, const RobotParams& params) {
  if (!(dt > 0.0) || !(node_dt > 0.0))
    throw std::invalid_argument("integrate_on_grid: dt and node_dt must be > 0");
  const double total = node_dt * static_cast<double>(inputs.size());
  const long n_samples = static_cast<long>(std::floor(total / dt + 1e-9));

  Trajectory traj;
  traj.dt = dt;
  StateT<double> x = x0.to_vector();
  Vec4 u0 = inputs.empty() ? Vec4::Zero().eval() : inputs.front();
  traj.samples.push_back({t0, x0, u0});

  double t = 0.0;  // maneuver-relative time
  for (long j = 1; j <= n_samples; ++j) {
    double t_target = j * dt;
    // Advance from t to t_target, splitting at node boundaries.
    while (t < t_target - 1e-12) {
      int node = std::min(static_cast<int>(t / node_dt + 1e-12),
                          static_cast<int>(inputs.size()) - 1);
      double node_end = (node + 1) * node_dt;
      double t_next = std::min(t_target, node_end);
      x = rk4_physical(x, inputs[node], t_next - t, params);
      t = t_next;
    }
    int node = std::min(static_cast<int>((t - 0.5 * dt) / node_dt),
                        static_cast<int>(inputs.size()) - 1);
    traj.samples.push_back({t0 + t, RobotState::from_vector(x), inputs[node]});
  }
  return traj;
}

}  // namespace percher
