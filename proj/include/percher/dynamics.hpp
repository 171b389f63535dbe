#ifndef PERCHER_DYNAMICS_HPP
#define PERCHER_DYNAMICS_HPP

#include <Eigen/Dense>
#include <vector>

#include "percher/quat.hpp"

namespace percher {

using Vec4 = Eigen::Vector4d;

// 17-vector layout: p(0:2) q(3:6, wxyz) v(7:9) omega(10:12) gamma(13:16).
constexpr int kStateDim = 17;
constexpr int kInputDim = 4;

template <typename T>
using StateT = Eigen::Matrix<T, kStateDim, 1>;
template <typename T>
using InputT = Eigen::Matrix<T, kInputDim, 1>;

struct RobotState {
  Eigen::Vector3d p_wb = Eigen::Vector3d::Zero();
  Quatd q_wb = quat_identity();
  Eigen::Vector3d v_w = Eigen::Vector3d::Zero();
  Eigen::Vector3d omega_b = Eigen::Vector3d::Zero();
  Vec4 gamma = Vec4::Zero();  // rotor thrusts [N]

  StateT<double> to_vector() const;
  static RobotState from_vector(const StateT<double>& x);
  void validate() const;
};

struct ControlInput {
  Vec4 u = Vec4::Zero();  // thrust derivatives [N/s]
};

struct RobotParams {
  double mass = 0.8;                                     // [kg]
  Eigen::Vector3d inertia_diag{0.0025, 0.0025, 0.0045};  // [kg m^2]
  Vec4 rotor_x{0.125, -0.125, -0.125, 0.125};            // [m]
  Vec4 rotor_y{-0.125, 0.125, -0.125, 0.125};            // [m]
  double drag_torque_const = 0.022;                      // kappa [m]
  Vec4 spin_dirs{-1.0, 1.0, -1.0, 1.0};                  // in {-1, 1}
  double gamma_max = 7.848;                              // [N] per rotor
  double u_min = -80.0;                                  // [N/s]
  double u_max = 80.0;                                   // [N/s]
  Eigen::Vector3d gravity{0.0, 0.0, -9.81};              // [m/s^2]
  Eigen::Vector3d ellipsoid_radii{0.25, 0.25, 0.15};     // [m]

  void validate() const;
  double hover_thrust_per_rotor() const {
    return mass * gravity.norm() / 4.0;
  }
};

// collective = (0, 0, sum gamma); torque = (r_y.g, -r_x.g, kappa r_d.g).
std::pair<Eigen::Vector3d, Eigen::Vector3d> thrust_wrench(
    const Vec4& gamma, const RobotParams& params);

template <typename T>
StateT<T> state_derivative_t(const StateT<T>& x, const InputT<T>& u,
                             const RobotParams& pr) {
  const QuatT<T> q = x.template segment<4>(3);
  const Vec3T<T> v = x.template segment<3>(7);
  const Vec3T<T> w = x.template segment<3>(10);
  const Eigen::Matrix<T, 4, 1> g = x.template segment<4>(13);

  StateT<T> dx;
  dx.template segment<3>(0) = v;

  QuatT<T> wq(T(0), w[0], w[1], w[2]);
  dx.template segment<4>(3) = T(0.5) * quat_mul(q, wq);

  Vec3T<T> thrust_b(T(0), T(0), g.sum());
  dx.template segment<3>(7) =
      quat_rotate(q, thrust_b) / T(pr.mass) + pr.gravity.cast<T>();

  Vec3T<T> torque;
  torque[0] = pr.rotor_y.cast<T>().dot(g);
  torque[1] = -pr.rotor_x.cast<T>().dot(g);
  torque[2] = T(pr.drag_torque_const) * pr.spin_dirs.cast<T>().dot(g);
  Vec3T<T> Jw = pr.inertia_diag.cast<T>().cwiseProduct(w);
  dx.template segment<3>(10) =
      (torque - w.cross(Jw)).cwiseQuotient(pr.inertia_diag.cast<T>());

  dx.template segment<4>(13) = u;
  return dx;
}

StateT<double> state_derivative(const RobotState& x, const ControlInput& u,
                                const RobotParams& params);

// RK4 integration of the T-scaled derivative over normalized step 1/N
// (physical step T/N), split into `substeps` equal RK4 steps to shrink the
// defect between the shooting map and the continuous dynamics. The output
// quaternion is renormalized after every substep.
template <typename T>
StateT<T> shooting_step_t(const StateT<T>& x, const InputT<T>& u, const T& horizon,
                          int n_nodes, const RobotParams& pr, int substeps = 1) {
  const T h = horizon / T(static_cast<double>(n_nodes) * substeps);
  StateT<T> out = x;
  for (int s = 0; s < substeps; ++s) {
    StateT<T> k1 = state_derivative_t<T>(out, u, pr);
    StateT<T> k2 = state_derivative_t<T>(StateT<T>(out + (h / T(2)) * k1), u, pr);
    StateT<T> k3 = state_derivative_t<T>(StateT<T>(out + (h / T(2)) * k2), u, pr);
    StateT<T> k4 = state_derivative_t<T>(StateT<T>(out + h * k3), u, pr);
    out = out + (h / T(6)) * (k1 + T(2) * k2 + T(2) * k3 + k4);
    out.template segment<4>(3) = quat_normalized<T>(out.template segment<4>(3));
  }
  return out;
}

RobotState shooting_step(const RobotState& x, const ControlInput& u, double T,
                         int N, const RobotParams& params);

struct TrajectorySample {
  double t = 0.0;
  RobotState x;
  Vec4 u = Vec4::Zero();
};

struct Trajectory {
  double dt = 0.0;
  std::vector<TrajectorySample> samples;

  double duration() const {
    return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
  }
};

// Integrates x0 through the piecewise-constant input schedule (one input per
// node of duration node_dt). dt is snapped downward to the nearest divisor of
// node_dt so every node boundary lands on a sample.
Trajectory integrate_fine(const RobotState& x0, const std::vector<Vec4>& inputs,
                          double node_dt, double dt, const RobotParams& params);

// Same dynamics, but samples lie on the global grid t0 + j*dt while node
// boundaries are handled by splitting the RK4 step internally. Used to chain
// maneuvers whose node durations do not share a divisor.
Trajectory integrate_on_grid(const RobotState& x0,
                             const std::vector<Vec4>& inputs, double node_dt,
                             double dt, double t0, const RobotParams& params);

}  // namespace percher

#endif  // PERCHER_DYNAMICS_HPP
