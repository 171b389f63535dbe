#ifndef PERCHER_QUAT_HPP
#define PERCHER_QUAT_HPP

#include <Eigen/Dense>

// Quaternion helpers templated on the scalar type so they can be evaluated
// with ceres::Jet for forward-mode derivatives. Storage order is [w, x, y, z]
// (Hamilton convention).

namespace percher {

template <typename T>
using QuatT = Eigen::Matrix<T, 4, 1>;

template <typename T>
using Vec3T = Eigen::Matrix<T, 3, 1>;

using Quatd = Eigen::Vector4d;

template <typename T>
QuatT<T> quat_mul(const QuatT<T>& a, const QuatT<T>& b) {
  QuatT<T> r;
  r[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
  r[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2];
  r[2] = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1];
  r[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0];
  return r;
}

template <typename T>
QuatT<T> quat_conj(const QuatT<T>& q) {
  return QuatT<T>(q[0], -q[1], -q[2], -q[3]);
}

// q (x) [0,v] (x) q*. Equals the rotation by q for unit quaternions and stays
// smooth (scales by |q|^2) for non-unit ones, which matters inside the NLP
// where node quaternions are free variables.
template <typename T>
Vec3T<T> quat_rotate(const QuatT<T>& q, const Vec3T<T>& v) {
  const Vec3T<T> qv(q[1], q[2], q[3]);
  return (q[0] * q[0] - qv.squaredNorm()) * v + T(2) * qv.dot(v) * qv +
         T(2) * q[0] * qv.cross(v);
}

// Inverse rotation, q* (x) [0,v] (x) q.
template <typename T>
Vec3T<T> quat_rotate_inv(const QuatT<T>& q, const Vec3T<T>& v) {
  return quat_rotate(quat_conj(q), v);
}

template <typename T>
QuatT<T> quat_normalized(const QuatT<T>& q) {
  using std::sqrt;
  T n = sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  return q / n;
}

inline Quatd quat_identity() { return Quatd(1.0, 0.0, 0.0, 0.0); }

inline Quatd quat_from_axis_angle(const Eigen::Vector3d& axis, double angle) {
  Eigen::Vector3d a = axis.normalized();
  double h = 0.5 * angle;
  return Quatd(std::cos(h), a.x() * std::sin(h), a.y() * std::sin(h),
               a.z() * std::sin(h));
}

inline Quatd quat_slerp(const Quatd& a, Quatd b, double t) {
  double d = a.dot(b);
  if (d < 0.0) {
    b = -b;
    d = -d;
  }
  if (d > 1.0 - 1e-10) {
    Quatd q = (1.0 - t) * a + t * b;
    return q.normalized();
  }
  double th = std::acos(std::min(1.0, d));
  double s = std::sin(th);
  return (std::sin((1.0 - t) * th) / s) * a + (std::sin(t * th) / s) * b;
}

inline Eigen::Matrix3d quat_to_rotmat(const Quatd& q) {
  Eigen::Matrix3d r;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

}  // namespace percher

#endif  // PERCHER_QUAT_HPP
