#ifndef PERCHER_CONSTRAINTS_HPP
#define PERCHER_CONSTRAINTS_HPP

#include <Eigen/Dense>
#include <stdexcept>

#include "percher/dynamics.hpp"
#include "percher/geometry.hpp"
#include "percher/quat.hpp"

namespace percher {

struct DegenerateGeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScaledLine {
  Vec3 origin_scaled;
  Vec3 direction_scaled;
};

struct CameraModel {
  double fx = 386.0, fy = 386.0;  // [px]
  double cx = 0.0, cy = 0.0;      // [px]
  Pose extrinsics;                // T_BC

  void validate() const {
    if (!(fx > 0.0 && fy > 0.0))
      throw std::invalid_argument("CameraModel: focal lengths must be > 0");
    extrinsics.validate();
  }
};

struct PerceptionVectors {
  Vec3 n_i;   // line moment in 3D image coords
  Vec3 l_i;   // line direction in 3D image coords
  Vec3 p2d;   // n_I x (e_z x n_I)
  Vec3 d3d;   // l_I x n_I
  Vec3 p3d;   // p2d / d3d_z
  Vec3 e1_i;  // segment endpoints in 3D image coords
  Vec3 e2_i;
  bool degenerate = false;  // n_I ~ 0 (line through camera center)
};

// Effective ellipsoid radii with the wire radius folded in.
inline Vec3 inflated_radii(const RobotParams& pr, const LineSegment& seg) {
  return pr.ellipsoid_radii + Vec3::Constant(seg.wire_radius);
}

// ---- collision avoidance ----

template <typename T>
void scale_line_t(const LineSegment& seg, const Vec3T<T>& p, const QuatT<T>& q,
                  const Vec3& radii, Vec3T<T>* o_out, Vec3T<T>* l_out) {
  Vec3T<T> o_b = quat_rotate_inv<T>(q, Vec3T<T>(seg.origin_w.cast<T>() - p));
  Vec3T<T> l_b = quat_rotate_inv<T>(q, seg.direction_w.cast<T>());
  Vec3T<T> inv_r = radii.cwiseInverse().cast<T>();
  *o_out = o_b.cwiseProduct(inv_r);
  *l_out = l_b.cwiseProduct(inv_r);
}

template <typename T>
T collision_raw_t(const Vec3T<T>& o, const Vec3T<T>& l) {
  return (o.squaredNorm() - T(1)) * l.squaredNorm() - o.dot(l) * o.dot(l);
}

// Scaled/shifted arctan sigmoid: ~0 below d0, ~1 above, with
// d0 = half_length + max(radii) and sharpness 4 / max(radii).
template <typename T>
T collision_sigmoid_t(const T& dist, const LineSegment& seg,
                      const Vec3& radii) {
  using std::atan;
  const double d0 = seg.half_length + radii.maxCoeff();
  const double s = 4.0 / radii.maxCoeff();
  return T(0.5) + atan(T(s) * (dist - T(d0))) / T(M_PI);
}

template <typename T>
T augmentation_k_t(const LineSegment& seg, const Vec3T<T>& p,
                   const Vec3& radii) {
  using std::sqrt;
  const double lambda1 = 1.0 / radii.minCoeff();
  // Smooth norm; the distance only vanishes when the robot sits exactly on
  // the segment center, which hard collision feasibility rules out.
  T dist = sqrt((seg.origin_w.cast<T>() - p).squaredNorm() + T(1e-12));
  return T(lambda1 * lambda1) * collision_sigmoid_t<T>(dist, seg, radii);
}

template <typename T>
T collision_constraint_t(const LineSegment& seg, const Vec3T<T>& p,
                         const QuatT<T>& q, const RobotParams& pr) {
  const Vec3 radii = inflated_radii(pr, seg);
  Vec3T<T> o, l;
  scale_line_t<T>(seg, p, q, radii, &o, &l);
  return collision_raw_t<T>(o, l) + augmentation_k_t<T>(seg, p, radii);
}

ScaledLine scale_line(const LineSegment& seg, const RobotState& x,
                      const RobotParams& params);
double collision_raw(const ScaledLine& sl);
double augmentation_k(const RobotState& x, const LineSegment& seg,
                      const RobotParams& params);
double collision_constraint_hca(const RobotState& x, const LineSegment& seg,
                                const RobotParams& params);

// ---- perception ----

template <typename T>
struct PerceptionVectorsT {
  Vec3T<T> n_i, l_i, p2d, d3d, e1_i, e2_i;
};

template <typename T>
PerceptionVectorsT<T> line_in_camera_t(const LineSegment& seg,
                                       const Vec3T<T>& p, const QuatT<T>& q,
                                       const CameraModel& cam) {
  const QuatT<T> q_bc = cam.extrinsics.orientation.cast<T>();
  const Vec3T<T> p_wc =
      p + quat_rotate<T>(q, cam.extrinsics.position.cast<T>());
  const QuatT<T> q_wc = quat_mul<T>(q, q_bc);

  Vec3T<T> o_c = quat_rotate_inv<T>(q_wc, Vec3T<T>(seg.origin_w.cast<T>() - p_wc));
  Vec3T<T> l_c = quat_rotate_inv<T>(q_wc, seg.direction_w.cast<T>());
  Vec3T<T> n_c = o_c.cross(l_c);

  PerceptionVectorsT<T> pv;
  pv.l_i = Vec3T<T>(T(cam.fx) * l_c[0], T(cam.fy) * l_c[1], l_c[2]);
  pv.n_i = Vec3T<T>(T(cam.fy) * n_c[0], T(cam.fx) * n_c[1],
                    T(cam.fx * cam.fy) * n_c[2]);
  Vec3T<T> ez(T(0), T(0), T(1));
  pv.p2d = pv.n_i.cross(ez.cross(pv.n_i));
  pv.d3d = pv.l_i.cross(pv.n_i);

  auto [e1, e2] = seg.endpoints();
  Vec3T<T> e1_c = quat_rotate_inv<T>(q_wc, Vec3T<T>(e1.cast<T>() - p_wc));
  Vec3T<T> e2_c = quat_rotate_inv<T>(q_wc, Vec3T<T>(e2.cast<T>() - p_wc));
  pv.e1_i = Vec3T<T>(T(cam.fx) * e1_c[0], T(cam.fy) * e1_c[1], e1_c[2]);
  pv.e2_i = Vec3T<T>(T(cam.fx) * e2_c[0], T(cam.fy) * e2_c[1], e2_c[2]);
  return pv;
}

// (e_z . n_I) / sqrt(n_Ix^2 + n_Iy^2). `smoothing` conditions the
// denominator for use inside the NLP; the exact form uses smoothing = 0.
template <typename T>
T reprojection_error_t(const PerceptionVectorsT<T>& pv,
                       double smoothing = 0.0) {
  using std::sqrt;
  T den2 = pv.n_i[0] * pv.n_i[0] + pv.n_i[1] * pv.n_i[1] + T(smoothing);
  return pv.n_i[2] / sqrt(den2);
}

template <typename T>
T cheirality_constraint_t(const PerceptionVectorsT<T>& pv) {
  return pv.d3d[2];
}

// -(p3d - e1_I).(p3d - e2_I), written with the d3d_z denominators cleared is
// not equivalent under sign, so the division is kept; callers guard d3d_z.
template <typename T>
T visibility_constraint_t(const PerceptionVectorsT<T>& pv) {
  Vec3T<T> p3d = pv.p2d / pv.d3d[2];
  return -(p3d - pv.e1_i).dot(p3d - pv.e2_i);
}

PerceptionVectors line_in_camera(const RobotState& x, const LineSegment& seg,
                                 const CameraModel& cam);
double reprojection_error(const RobotState& x, const LineSegment& seg,
                          const CameraModel& cam);
double cheirality_constraint_hlc(const RobotState& x, const LineSegment& seg,
                                 const CameraModel& cam);
double visibility_constraint_hsv(const RobotState& x, const LineSegment& seg,
                                 const CameraModel& cam);

}  // namespace percher

#endif  // PERCHER_CONSTRAINTS_HPP
