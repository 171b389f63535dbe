#include "percher/constraints.hpp"

#include <cmath>

namespace percher {

ScaledLine scale_line(const LineSegment& seg, const RobotState& x,
                      const RobotParams& params) {
  Vec3T<double> o, l;
  scale_line_t<double>(seg, x.p_wb, x.q_wb, inflated_radii(params, seg), &o,
                       &l);
  return {o, l};
}

double collision_raw(const ScaledLine& sl) {
  return collision_raw_t<double>(sl.origin_scaled, sl.direction_scaled);
}

double augmentation_k(const RobotState& x, const LineSegment& seg,
                      const RobotParams& params) {
  return augmentation_k_t<double>(seg, x.p_wb, inflated_radii(params, seg));
}

double collision_constraint_hca(const RobotState& x, const LineSegment& seg,
                                const RobotParams& params) {
  return collision_constraint_t<double>(seg, x.p_wb, x.q_wb, params);
}

PerceptionVectors line_in_camera(const RobotState& x, const LineSegment& seg,
                                 const CameraModel& cam) {
  auto pv = line_in_camera_t<double>(seg, x.p_wb, x.q_wb, cam);
  PerceptionVectors out;
  out.n_i = pv.n_i;
  out.l_i = pv.l_i;
  out.p2d = pv.p2d;
  out.d3d = pv.d3d;
  out.e1_i = pv.e1_i;
  out.e2_i = pv.e2_i;
  out.degenerate = pv.n_i.squaredNorm() < 1e-18;
  out.p3d = out.degenerate || std::abs(pv.d3d[2]) < 1e-12
                ? Vec3::Zero()
                : Vec3(pv.p2d / pv.d3d[2]);
  return out;
}

double reprojection_error(const RobotState& x, const LineSegment& seg,
                          const CameraModel& cam) {
  auto pv = line_in_camera_t<double>(seg, x.p_wb, x.q_wb, cam);
  if (pv.n_i[0] * pv.n_i[0] + pv.n_i[1] * pv.n_i[1] < 1e-18)
    throw DegenerateGeometryError(
        "reprojection_error: projected line through image center is "
        "degenerate (n_Ix^2 + n_Iy^2 ~ 0)");
  return reprojection_error_t<double>(pv);
}

double cheirality_constraint_hlc(const RobotState& x, const LineSegment& seg,
                                 const CameraModel& cam) {
  return cheirality_constraint_t<double>(
      line_in_camera_t<double>(seg, x.p_wb, x.q_wb, cam));
}

double visibility_constraint_hsv(const RobotState& x, const LineSegment& seg,
                                 const CameraModel& cam) {
  auto pv = line_in_camera_t<double>(seg, x.p_wb, x.q_wb, cam);
  if (std::abs(pv.d3d[2]) < 1e-12)
    throw DegenerateGeometryError(
        "visibility_constraint: d3d_z ~ 0, line parallel to image plane "
        "through center");
  return visibility_constraint_t<double>(pv);
}

}  // namespace percher
