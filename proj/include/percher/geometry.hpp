#ifndef PERCHER_GEOMETRY_HPP
#define PERCHER_GEOMETRY_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "percher/quat.hpp"

namespace percher {

using Vec3 = Eigen::Vector3d;

// One straight powerline segment, stored as midpoint + half-length so the
// collision augmentation can measure distance to the segment center directly.
struct LineSegment {
  Vec3 origin_w = Vec3::Zero();     // segment midpoint, world frame [m]
  Vec3 direction_w = Vec3::UnitX(); // unit direction, world frame
  double half_length = 1.0;         // [m], > 0
  double wire_radius = 0.0;         // [m], >= 0

  void validate() const;
  std::pair<Vec3, Vec3> endpoints() const {
    return {origin_w - half_length * direction_w,
            origin_w + half_length * direction_w};
  }
  static LineSegment from_endpoints(const Vec3& e1, const Vec3& e2,
                                    double wire_radius = 0.0);
};

struct Pose {
  Vec3 position = Vec3::Zero();
  Quatd orientation = quat_identity();  // [w, x, y, z], unit

  void validate() const;
};

// z = a cosh(x / a) catenary over a horizontal span, anchored at configurable
// endpoint heights. Points are produced in a local frame with x along the
// span, y = 0.
struct CatenaryParams {
  double span = 1.0;            // [m], > 0
  double sag_parameter = 1.0;   // cosh scale a [m], > 0
  double height_start = 0.0;    // [m]
  double height_end = 0.0;      // [m]

  void validate() const;
};

// Solves for the cosh scale a giving the requested midspan sag of a
// symmetric catenary (Newton on sag = a (cosh(L/2a) - 1)).
double sag_to_parameter(double span, double sag);

std::vector<Vec3> catenary_sample(const CatenaryParams& params, int n_points);

// Recursive farthest-point (Ramer-Douglas-Peucker style) polyline fits.
// Output segments share endpoints with the input polyline and cover it end
// to end. Ties in farthest-point selection break toward the lower index.
std::vector<LineSegment> fit_segments_max_error(
    const std::vector<Vec3>& polyline, double max_error,
    double wire_radius = 0.0);
std::vector<LineSegment> fit_segments_count(const std::vector<Vec3>& polyline,
                                            int segment_count,
                                            double wire_radius = 0.0);

// Maximum / mean distance from polyline points to the fitted chain.
struct FitError {
  double max_error = 0.0;
  double mean_error = 0.0;
};
FitError fit_error(const std::vector<Vec3>& polyline,
                   const std::vector<LineSegment>& segments);

double point_to_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

// origin' = q^-1 (o_W - p), direction' = q^-1 l_W.
std::pair<Vec3, Vec3> transform_line_to_frame(const LineSegment& seg,
                                              const Pose& frame_pose);

}  // namespace percher

#endif  // PERCHER_GEOMETRY_HPP
