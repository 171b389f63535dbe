#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ceres/jet.h>

#include <cmath>
#include <random>

#include "percher/constraints.hpp"

using namespace percher;

namespace {

RobotState frozen_pose() {
  RobotState x;
  x.p_wb = {-1.4, 0.2, 1.9};
  Quatd q(std::cos(0.35), 0.05, std::sin(0.35), -0.02);
  x.q_wb = q.normalized();
  return x;
}

LineSegment test_segment() {
  LineSegment seg;
  seg.origin_w = {0.0, 0.0, 2.0};
  seg.direction_w = Vec3::UnitY();
  seg.half_length = 2.5;
  seg.wire_radius = 0.01;
  return seg;
}

CameraModel forward_camera() {
  CameraModel cam;
  cam.fx = cam.fy = 386.0;
  cam.cx = cam.cy = 0.0;
  cam.extrinsics.position = {0.1, 0.0, 0.0};
  cam.extrinsics.orientation = Quatd(0.5, -0.5, 0.5, -0.5);  // optic axis = body +x
  return cam;
}

using Jet7 = ceres::Jet<double, 7>;

// Central finite differences of f(p, q) over the 7 pose entries.
template <typename F>
Eigen::Matrix<double, 7, 1> fd_pose_gradient(F f, const Vec3& p,
                                             const Quatd& q, double h = 1e-6) {
  Eigen::Matrix<double, 7, 1> g;
  for (int i = 0; i < 7; ++i) {
    Vec3 pp = p, pm = p;
    Quatd qp = q, qm = q;
    if (i < 3) {
      pp[i] += h;
      pm[i] -= h;
    } else {
      qp[i - 3] += h;
      qm[i - 3] -= h;
    }
    g[i] = (f(pp, qp) - f(pm, qm)) / (2.0 * h);
  }
  return g;
}

template <typename F>
Eigen::Matrix<double, 7, 1> jet_pose_gradient(F f, const Vec3& p,
                                              const Quatd& q) {
  Vec3T<Jet7> pj;
  QuatT<Jet7> qj;
  for (int i = 0; i < 3; ++i) pj[i] = Jet7(p[i], i);
  for (int i = 0; i < 4; ++i) qj[i] = Jet7(q[i], 3 + i);
  Jet7 r = f(pj, qj);
  Eigen::Matrix<double, 7, 1> g;
  for (int i = 0; i < 7; ++i) g[i] = r.v[i];
  return g;
}

double rel_err(const Eigen::Matrix<double, 7, 1>& a,
               const Eigen::Matrix<double, 7, 1>& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

}  // namespace

TEST_CASE("scaled collision value at the frozen pose") {
  // tests/oracles/perception_oracle.py
  RobotState x = frozen_pose();
  LineSegment seg = test_segment();
  RobotParams pr;
  ScaledLine sl = scale_line(seg, x, pr);
  CHECK(collision_raw(sl) == doctest::Approx(763.755799918779).epsilon(1e-10));
  CHECK(augmentation_k(x, seg, pr) ==
        doctest::Approx(0.601657379151307).epsilon(1e-10));
  CHECK(collision_constraint_hca(x, seg, pr) ==
        doctest::Approx(764.357457297931).epsilon(1e-10));
}

TEST_CASE("collision raw value is negative inside the scaled cylinder") {
  LineSegment seg = test_segment();
  RobotParams pr;
  RobotState x;
  // Directly under the wire, closer than the smallest inflated radius.
  x.p_wb = seg.origin_w - Vec3(0.0, 0.0, 0.1);
  ScaledLine sl = scale_line(seg, x, pr);
  CHECK(collision_raw(sl) < 0.0);
  // Far from the wire laterally.
  x.p_wb = seg.origin_w + Vec3(2.0, 0.0, 0.0);
  sl = scale_line(seg, x, pr);
  CHECK(collision_raw(sl) > 0.0);
}

TEST_CASE("collision raw sign equals scaled line distance sign") {
  LineSegment seg = test_segment();
  RobotParams pr;
  Vec3 radii = inflated_radii(pr, seg);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> up(-1.5, 1.5);
  std::uniform_real_distribution<double> uq(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    RobotState x;
    x.p_wb = seg.origin_w + Vec3(up(rng), up(rng), up(rng));
    Quatd q(uq(rng), uq(rng), uq(rng), uq(rng));
    if (q.norm() < 1e-3) continue;
    x.q_wb = q.normalized();
    ScaledLine sl = scale_line(seg, x, pr);
    // Distance from the body origin to the infinite scaled line.
    Vec3 lhat = sl.direction_scaled.normalized();
    double d = (sl.origin_scaled - sl.origin_scaled.dot(lhat) * lhat).norm();
    double raw = collision_raw(sl);
    if (std::abs(d - 1.0) < 1e-6) continue;
    CHECK(((raw > 0.0) == (d > 1.0)));
  }
}

TEST_CASE("augmentation saturates away from the segment") {
  LineSegment seg = test_segment();
  RobotParams pr;
  Vec3 radii = inflated_radii(pr, seg);
  const double lambda1 = 1.0 / radii.minCoeff();
  RobotState far;
  far.p_wb = seg.origin_w + Vec3(0.0, 500.0, 0.0);
  CHECK(augmentation_k(far, seg, pr) ==
        doctest::Approx(lambda1 * lambda1).epsilon(1e-3));
  RobotState near;
  near.p_wb = seg.origin_w + Vec3(0.5, 0.0, 0.0);
  CHECK(augmentation_k(near, seg, pr) < 0.05 * lambda1 * lambda1);
}

TEST_CASE("perception vectors at the frozen pose") {
  // tests/oracles/perception_oracle.py
  RobotState x = frozen_pose();
  LineSegment seg = test_segment();
  CameraModel cam = forward_camera();
  PerceptionVectors pv = line_in_camera(x, seg, cam);
  REQUIRE(!pv.degenerate);
  CHECK(pv.n_i[0] == doctest::Approx(-36.3169134555776).epsilon(1e-9));
  CHECK(pv.n_i[1] == doctest::Approx(-347.899307290021).epsilon(1e-9));
  CHECK(pv.n_i[2] == doctest::Approx(-145801.697629273).epsilon(1e-9));
  CHECK(reprojection_error(x, seg, cam) ==
        doctest::Approx(-416.826711837133).epsilon(1e-9));
  CHECK(cheirality_constraint_hlc(x, seg, cam) ==
        doctest::Approx(135017.26177187).epsilon(1e-9));
  CHECK(visibility_constraint_hsv(x, seg, cam) ==
        doctest::Approx(925651.15322567).epsilon(1e-9));
}

TEST_CASE("centered horizontal line projects with zero reprojection error") {
  // Camera at the origin looking along world +x, wire crossing the optic
  // axis horizontally: the projected line passes through the image center.
  LineSegment seg;
  seg.origin_w = {1.0, 0.0, 0.0};
  seg.direction_w = Vec3::UnitY();
  seg.half_length = 2.0;
  CameraModel cam = forward_camera();
  cam.extrinsics.position.setZero();
  RobotState x;
  CHECK(std::abs(reprojection_error(x, seg, cam)) < 1e-9);
  CHECK(cheirality_constraint_hlc(x, seg, cam) > 0.0);
  CHECK(visibility_constraint_hsv(x, seg, cam) > 0.0);
}

TEST_CASE("line behind the camera flips cheirality") {
  LineSegment seg;
  seg.origin_w = {-1.0, 0.0, 0.1};
  seg.direction_w = Vec3::UnitY();
  seg.half_length = 2.0;
  CameraModel cam = forward_camera();
  cam.extrinsics.position.setZero();
  RobotState x;
  CHECK(cheirality_constraint_hlc(x, seg, cam) < 0.0);
}

TEST_CASE("degenerate projection throws") {
  // Line passing through the camera center.
  LineSegment seg;
  seg.origin_w = {1.0, 0.0, 0.0};
  seg.direction_w = Vec3::UnitX();
  seg.half_length = 2.0;
  CameraModel cam = forward_camera();
  cam.extrinsics.position.setZero();
  RobotState x;
  CHECK(line_in_camera(x, seg, cam).degenerate);
  CHECK_THROWS_AS(reprojection_error(x, seg, cam), DegenerateGeometryError);
}

TEST_CASE("pose gradients match finite differences") {
  RobotState x = frozen_pose();
  LineSegment seg = test_segment();
  RobotParams pr;
  CameraModel cam = forward_camera();
  const Vec3 p = x.p_wb;
  const Quatd q = x.q_wb;

  SUBCASE("collision constraint") {
    auto f = [&](const auto& pp, const auto& qq) {
      return collision_constraint_t<typename std::decay_t<decltype(pp[0])>>(
          seg, pp, qq, pr);
    };
    CHECK(rel_err(jet_pose_gradient(f, p, q), fd_pose_gradient(f, p, q)) <
          1e-6);
  }
  SUBCASE("reprojection error") {
    auto f = [&](const auto& pp, const auto& qq) {
      using T = typename std::decay_t<decltype(pp[0])>;
      return reprojection_error_t<T>(line_in_camera_t<T>(seg, pp, qq, cam));
    };
    CHECK(rel_err(jet_pose_gradient(f, p, q), fd_pose_gradient(f, p, q)) <
          1e-6);
  }
  SUBCASE("cheirality") {
    auto f = [&](const auto& pp, const auto& qq) {
      using T = typename std::decay_t<decltype(pp[0])>;
      return cheirality_constraint_t<T>(line_in_camera_t<T>(seg, pp, qq, cam));
    };
    CHECK(rel_err(jet_pose_gradient(f, p, q), fd_pose_gradient(f, p, q)) <
          1e-6);
  }
  SUBCASE("visibility") {
    auto f = [&](const auto& pp, const auto& qq) {
      using T = typename std::decay_t<decltype(pp[0])>;
      return visibility_constraint_t<T>(line_in_camera_t<T>(seg, pp, qq, cam));
    };
    CHECK(rel_err(jet_pose_gradient(f, p, q), fd_pose_gradient(f, p, q)) <
          1e-5);
  }
}
