#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "percher/geometry.hpp"

using namespace percher;

TEST_CASE("sag_to_parameter matches the defining equation") {
  // References from tests/oracles/catenary_oracle.py.
  CHECK(sag_to_parameter(185.0, 5.0) == doctest::Approx(856.457038428421).epsilon(1e-10));
  CHECK(sag_to_parameter(10.0, 0.5) == doctest::Approx(25.082893175999).epsilon(1e-10));
  const double a = sag_to_parameter(40.0, 1.3);
  CHECK(a * (std::cosh(20.0 / a) - 1.0) == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("catenary_sample pins endpoints and reproduces the asymmetric profile") {
  CatenaryParams cp;
  cp.span = 12.0;
  cp.sag_parameter = 25.082893175999;
  cp.height_start = 3.0;
  cp.height_end = 4.0;
  auto pts = catenary_sample(cp, 7);
  REQUIRE(pts.size() == 7);
  // tests/oracles/catenary_oracle.py
  const double expect[7] = {3.0,
                            2.765627994159,
                            2.691285225830,
                            2.776498790403,
                            3.021810743122,
                            3.428781547173,
                            4.0};
  for (int i = 0; i < 7; ++i) {
    CHECK(pts[i].x() == doctest::Approx(2.0 * i).epsilon(1e-12));
    CHECK(pts[i].y() == 0.0);
    CHECK(pts[i].z() == doctest::Approx(expect[i]).epsilon(1e-9));
  }
}

TEST_CASE("symmetric catenary sags by the requested amount at midspan") {
  CatenaryParams cp;
  cp.span = 185.0;
  cp.sag_parameter = sag_to_parameter(185.0, 5.0);
  auto pts = catenary_sample(cp, 3);
  CHECK(pts[1].z() == doctest::Approx(-5.0).epsilon(1e-9));
}

TEST_CASE("point_to_segment_distance clamps to the endpoints") {
  Vec3 a(0, 0, 0), b(2, 0, 0);
  CHECK(point_to_segment_distance({1, 1, 0}, a, b) == doctest::Approx(1.0));
  CHECK(point_to_segment_distance({-3, 4, 0}, a, b) == doctest::Approx(5.0));
  CHECK(point_to_segment_distance({4, 0, 0}, a, b) == doctest::Approx(2.0));
  CHECK(point_to_segment_distance({1.5, 0, 0}, a, b) == doctest::Approx(0.0));
}

TEST_CASE("LineSegment endpoints round-trip through from_endpoints") {
  LineSegment s = LineSegment::from_endpoints({1, 2, 3}, {4, 6, 3}, 0.02);
  auto [e1, e2] = s.endpoints();
  CHECK((e1 - Vec3(1, 2, 3)).norm() == doctest::Approx(0.0));
  CHECK((e2 - Vec3(4, 6, 3)).norm() == doctest::Approx(0.0));
  CHECK(s.half_length == doctest::Approx(2.5));
  CHECK(s.wire_radius == doctest::Approx(0.02));
  CHECK(s.direction_w.norm() == doctest::Approx(1.0));
}

static std::vector<Vec3> long_span_polyline(int n) {
  CatenaryParams cp;
  cp.span = 185.0;
  cp.sag_parameter = sag_to_parameter(185.0, 5.0);
  cp.height_start = 10.0;
  cp.height_end = 10.0;
  return catenary_sample(cp, n);
}

static double brute_force_max_error(const std::vector<Vec3>& pts,
                                    const std::vector<LineSegment>& segs) {
  double worst = 0.0;
  for (const auto& p : pts) {
    double best = 1e300;
    for (const auto& s : segs) {
      auto [a, b] = s.endpoints();
      best = std::min(best, point_to_segment_distance(p, a, b));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

TEST_CASE("fit_segments_max_error respects the tolerance and chains end to end") {
  auto pts = long_span_polyline(401);
  auto segs = fit_segments_max_error(pts, 0.05);
  REQUIRE(!segs.empty());
  CHECK(brute_force_max_error(pts, segs) <= 0.05 + 1e-12);
  auto [first, last] = std::pair{segs.front().endpoints().first,
                                 segs.back().endpoints().second};
  CHECK((first - pts.front()).norm() == doctest::Approx(0.0));
  CHECK((last - pts.back()).norm() == doctest::Approx(0.0));
  for (size_t i = 1; i < segs.size(); ++i)
    CHECK((segs[i].endpoints().first - segs[i - 1].endpoints().second).norm() ==
          doctest::Approx(0.0));
}

TEST_CASE("fit_segments_count produces the requested count with shrinking error") {
  auto pts = long_span_polyline(401);
  auto s5 = fit_segments_count(pts, 5);
  auto s15 = fit_segments_count(pts, 15);
  CHECK(s5.size() == 5);
  CHECK(s15.size() == 15);
  CHECK(brute_force_max_error(pts, s15) < brute_force_max_error(pts, s5));
  // 15 chords over the 185 m span keep the sag error at centimeter level.
  FitError fe = fit_error(pts, s15);
  CHECK(fe.max_error < 0.05);
  CHECK(fe.mean_error <= fe.max_error);
  CHECK(fe.max_error == doctest::Approx(brute_force_max_error(pts, s15)));
}

TEST_CASE("fit is deterministic") {
  auto pts = long_span_polyline(301);
  auto a = fit_segments_count(pts, 9);
  auto b = fit_segments_count(pts, 9);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].origin_w == b[i].origin_w);
    CHECK(a[i].direction_w == b[i].direction_w);
  }
}

TEST_CASE("transform_line_to_frame applies the inverse pose") {
  LineSegment seg;
  seg.origin_w = {1, 2, 3};
  seg.direction_w = Vec3(0, 1, 0);
  Pose f;
  f.position = {1, 0, 3};
  f.orientation = quat_from_axis_angle({0, 0, 1}, M_PI / 2);
  auto [o, l] = transform_line_to_frame(seg, f);
  // world +y maps to frame... R^T * y_hat with R = rotz(90): y_hat -> x_hat
  CHECK((l - Vec3(1, 0, 0)).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((o - Vec3(2, 0, 0)).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("validation rejects bad inputs") {
  LineSegment s;
  s.half_length = -1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  CatenaryParams cp;
  cp.span = 0.0;
  CHECK_THROWS_AS(cp.validate(), std::invalid_argument);
  CHECK_THROWS_AS(sag_to_parameter(10.0, -1.0), std::invalid_argument);
}
