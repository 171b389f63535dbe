#include "percher/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace percher {

void LineSegment::validate() const {
  if (std::abs(direction_w.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("LineSegment: direction must be unit norm");
  if (!(half_length > 0.0))
    throw std::invalid_argument("LineSegment: half_length must be > 0");
  if (wire_radius < 0.0)
    throw std::invalid_argument("LineSegment: wire_radius must be >= 0");
}

LineSegment LineSegment::from_endpoints(const Vec3& e1, const Vec3& e2,
                                        double wire_radius) {
  Vec3 d = e2 - e1;
  double len = d.norm();
  if (!(len > 0.0))
    throw std::invalid_argument("LineSegment: coincident endpoints");
  LineSegment s;
  s.origin_w = 0.5 * (e1 + e2);
  s.direction_w = d / len;
  s.half_length = 0.5 * len;
  s.wire_radius = wire_radius;
  return s;
}

void Pose::validate() const {
  if (std::abs(orientation.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("Pose: quaternion must be unit norm");
}

void CatenaryParams::validate() const {
  if (!(span > 0.0))
    throw std::invalid_argument("CatenaryParams: span must be > 0");
  if (!(sag_parameter > 0.0))
    throw std::invalid_argument("CatenaryParams: sag_parameter must be > 0");
}

double sag_to_parameter(double span, double sag) {
  if (!(span > 0.0) || !(sag > 0.0))
    throw std::invalid_argument("sag_to_parameter: span and sag must be > 0");
  // Initial guess from the parabolic approximation sag ~ L^2 / (8 a).
  double a = span * span / (8.0 * sag);
  for (int it = 0; it < 100; ++it) {
    double u = 0.5 * span / a;
    double f = a * (std::cosh(u) - 1.0) - sag;
    double df = std::cosh(u) - 1.0 - u * std::sinh(u);
    double step = f / df;
    a -= step;
    if (!(a > 0.0))
      throw std::invalid_argument("sag_to_parameter: no positive solution");
    if (std::abs(step) < 1e-12 * a) break;
  }
  return a;
}

std::vector<Vec3> catenary_sample(const CatenaryParams& params, int n_points) {
  params.validate();
  if (n_points < 2)
    throw std::invalid_argument("catenary_sample: n_points must be >= 2");

  const double a = params.sag_parameter;
  const double L = params.span;
  // z(x) = a cosh((x - x0)/a) + c with z(0) = h1, z(L) = h2. Using
  // cosh(u) - cosh(v) = 2 sinh((u+v)/2) sinh((u-v)/2) with u = -x0/a,
  // v = (L-x0)/a the offset has a closed form.
  const double dh = params.height_start - params.height_end;
  const double m = std::asinh(dh / (2.0 * a * std::sinh(-L / (2.0 * a))));
  const double x0 = -a * m + 0.5 * L;  // from (u+v)/2 = m
  const double c = params.height_start - a * std::cosh(-x0 / a);

  std::vector<Vec3> pts;
  pts.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    double x = L * static_cast<double>(i) / (n_points - 1);
    pts.emplace_back(x, 0.0, a * std::cosh((x - x0) / a) + c);
  }
  // Pin the endpoints exactly.
  pts.front().z() = params.height_start;
  pts.back().z() = params.height_end;
  return pts;
}

double point_to_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

namespace {

// Farthest point of polyline[lo..hi] from the chord polyline[lo]-polyline[hi].
// Ties break toward the lower index.
std::pair<int, double> farthest_point(const std::vector<Vec3>& pl, int lo,
                                      int hi) {
  int best = -1;
  double best_d = -1.0;
  for (int i = lo + 1; i < hi; ++i) {
    double d = point_to_segment_distance(pl[i], pl[lo], pl[hi]);
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return {best, best_d};
}

void rdp_recurse(const std::vector<Vec3>& pl, int lo, int hi, double max_error,
                 std::vector<int>& breakpoints) {
  auto [idx, dev] = farthest_point(pl, lo, hi);
  if (idx < 0 || dev <= max_error) return;
  rdp_recurse(pl, lo, idx, max_error, breakpoints);
  breakpoints.push_back(idx);
  rdp_recurse(pl, idx, hi, max_error, breakpoints);
}

std::vector<LineSegment> chain_from_breakpoints(const std::vector<Vec3>& pl,
                                                std::vector<int> bps,
                                                double wire_radius) {
  std::sort(bps.begin(), bps.end());
  std::vector<LineSegment> out;
  out.reserve(bps.size() - 1);
  for (size_t i = 0; i + 1 < bps.size(); ++i)
    out.push_back(
        LineSegment::from_endpoints(pl[bps[i]], pl[bps[i + 1]], wire_radius));
  return out;
}

void check_polyline(const std::vector<Vec3>& pl) {
  if (pl.size() < 2)
    throw std::invalid_argument("fit_segments: polyline needs >= 2 points");
}

}  // namespace

std::vector<LineSegment> fit_segments_max_error(
    const std::vector<Vec3>& polyline, double max_error, double wire_radius) {
  check_polyline(polyline);
  if (!(max_error >= 0.0))
    throw std::invalid_argument("fit_segments: max_error must be >= 0");
  std::vector<int> bps = {0};
  rdp_recurse(polyline, 0, static_cast<int>(polyline.size()) - 1, max_error,
              bps);
  bps.push_back(static_cast<int>(polyline.size()) - 1);
  return chain_from_breakpoints(polyline, bps, wire_radius);
}

std::vector<LineSegment> fit_segments_count(const std::vector<Vec3>& polyline,
                                            int segment_count,
                                            double wire_radius) {
  check_polyline(polyline);
  if (segment_count < 1)
    throw std::invalid_argument("fit_segments: segment_count must be >= 1");
  const int last = static_cast<int>(polyline.size()) - 1;
  if (segment_count > last) segment_count = last;

  // Minimax partition by dynamic programming: E[k][i] is the best achievable
  // worst-chord deviation covering points 0..i with k chords. Ties break
  // toward the earliest predecessor, which keeps the result deterministic.
  const int n = last + 1;
  const int K = segment_count;
  std::vector<std::vector<double>> chord(n, std::vector<double>(n, 0.0));
  for (int lo = 0; lo < n; ++lo)
    for (int hi = lo + 2; hi < n; ++hi)
      chord[lo][hi] = farthest_point(polyline, lo, hi).second;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> E(K + 1, std::vector<double>(n, kInf));
  std::vector<std::vector<int>> prev(K + 1, std::vector<int>(n, -1));
  for (int i = 1; i < n; ++i) {
    E[1][i] = std::max(0.0, chord[0][i]);
    prev[1][i] = 0;
  }
  for (int k = 2; k <= K; ++k)
    for (int i = k; i < n; ++i)
      for (int j = k - 1; j < i; ++j) {
        double cand = std::max(E[k - 1][j], std::max(0.0, chord[j][i]));
        if (cand < E[k][i]) {
          E[k][i] = cand;
          prev[k][i] = j;
        }
      }

  std::vector<int> bps;
  int i = last;
  for (int k = K; k >= 1; --k) {
    bps.push_back(i);
    i = prev[k][i];
  }
  bps.push_back(0);
  return chain_from_breakpoints(polyline, bps, wire_radius);
}

FitError fit_error(const std::vector<Vec3>& polyline,
                   const std::vector<LineSegment>& segments) {
  FitError e;
  if (polyline.empty() || segments.empty()) return e;
  double sum = 0.0;
  for (const Vec3& p : polyline) {
    double best = std::numeric_limits<double>::infinity();
    for (const LineSegment& s : segments) {
      auto [a, b] = s.endpoints();
      best = std::min(best, point_to_segment_distance(p, a, b));
    }
    e.max_error = std::max(e.max_error, best);
    sum += best;
  }
  e.mean_error = sum / static_cast<double>(polyline.size());
  return e;
}

std::pair<Vec3, Vec3> transform_line_to_frame(const LineSegment& seg,
                                              const Pose& frame_pose) {
  seg.validate();
  frame_pose.validate();
  Vec3 o = quat_rotate_inv<double>(frame_pose.orientation,
                                   seg.origin_w - frame_pose.position);
  Vec3 l = quat_rotate_inv<double>(frame_pose.orientation, seg.direction_w);
  return {o, l};
}

}  // namespace percher
