#ifndef PERCHER_SCENARIO_IO_HPP
#define PERCHER_SCENARIO_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "percher/pipeline.hpp"

namespace percher {

inline constexpr int kFormatVersion = 1;

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Strict JSON scenario parsing: every key is validated, unknown keys are
// rejected, all quantities are SI (m, s, kg, N, rad). Throws SchemaError
// with a path-qualified message on any violation.
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& scenario);

// Trajectory CSV: header then one row per sample,
//   t, px, py, pz, qw, qx, qy, qz, vx, vy, vz, wx, wy, wz,
//   g1, g2, g3, g4, u1, u2, u3, u4
// serialized with 17 significant digits so parse(serialize(x)) == x bitwise.
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text);
void save_trajectory(const std::string& path, const Trajectory& traj);
Trajectory load_trajectory(const std::string& path);

std::string solve_report_to_json(const SolveReport& report);

// Per-sample constraint/cost traces recomputed from a stored trajectory,
// plus the summary statistics derived from them.
struct EvaluationReport {
  std::vector<double> time;
  std::vector<std::vector<double>> h_ca;  // [segment][sample]
  std::vector<double> reproj;             // r~ against the objective segment
  std::vector<double> h_lc;
  std::vector<double> h_sv;
  std::vector<std::vector<double>> thrust;  // [rotor][sample]
  std::vector<double> z;

  double min_h_ca = 0.0;
  double min_z = 0.0;
  double min_thrust = 0.0;
  double max_thrust = 0.0;
  double duration = 0.0;
  double mean_abs_reproj = 0.0;
  // Position / orientation RMSE against a reference trajectory; NaN when no
  // reference was supplied.
  double rmse_position = std::numeric_limits<double>::quiet_NaN();
  double rmse_orientation = std::numeric_limits<double>::quiet_NaN();
};

EvaluationReport evaluate_trajectory(const Trajectory& traj,
                                     const Scenario& scenario);
std::string evaluation_report_to_json(const EvaluationReport& report);

std::string maneuver_error_json(const std::string& kind,
                                const std::string& message);

// Hanging-wire description used by scenario files and the fitting command:
// two 3D anchors, the midspan sag, and the polyline sampling density.
struct CatenarySpec {
  Vec3 start = Vec3::Zero();
  Vec3 end = Vec3::UnitX();
  double sag = 0.1;
  double wire_radius = 0.0;
  int samples = 512;
};

CatenarySpec catenary_spec_from_json(const std::string& text);
std::vector<Vec3> catenary_world_polyline(const CatenarySpec& spec);
std::string segments_to_json(const std::vector<LineSegment>& segments,
                             const FitError& error);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace percher

#endif  // PERCHER_SCENARIO_IO_HPP
