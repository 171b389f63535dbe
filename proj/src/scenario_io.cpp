#include "percher/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace percher {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(path, "unknown key '" + it.key() + "'");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

template <int N>
Eigen::Matrix<double, N, 1> get_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != N)
    fail(path, "expected an array of " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = get_number(j[i], path);
  return v;
}

RobotState parse_state(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"position", "orientation_wxyz", "velocity",
                  "angular_velocity", "thrusts"});
  RobotState x;
  if (!j.contains("position")) fail(path, "missing 'position'");
  x.p_wb = get_vector<3>(j["position"], path + ".position");
  if (j.contains("orientation_wxyz"))
    x.q_wb = get_vector<4>(j["orientation_wxyz"], path + ".orientation_wxyz");
  if (j.contains("velocity"))
    x.v_w = get_vector<3>(j["velocity"], path + ".velocity");
  if (j.contains("angular_velocity"))
    x.omega_b = get_vector<3>(j["angular_velocity"], path + ".angular_velocity");
  if (j.contains("thrusts"))
    x.gamma = get_vector<4>(j["thrusts"], path + ".thrusts");
  return x;
}

void parse_robot(const json& j, const std::string& path, RobotParams* r) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"mass", "inertia_diag", "rotor_x", "rotor_y",
                  "drag_torque_const", "spin_dirs", "gamma_max", "u_min",
                  "u_max", "gravity", "ellipsoid_radii"});
  if (j.contains("mass")) r->mass = get_number(j["mass"], path + ".mass");
  if (j.contains("inertia_diag"))
    r->inertia_diag = get_vector<3>(j["inertia_diag"], path + ".inertia_diag");
  if (j.contains("rotor_x"))
    r->rotor_x = get_vector<4>(j["rotor_x"], path + ".rotor_x");
  if (j.contains("rotor_y"))
    r->rotor_y = get_vector<4>(j["rotor_y"], path + ".rotor_y");
  if (j.contains("drag_torque_const"))
    r->drag_torque_const =
        get_number(j["drag_torque_const"], path + ".drag_torque_const");
  if (j.contains("spin_dirs"))
    r->spin_dirs = get_vector<4>(j["spin_dirs"], path + ".spin_dirs");
  if (j.contains("gamma_max"))
    r->gamma_max = get_number(j["gamma_max"], path + ".gamma_max");
  if (j.contains("u_min")) r->u_min = get_number(j["u_min"], path + ".u_min");
  if (j.contains("u_max")) r->u_max = get_number(j["u_max"], path + ".u_max");
  if (j.contains("gravity"))
    r->gravity = get_vector<3>(j["gravity"], path + ".gravity");
  if (j.contains("ellipsoid_radii"))
    r->ellipsoid_radii =
        get_vector<3>(j["ellipsoid_radii"], path + ".ellipsoid_radii");
}

void parse_camera(const json& j, const std::string& path, CameraModel* c) {
  expect_object(j, path);
  reject_unknown(j, path, {"fx", "fy", "cx", "cy", "extrinsics"});
  if (j.contains("fx")) c->fx = get_number(j["fx"], path + ".fx");
  if (j.contains("fy")) c->fy = get_number(j["fy"], path + ".fy");
  if (j.contains("cx")) c->cx = get_number(j["cx"], path + ".cx");
  if (j.contains("cy")) c->cy = get_number(j["cy"], path + ".cy");
  if (j.contains("extrinsics")) {
    const json& e = j["extrinsics"];
    const std::string ep = path + ".extrinsics";
    expect_object(e, ep);
    reject_unknown(e, ep, {"position", "orientation_wxyz"});
    if (e.contains("position"))
      c->extrinsics.position = get_vector<3>(e["position"], ep + ".position");
    if (e.contains("orientation_wxyz"))
      c->extrinsics.orientation =
          get_vector<4>(e["orientation_wxyz"], ep + ".orientation_wxyz");
  }
}

LineSegment parse_segment(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"origin", "direction", "half_length", "wire_radius"});
  LineSegment s;
  if (!j.contains("origin") || !j.contains("direction") ||
      !j.contains("half_length"))
    fail(path, "segment needs 'origin', 'direction' and 'half_length'");
  s.origin_w = get_vector<3>(j["origin"], path + ".origin");
  s.direction_w = get_vector<3>(j["direction"], path + ".direction").normalized();
  s.half_length = get_number(j["half_length"], path + ".half_length");
  if (j.contains("wire_radius"))
    s.wire_radius = get_number(j["wire_radius"], path + ".wire_radius");
  return s;
}

CatenarySpec parse_catenary_spec(const json& j, const std::string& path,
                                 bool allow_fit) {
  expect_object(j, path);
  std::set<std::string> allowed = {"start", "end", "sag", "wire_radius",
                                   "samples"};
  if (allow_fit) allowed.insert("fit");
  reject_unknown(j, path, allowed);
  for (const char* key : {"start", "end", "sag"})
    if (!j.contains(key)) fail(path, std::string("missing '") + key + "'");

  CatenarySpec spec;
  spec.start = get_vector<3>(j["start"], path + ".start");
  spec.end = get_vector<3>(j["end"], path + ".end");
  spec.sag = get_number(j["sag"], path + ".sag");
  if (j.contains("wire_radius"))
    spec.wire_radius = get_number(j["wire_radius"], path + ".wire_radius");
  if (j.contains("samples"))
    spec.samples = get_int(j["samples"], path + ".samples");
  return spec;
}

std::vector<LineSegment> parse_catenary(const json& j, const std::string& path) {
  CatenarySpec spec = parse_catenary_spec(j, path, true);
  if (!j.contains("fit")) fail(path, "missing 'fit'");
  std::vector<Vec3> world = catenary_world_polyline(spec);
  const double wire_radius = spec.wire_radius;

  const json& f = j["fit"];
  const std::string fp = path + ".fit";
  expect_object(f, fp);
  reject_unknown(f, fp, {"segment_count", "max_error"});
  if (f.contains("segment_count") == f.contains("max_error"))
    fail(fp, "needs exactly one of 'segment_count' or 'max_error'");
  if (f.contains("segment_count"))
    return fit_segments_count(world, get_int(f["segment_count"],
                                             fp + ".segment_count"),
                              wire_radius);
  return fit_segments_max_error(
      world, get_number(f["max_error"], fp + ".max_error"), wire_radius);
}

void parse_weights(const json& j, const std::string& path, Weights* w) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"thrust", "omega", "reproj", "terminal_pos", "terminal_att",
                  "terminal_vel", "terminal_omega", "perception_decay_rate",
                  "soft_penalty"});
  auto opt = [&](const char* key, double* dst) {
    if (j.contains(key)) *dst = get_number(j[key], path + "." + key);
  };
  opt("thrust", &w->thrust);
  opt("omega", &w->omega);
  opt("reproj", &w->reproj);
  opt("terminal_pos", &w->terminal_pos);
  opt("terminal_att", &w->terminal_att);
  opt("terminal_vel", &w->terminal_vel);
  opt("terminal_omega", &w->terminal_omega);
  opt("perception_decay_rate", &w->perception_decay_rate);
  opt("soft_penalty", &w->soft_penalty);
}

void parse_solver(const json& j, const std::string& path, IpmOptions* o) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"max_iterations", "tol_stationarity", "tol_equality",
                  "tol_complementarity", "mu_init", "mu_shrink", "mu_min",
                  "tau", "reg_init", "verbose"});
  if (j.contains("max_iterations"))
    o->max_iterations = get_int(j["max_iterations"], path + ".max_iterations");
  auto opt = [&](const char* key, double* dst) {
    if (j.contains(key)) *dst = get_number(j[key], path + "." + key);
  };
  opt("tol_stationarity", &o->tol_stationarity);
  opt("tol_equality", &o->tol_equality);
  opt("tol_complementarity", &o->tol_complementarity);
  opt("mu_init", &o->mu_init);
  opt("mu_shrink", &o->mu_shrink);
  opt("mu_min", &o->mu_min);
  opt("tau", &o->tau);
  opt("reg_init", &o->reg_init);
  if (j.contains("verbose"))
    o->verbose = get_bool(j["verbose"], path + ".verbose");
}

void parse_recovery(const json& j, const std::string& path, RecoveryConfig* r) {
  expect_object(j, path);
  reject_unknown(j, path, {"target_position", "t_min", "t_max"});
  if (j.contains("target_position")) {
    r->has_target_position = true;
    r->target_position =
        get_vector<3>(j["target_position"], path + ".target_position");
  }
  if (j.contains("t_min")) r->t_min = get_number(j["t_min"], path + ".t_min");
  if (j.contains("t_max")) r->t_max = get_number(j["t_max"], path + ".t_max");
}

json state_to_json(const RobotState& x) {
  return json{{"position", {x.p_wb.x(), x.p_wb.y(), x.p_wb.z()}},
              {"orientation_wxyz", {x.q_wb[0], x.q_wb[1], x.q_wb[2], x.q_wb[3]}},
              {"velocity", {x.v_w.x(), x.v_w.y(), x.v_w.z()}},
              {"angular_velocity",
               {x.omega_b.x(), x.omega_b.y(), x.omega_b.z()}},
              {"thrusts", {x.gamma[0], x.gamma[1], x.gamma[2], x.gamma[3]}}};
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  expect_object(j, "$");
  reject_unknown(j, "$",
                 {"format_version", "robot", "camera", "segments", "catenary",
                  "objective_segment", "x_init", "x_perch", "bounds",
                  "n_nodes", "shooting_substeps", "weights",
                  "perception_enabled", "recovery", "solver"});
  if (!j.contains("format_version")) fail("$", "missing 'format_version'");
  if (get_int(j["format_version"], "$.format_version") != kFormatVersion)
    fail("$.format_version", "unsupported version");

  Scenario s;
  if (j.contains("robot")) parse_robot(j["robot"], "$.robot", &s.robot);
  if (j.contains("camera")) parse_camera(j["camera"], "$.camera", &s.camera);
  if (j.contains("segments")) {
    const json& arr = j["segments"];
    if (!arr.is_array()) fail("$.segments", "expected an array");
    for (size_t i = 0; i < arr.size(); ++i)
      s.segments.push_back(parse_segment(
          arr[i], "$.segments[" + std::to_string(i) + "]"));
  }
  if (j.contains("catenary")) {
    auto fitted = parse_catenary(j["catenary"], "$.catenary");
    s.segments.insert(s.segments.end(), fitted.begin(), fitted.end());
  }
  if (j.contains("objective_segment"))
    s.objective_segment =
        get_int(j["objective_segment"], "$.objective_segment");
  if (!j.contains("x_init")) fail("$", "missing 'x_init'");
  if (!j.contains("x_perch")) fail("$", "missing 'x_perch'");
  s.x_init = parse_state(j["x_init"], "$.x_init");
  s.x_perch = parse_state(j["x_perch"], "$.x_perch");
  if (j.contains("bounds")) {
    const json& b = j["bounds"];
    expect_object(b, "$.bounds");
    reject_unknown(b, "$.bounds", {"t_min", "t_max", "z_min"});
    if (b.contains("t_min"))
      s.t_min = get_number(b["t_min"], "$.bounds.t_min");
    if (b.contains("t_max"))
      s.t_max = get_number(b["t_max"], "$.bounds.t_max");
    if (b.contains("z_min"))
      s.z_min = get_number(b["z_min"], "$.bounds.z_min");
  }
  if (j.contains("n_nodes")) s.n_nodes = get_int(j["n_nodes"], "$.n_nodes");
  if (j.contains("shooting_substeps"))
    s.shooting_substeps =
        get_int(j["shooting_substeps"], "$.shooting_substeps");
  if (j.contains("weights")) parse_weights(j["weights"], "$.weights", &s.weights);
  if (j.contains("perception_enabled"))
    s.perception_enabled =
        get_bool(j["perception_enabled"], "$.perception_enabled");
  if (j.contains("recovery"))
    parse_recovery(j["recovery"], "$.recovery", &s.recovery);
  if (j.contains("solver")) parse_solver(j["solver"], "$.solver", &s.solver);

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("invalid scenario: ") + e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  return scenario_from_json(read_file(path));
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["format_version"] = kFormatVersion;
  j["robot"] = {
      {"mass", s.robot.mass},
      {"inertia_diag",
       {s.robot.inertia_diag[0], s.robot.inertia_diag[1],
        s.robot.inertia_diag[2]}},
      {"rotor_x",
       {s.robot.rotor_x[0], s.robot.rotor_x[1], s.robot.rotor_x[2],
        s.robot.rotor_x[3]}},
      {"rotor_y",
       {s.robot.rotor_y[0], s.robot.rotor_y[1], s.robot.rotor_y[2],
        s.robot.rotor_y[3]}},
      {"drag_torque_const", s.robot.drag_torque_const},
      {"spin_dirs",
       {s.robot.spin_dirs[0], s.robot.spin_dirs[1], s.robot.spin_dirs[2],
        s.robot.spin_dirs[3]}},
      {"gamma_max", s.robot.gamma_max},
      {"u_min", s.robot.u_min},
      {"u_max", s.robot.u_max},
      {"gravity",
       {s.robot.gravity[0], s.robot.gravity[1], s.robot.gravity[2]}},
      {"ellipsoid_radii",
       {s.robot.ellipsoid_radii[0], s.robot.ellipsoid_radii[1],
        s.robot.ellipsoid_radii[2]}}};
  j["camera"] = {
      {"fx", s.camera.fx},
      {"fy", s.camera.fy},
      {"cx", s.camera.cx},
      {"cy", s.camera.cy},
      {"extrinsics",
       {{"position",
         {s.camera.extrinsics.position[0], s.camera.extrinsics.position[1],
          s.camera.extrinsics.position[2]}},
        {"orientation_wxyz",
         {s.camera.extrinsics.orientation[0], s.camera.extrinsics.orientation[1],
          s.camera.extrinsics.orientation[2],
          s.camera.extrinsics.orientation[3]}}}}};
  j["segments"] = json::array();
  for (const auto& seg : s.segments)
    j["segments"].push_back(
        {{"origin", {seg.origin_w[0], seg.origin_w[1], seg.origin_w[2]}},
         {"direction",
          {seg.direction_w[0], seg.direction_w[1], seg.direction_w[2]}},
         {"half_length", seg.half_length},
         {"wire_radius", seg.wire_radius}});
  j["objective_segment"] = s.objective_segment;
  j["x_init"] = state_to_json(s.x_init);
  j["x_perch"] = state_to_json(s.x_perch);
  j["bounds"] = {{"t_min", s.t_min}, {"t_max", s.t_max}, {"z_min", s.z_min}};
  j["n_nodes"] = s.n_nodes;
  j["shooting_substeps"] = s.shooting_substeps;
  j["weights"] = {{"thrust", s.weights.thrust},
                  {"omega", s.weights.omega},
                  {"reproj", s.weights.reproj},
                  {"terminal_pos", s.weights.terminal_pos},
                  {"terminal_att", s.weights.terminal_att},
                  {"terminal_vel", s.weights.terminal_vel},
                  {"terminal_omega", s.weights.terminal_omega},
                  {"perception_decay_rate", s.weights.perception_decay_rate},
                  {"soft_penalty", s.weights.soft_penalty}};
  j["perception_enabled"] = s.perception_enabled;
  json rec = {{"t_min", s.recovery.t_min}, {"t_max", s.recovery.t_max}};
  if (s.recovery.has_target_position)
    rec["target_position"] = {s.recovery.target_position[0],
                              s.recovery.target_position[1],
                              s.recovery.target_position[2]};
  j["recovery"] = rec;
  j["solver"] = {{"max_iterations", s.solver.max_iterations},
                 {"tol_stationarity", s.solver.tol_stationarity},
                 {"tol_equality", s.solver.tol_equality},
                 {"tol_complementarity", s.solver.tol_complementarity},
                 {"mu_init", s.solver.mu_init},
                 {"mu_shrink", s.solver.mu_shrink},
                 {"mu_min", s.solver.mu_min},
                 {"tau", s.solver.tau},
                 {"reg_init", s.solver.reg_init},
                 {"verbose", s.solver.verbose}};
  return j.dump(2) + "\n";
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out =
      "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,g1,g2,g3,g4,u1,u2,u3,u4\n";
  for (const auto& s : traj.samples) {
    out += format_g17(s.t);
    const StateT<double> x = s.x.to_vector();
    for (int i = 0; i < kStateDim; ++i) out += "," + format_g17(x[i]);
    for (int i = 0; i < kInputDim; ++i) out += "," + format_g17(s.u[i]);
    out += "\n";
  }
  return out;
}

Trajectory trajectory_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,g1,g2,g3,g4,u1,u2,u3,u4")
    throw FormatError("trajectory CSV: bad or missing header");

  Trajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) {
      try {
        size_t pos = 0;
        vals.push_back(std::stod(cell, &pos));
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw FormatError("trajectory CSV: bad number '" + cell + "'");
      }
    }
    if (vals.size() != 1 + kStateDim + kInputDim)
      throw FormatError("trajectory CSV: expected " +
                        std::to_string(1 + kStateDim + kInputDim) +
                        " columns, got " + std::to_string(vals.size()));
    TrajectorySample s;
    s.t = vals[0];
    StateT<double> x;
    for (int i = 0; i < kStateDim; ++i) x[i] = vals[1 + i];
    s.x = RobotState::from_vector(x);
    for (int i = 0; i < kInputDim; ++i) s.u[i] = vals[1 + kStateDim + i];
    traj.samples.push_back(s);
  }
  if (traj.samples.size() >= 2)
    traj.dt = traj.samples[1].t - traj.samples[0].t;
  return traj;
}

void save_trajectory(const std::string& path, const Trajectory& traj) {
  write_file(path, trajectory_to_csv(traj));
}

Trajectory load_trajectory(const std::string& path) {
  return trajectory_from_csv(read_file(path));
}

std::string solve_report_to_json(const SolveReport& r) {
  json j;
  j["format_version"] = kFormatVersion;
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["kkt_stationarity"] = r.kkt_stationarity;
  j["kkt_equality"] = r.kkt_equality;
  j["kkt_complementarity"] = r.kkt_complementarity;
  j["objective"] = r.objective;
  j["horizon_T"] = r.horizon_T;
  j["wall_time_s"] = r.wall_time_s;
  return j.dump(2) + "\n";
}

EvaluationReport evaluate_trajectory(const Trajectory& traj,
                                     const Scenario& scn) {
  EvaluationReport rep;
  const size_t n = traj.samples.size();
  rep.h_ca.assign(scn.segments.size(), {});
  rep.thrust.assign(4, {});
  const bool has_line = !scn.segments.empty();
  const LineSegment* obj_seg =
      has_line ? &scn.segments[scn.objective_segment] : nullptr;

  for (const auto& s : traj.samples) {
    rep.time.push_back(s.t);
    rep.z.push_back(s.x.p_wb.z());
    for (int i = 0; i < 4; ++i) rep.thrust[i].push_back(s.x.gamma[i]);
    for (size_t k = 0; k < scn.segments.size(); ++k)
      rep.h_ca[k].push_back(
          collision_constraint_hca(s.x, scn.segments[k], scn.robot));
    if (has_line) {
      rep.reproj.push_back(reprojection_error(s.x, *obj_seg, scn.camera));
      rep.h_lc.push_back(cheirality_constraint_hlc(s.x, *obj_seg, scn.camera));
      rep.h_sv.push_back(visibility_constraint_hsv(s.x, *obj_seg, scn.camera));
    }
  }

  rep.duration = traj.duration();
  rep.min_h_ca = std::numeric_limits<double>::infinity();
  for (const auto& trace : rep.h_ca)
    for (double v : trace) rep.min_h_ca = std::min(rep.min_h_ca, v);
  if (rep.h_ca.empty()) rep.min_h_ca = std::numeric_limits<double>::quiet_NaN();
  rep.min_z = n ? *std::min_element(rep.z.begin(), rep.z.end())
                : std::numeric_limits<double>::quiet_NaN();
  rep.min_thrust = std::numeric_limits<double>::infinity();
  rep.max_thrust = -std::numeric_limits<double>::infinity();
  for (const auto& trace : rep.thrust)
    for (double v : trace) {
      rep.min_thrust = std::min(rep.min_thrust, v);
      rep.max_thrust = std::max(rep.max_thrust, v);
    }
  if (!rep.reproj.empty()) {
    double acc = 0.0;
    for (double v : rep.reproj) acc += std::abs(v);
    rep.mean_abs_reproj = acc / static_cast<double>(rep.reproj.size());
  }
  return rep;
}

std::string evaluation_report_to_json(const EvaluationReport& r) {
  json j;
  j["format_version"] = kFormatVersion;
  j["summary"] = {{"min_h_ca", r.min_h_ca},
                  {"min_z", r.min_z},
                  {"min_thrust", r.min_thrust},
                  {"max_thrust", r.max_thrust},
                  {"duration", r.duration},
                  {"mean_abs_reproj", r.mean_abs_reproj}};
  if (std::isfinite(r.rmse_position))
    j["summary"]["rmse_position"] = r.rmse_position;
  if (std::isfinite(r.rmse_orientation))
    j["summary"]["rmse_orientation"] = r.rmse_orientation;
  j["time"] = r.time;
  j["z"] = r.z;
  j["thrust"] = r.thrust;
  j["h_ca"] = r.h_ca;
  j["reproj"] = r.reproj;
  j["h_lc"] = r.h_lc;
  j["h_sv"] = r.h_sv;
  return j.dump() + "\n";
}

CatenarySpec catenary_spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return parse_catenary_spec(j, "$", false);
}

std::vector<Vec3> catenary_world_polyline(const CatenarySpec& spec) {
  Vec3 horiz = spec.end - spec.start;
  horiz.z() = 0.0;
  const double span = horiz.norm();
  if (!(span > 0.0))
    throw SchemaError("catenary anchors must be horizontally separated");
  const Vec3 dir_h = horiz / span;

  CatenaryParams cat;
  cat.span = span;
  cat.sag_parameter = sag_to_parameter(span, spec.sag);
  cat.height_start = spec.start.z();
  cat.height_end = spec.end.z();
  std::vector<Vec3> local = catenary_sample(cat, spec.samples);
  std::vector<Vec3> world;
  world.reserve(local.size());
  for (const Vec3& p : local)
    world.push_back(Vec3(spec.start.x(), spec.start.y(), 0.0) +
                    p.x() * dir_h + Vec3(0.0, 0.0, p.z()));
  return world;
}

std::string segments_to_json(const std::vector<LineSegment>& segments,
                             const FitError& error) {
  json j;
  j["format_version"] = kFormatVersion;
  j["segments"] = json::array();
  for (const auto& seg : segments)
    j["segments"].push_back(
        {{"origin", {seg.origin_w[0], seg.origin_w[1], seg.origin_w[2]}},
         {"direction",
          {seg.direction_w[0], seg.direction_w[1], seg.direction_w[2]}},
         {"half_length", seg.half_length},
         {"wire_radius", seg.wire_radius}});
  j["max_error"] = error.max_error;
  j["mean_error"] = error.mean_error;
  return j.dump(2) + "\n";
}

std::string maneuver_error_json(const std::string& kind,
                                const std::string& message) {
  json j;
  j["format_version"] = kFormatVersion;
  j["error"] = kind;
  j["message"] = message;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out << content;
  if (!out) throw FormatError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace percher
