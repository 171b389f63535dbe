#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "percher/pipeline.hpp"
#include "percher/scenario_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitSolver = 3;
constexpr int kExitAudit = 4;

int emit_error(const std::string& kind, const std::string& message) {
  std::fputs(percher::maneuver_error_json(kind, message).c_str(), stdout);
  if (kind == "schema" || kind == "format") return kExitSchema;
  if (kind == "audit") return kExitAudit;
  return kExitSolver;
}

// Deterministic small perturbation of the straight-line initial guess, used
// to probe basins of attraction from scripts.
void perturb_guess(percher::DecisionVector* dv, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> noise(-1e-2, 1e-2);
  for (size_t k = 1; k < dv->states.size(); ++k) {
    for (int i = 0; i < 3; ++i) dv->states[k].p_wb[i] += noise(rng);
    for (int i = 0; i < 3; ++i) dv->states[k].v_w[i] += noise(rng);
  }
  for (auto& u : dv->inputs)
    for (int i = 0; i < 4; ++i) u[i] += noise(rng);
}

int cmd_generate(const std::string& scenario_path, const std::string& out_dir,
                 bool no_perception, double dt, int seed_guess) {
  percher::Scenario scn;
  try {
    scn = percher::load_scenario(scenario_path);
  } catch (const percher::SchemaError& e) {
    return emit_error("schema", e.what());
  } catch (const percher::FormatError& e) {
    return emit_error("format", e.what());
  }
  if (no_perception) scn.perception_enabled = false;

  percher::ManeuverResult result;
  try {
    if (seed_guess >= 0) {
      percher::DecisionVector guess =
          percher::initial_guess(scn, percher::NlpMode::Perching);
      perturb_guess(&guess, static_cast<unsigned>(seed_guess));
      result = percher::generate_maneuver(scn, dt, &guess);
    } else {
      result = percher::generate_maneuver(scn, dt);
    }
  } catch (const percher::InfeasibleStartError& e) {
    return emit_error("solver", e.what());
  } catch (const percher::StageError& e) {
    return emit_error("solver", e.what());
  } catch (const percher::AuditFailure& e) {
    return emit_error("audit", e.what());
  } catch (const percher::ChainingError& e) {
    return emit_error("audit", e.what());
  } catch (const percher::NumericalFailure& e) {
    return emit_error("solver", e.what());
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  percher::save_trajectory(out_dir + "/trajectory.csv", result.chained);
  percher::write_file(out_dir + "/perch_report.json",
                      percher::solve_report_to_json(result.perch_report));
  percher::write_file(out_dir + "/recovery_report.json",
                      percher::solve_report_to_json(result.recovery_report));
  percher::write_file(
      out_dir + "/evaluation.json",
      percher::evaluation_report_to_json(
          percher::evaluate_trajectory(result.chained, scn)));
  return kExitOk;
}

int cmd_evaluate(const std::string& trajectory_path,
                 const std::string& scenario_path, const std::string& out) {
  try {
    percher::Scenario scn = percher::load_scenario(scenario_path);
    percher::Trajectory traj = percher::load_trajectory(trajectory_path);
    std::string report = percher::evaluation_report_to_json(
        percher::evaluate_trajectory(traj, scn));
    if (out.empty())
      std::fputs(report.c_str(), stdout);
    else
      percher::write_file(out, report);
    return kExitOk;
  } catch (const percher::SchemaError& e) {
    return emit_error("schema", e.what());
  } catch (const percher::FormatError& e) {
    return emit_error("format", e.what());
  }
}

int cmd_approx(const std::string& spec_path, int segment_count,
               double max_error, const std::string& out) {
  try {
    percher::CatenarySpec spec =
        percher::catenary_spec_from_json(percher::read_file(spec_path));
    std::vector<percher::Vec3> polyline =
        percher::catenary_world_polyline(spec);
    std::vector<percher::LineSegment> segments =
        segment_count > 0
            ? percher::fit_segments_count(polyline, segment_count,
                                          spec.wire_radius)
            : percher::fit_segments_max_error(polyline, max_error,
                                              spec.wire_radius);
    std::string report = percher::segments_to_json(
        segments, percher::fit_error(polyline, segments));
    if (out.empty())
      std::fputs(report.c_str(), stdout);
    else
      percher::write_file(out, report);
    return kExitOk;
  } catch (const percher::SchemaError& e) {
    return emit_error("schema", e.what());
  } catch (const percher::FormatError& e) {
    return emit_error("format", e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Powerline perching trajectory generator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = ".", trajectory_path, out_file;
  std::string spec_path;
  bool no_perception = false;
  double dt = 1e-3;
  int seed_guess = -1;
  int segment_count = 0;
  double max_error = 0.0;

  CLI::App* gen = app.add_subcommand(
      "generate", "Solve a scenario and write the chained trajectory");
  gen->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  gen->add_option("--out-dir", out_dir, "Output directory");
  gen->add_flag("--no-perception", no_perception,
                "Disable the perception objective and constraints");
  gen->add_option("--dt", dt, "Fine integration step [s]");
  gen->add_option("--seed-guess", seed_guess,
                  "Perturb the initial guess with this RNG seed");

  CLI::App* eva = app.add_subcommand(
      "evaluate", "Recompute constraint and cost traces for a trajectory");
  eva->add_option("trajectory", trajectory_path, "Trajectory CSV")->required();
  eva->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  eva->add_option("--out", out_file, "Write the report here instead of stdout");

  CLI::App* apx = app.add_subcommand(
      "approx", "Fit line segments to a hanging-wire polyline");
  apx->add_option("spec", spec_path, "Catenary spec JSON file")->required();
  CLI::Option* oc =
      apx->add_option("--segment-count", segment_count, "Number of segments");
  CLI::Option* oe =
      apx->add_option("--max-error", max_error, "Max fit error [m]");
  oc->excludes(oe);
  apx->add_option("--out", out_file, "Write the segments here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed())
    return cmd_generate(scenario_path, out_dir, no_perception, dt, seed_guess);
  if (eva->parsed())
    return cmd_evaluate(trajectory_path, scenario_path, out_file);
  if (apx->parsed()) {
    if (segment_count <= 0 && !(max_error > 0.0)) {
      std::fputs(percher::maneuver_error_json(
                     "schema", "need --segment-count or --max-error")
                     .c_str(),
                 stdout);
      return kExitSchema;
    }
    return cmd_approx(spec_path, segment_count, max_error, out_file);
  }
  return kExitSchema;
}
