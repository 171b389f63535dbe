#ifndef PERCHER_PIPELINE_HPP
#define PERCHER_PIPELINE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "percher/nlp.hpp"

namespace percher {

// One collision-constraint violation found on the finely integrated
// trajectory; h_ca < 0 by construction.
struct Violation {
  double time = 0.0;
  int segment_index = -1;
  double h_ca = 0.0;
  Vec3 position = Vec3::Zero();
};

// Solver non-convergence in a named pipeline stage.
struct StageError : std::runtime_error {
  std::string stage;
  SolveReport report;
  StageError(std::string stage_name, SolveReport rep)
      : std::runtime_error("solver failed to converge in stage '" +
                           stage_name + "' (" + to_string(rep.status) +
                           " after " + std::to_string(rep.iterations) +
                           " iterations)"),
        stage(std::move(stage_name)),
        report(std::move(rep)) {}
};

// Collision violations that survived the higher-resolution re-solve.
struct AuditFailure : std::runtime_error {
  std::string stage;
  std::vector<Violation> violations;
  AuditFailure(std::string stage_name, std::vector<Violation> v)
      : std::runtime_error("collision audit failed in stage '" + stage_name +
                           "': " + std::to_string(v.size()) + " violations"),
        stage(std::move(stage_name)),
        violations(std::move(v)) {}
};

struct ChainingError : std::runtime_error {
  double max_deviation = 0.0;
  explicit ChainingError(double dev)
      : std::runtime_error(
            "trajectory junction mismatch, max component deviation " +
            std::to_string(dev)),
        max_deviation(dev) {}
};

struct ManeuverResult {
  Trajectory perch_trajectory;
  Trajectory recovery_trajectory;
  Trajectory chained;
  SolveReport perch_report;
  SolveReport recovery_report;
  std::vector<Violation> audit;   // empty on success
  bool used_higher_n = false;     // coarse solve was refined at doubled N
  DecisionVector perch_solution;
  DecisionVector recovery_solution;
  Scenario recovery_scenario;     // perching scenario rewritten for recovery
};

// Evaluates the collision constraint at every sample x segment and returns
// all negative evaluations ordered by time (segment index breaks ties).
std::vector<Violation> audit_collisions(const Trajectory& traj,
                                        const std::vector<LineSegment>& segments,
                                        const RobotParams& params);

// Resamples a solution onto a grid with n_new nodes: states are interpolated
// linearly (quaternions by normalized lerp), inputs resampled as a
// piecewise-constant schedule, the horizon carried over. Used to warm-start
// the higher-resolution re-solve.
DecisionVector resample_solution(const DecisionVector& dv, int n_old,
                                 int n_new);

// Safe hover pose used when the scenario does not configure one: offset from
// the perch point against the approach direction, at z >= z_min + 0.5 m,
// level attitude, zero rates, hover thrust.
RobotState default_recovery_target(const Scenario& scenario);

// Builds the recovery problem: starts at the end of the perching maneuver,
// targets the configured (or default) safe hover, keeps the collision
// segments, and drops the perception objective and constraints.
Scenario make_recovery_scenario(const Scenario& scenario,
                                const RobotState& perch_end);

// Concatenates two finely integrated maneuvers sharing a junction state
// (tolerance 1e-9 per state component). The duplicate junction sample is
// dropped; the time axis stays on the first trajectory's uniform grid.
Trajectory chain(const Trajectory& perch, const Trajectory& recovery);

// Full perching + recovery procedure: solve, integrate at `dt`, audit; on
// audit violations re-solve once at doubled N warm-started from the coarse
// solution; then solve and audit the recovery leg and chain both. `guess`
// overrides the straight-line initial guess for the perching solve.
ManeuverResult generate_maneuver(const Scenario& scenario, double dt = 1e-3,
                                 const DecisionVector* guess = nullptr);

}  // namespace percher

#endif  // PERCHER_PIPELINE_HPP
