#ifndef PERCHER_NLP_HPP
#define PERCHER_NLP_HPP

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "percher/constraints.hpp"
#include "percher/dynamics.hpp"
#include "percher/geometry.hpp"
#include "percher/ipm.hpp"

namespace percher {

struct InfeasibleStartError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Weights {
  double thrust = 1e-3;        // running, per rotor thrust integral
  double omega = 1e-2;         // running, angular velocity
  double reproj = 1e-5;        // running, line reprojection error
  double terminal_pos = 200.0;
  double terminal_att = 200.0;
  double terminal_vel = 20.0;
  double terminal_omega = 20.0;
  double perception_decay_rate = 4.605170185988091;  // beta = ln(100)
  double soft_penalty = 1.0;   // slack weight for softened h_lc / h_sv
};

struct RecoveryConfig {
  bool has_target_position = false;
  Vec3 target_position = Vec3::Zero();  // used when has_target_position
  double t_min = 0.5;
  double t_max = 5.0;
};

struct Scenario {
  RobotParams robot;
  CameraModel camera;
  std::vector<LineSegment> segments;
  int objective_segment = 0;
  RobotState x_init;
  RobotState x_perch;
  double t_min = 0.5;
  double t_max = 5.0;
  double z_min = 0.0;
  int n_nodes = 30;
  int shooting_substeps = 1;  // RK4 steps per node inside the shooting map
  Weights weights;
  bool perception_enabled = true;
  RecoveryConfig recovery;
  IpmOptions solver;

  void validate() const;
};

enum class NlpMode { Perching, Recovery };

struct DecisionVector {
  std::vector<RobotState> states;    // N + 1
  std::vector<Vec4> inputs;          // N
  double horizon_T = 1.0;
  Eigen::VectorXd slacks;            // 2 (N + 1) when perception is active
};

enum class SolveStatus { Converged, MaxIterations, Infeasible };

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  double kkt_stationarity = 0.0;
  double kkt_equality = 0.0;
  double kkt_complementarity = 0.0;
  double objective = 0.0;
  double horizon_T = 0.0;
  double wall_time_s = 0.0;
  std::vector<IpmIterRecord> trace;
};

std::string to_string(SolveStatus s);

// Running cost residual [gamma T/N + u T^2/(2N^2) (4), omega (3), decayed
// reprojection (1)] for node k.
Eigen::Matrix<double, 8, 1> running_cost_terms(const RobotState& x,
                                               const Vec4& u, double T, int k,
                                               const Scenario& scenario,
                                               bool perception_active);

// Terminal residual [p~, q~, v~, w~] against x_perch. The orientation error
// is the imaginary part of q_perch^-1 (x) q_N, flipped into the hemisphere
// with non-negative real part.
Eigen::Matrix<double, 12, 1> terminal_cost_terms(const RobotState& x,
                                                 const Scenario& scenario);

// Multiple-shooting transcription of the perching problem as an IpmProblem.
class PerchingNlp : public IpmProblem {
 public:
  PerchingNlp(const Scenario& scenario, NlpMode mode);

  int num_vars() const override;
  int num_eq() const override;
  int num_ineq() const override;
  double eval_objective(const Eigen::VectorXd& z, Eigen::VectorXd* grad,
                        std::vector<SpTriplet>* hessian) const override;
  void eval_eq(const Eigen::VectorXd& z, Eigen::VectorXd& c,
               std::vector<SpTriplet>* jac) const override;
  void eval_ineq(const Eigen::VectorXd& z, Eigen::VectorXd& c,
                 std::vector<SpTriplet>* jac) const override;
  std::string eq_name(int i) const override;
  std::string ineq_name(int i) const override;
  void add_constraint_curvature(const Eigen::VectorXd& z,
                                const Eigen::VectorXd& y_eq,
                                const Eigen::VectorXd& y_ineq,
                                std::vector<SpTriplet>* hess) const override;

  const Scenario& scenario() const { return scn_; }
  NlpMode mode() const { return mode_; }
  bool perception_active() const { return perception_; }
  int n_nodes() const { return N_; }

  Eigen::VectorXd pack(const DecisionVector& dv) const;
  DecisionVector unpack(const Eigen::VectorXd& z) const;

  // Variable layout.
  int idx_theta() const { return 0; }
  int idx_state(int k) const { return 1 + kStateDim * k; }
  int idx_input(int k) const { return 1 + kStateDim * (N_ + 1) + kInputDim * k; }
  int idx_slack(int k, int which) const {  // which: 0 = h_lc, 1 = h_sv
    return slack_base_ + 2 * k + which;
  }
  double theta_to_T(double theta) const {
    return scn_.t_min + theta * (scn_.t_max - scn_.t_min);
  }

 private:
  Scenario scn_;
  NlpMode mode_;
  bool perception_ = false;
  int N_ = 0;
  int slack_base_ = 0;
  int num_vars_ = 0;
  int num_ineq_ = 0;
  std::vector<double> ca_scale_;  // per segment
  double lc_scale_ = 1.0;
  double sv_scale_ = 1.0;
  double u_scale_ = 1.0;
};

PerchingNlp build_problem(const Scenario& scenario, NlpMode mode);
DecisionVector initial_guess(const Scenario& scenario, NlpMode mode);
// Sizes and fills dv->slacks from the perception constraint values at
// dv->states, mildly padded into the interior.
void seed_perception_slacks(const Scenario& scenario, DecisionVector* dv);
std::pair<DecisionVector, SolveReport> solve(const PerchingNlp& problem,
                                             const DecisionVector& guess);

}  // namespace percher

#endif  // PERCHER_NLP_HPP
