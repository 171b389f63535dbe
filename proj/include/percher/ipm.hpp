#ifndef PERCHER_IPM_HPP
#define PERCHER_IPM_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>
#include <vector>

namespace percher {

using SpTriplet = Eigen::Triplet<double>;

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Smooth NLP in the form
//   min f(z)   s.t.  cE(z) = 0,  cI(z) >= 0.
// The objective is expected to provide a positive-semidefinite (Gauss-Newton
// style) Hessian approximation; the solver adds Levenberg regularization.
class IpmProblem {
 public:
  virtual ~IpmProblem() = default;
  virtual int num_vars() const = 0;
  virtual int num_eq() const = 0;
  virtual int num_ineq() const = 0;

  // grad/hessian may be null when only the value is needed (line search).
  virtual double eval_objective(const Eigen::VectorXd& z, Eigen::VectorXd* grad,
                                std::vector<SpTriplet>* hessian) const = 0;
  virtual void eval_eq(const Eigen::VectorXd& z, Eigen::VectorXd& c,
                       std::vector<SpTriplet>* jac) const = 0;
  virtual void eval_ineq(const Eigen::VectorXd& z, Eigen::VectorXd& c,
                         std::vector<SpTriplet>* jac) const = 0;

  virtual std::string eq_name(int i) const { return "eq[" + std::to_string(i) + "]"; }
  virtual std::string ineq_name(int i) const { return "ineq[" + std::to_string(i) + "]"; }

  // Adds the constraint-curvature part of the Lagrangian Hessian,
  // -sum_i yE_i d2cE_i(z) - sum_i yI_i d2cI_i(z), as triplets. Problems with
  // linear constraints can keep the default no-op; nonlinear problems that
  // omit it fall back to pure Gauss-Newton steps, which slows convergence in
  // curved feasible manifolds but stays correct.
  virtual void add_constraint_curvature(const Eigen::VectorXd& z,
                                        const Eigen::VectorXd& y_eq,
                                        const Eigen::VectorXd& y_ineq,
                                        std::vector<SpTriplet>* hess) const {
    (void)z;
    (void)y_eq;
    (void)y_ineq;
    (void)hess;
  }
};

struct IpmOptions {
  int max_iterations = 5000;
  double tol_stationarity = 1e-6;
  double tol_equality = 1e-8;
  double tol_complementarity = 1e-7;
  double mu_init = 0.1;
  double mu_shrink = 0.2;     // per-stage barrier reduction factor
  double mu_min = 1e-11;
  double tau = 0.995;         // fraction-to-boundary
  double reg_init = 1e-8;     // Levenberg diagonal floor on the Hessian
  bool verbose = false;
};

enum class IpmStatus { Converged, MaxIterations, NumericalFailure };

struct IpmIterRecord {
  int iter = 0;
  double mu = 0.0;
  double objective = 0.0;
  double merit_before = 0.0;
  double merit_after = 0.0;
  double stationarity = 0.0;
  double eq_violation = 0.0;
  double complementarity = 0.0;  // ||t o w||_inf (mu-free)
  double alpha = 0.0;
  bool barrier_reduced = false;  // mu was reduced after this iterate
};

struct IpmResult {
  IpmStatus status = IpmStatus::MaxIterations;
  Eigen::VectorXd z;
  Eigen::VectorXd mult_eq;
  Eigen::VectorXd mult_ineq;
  Eigen::VectorXd slack;  // interior slack t with cI(z) - t = 0 at the end
  int iterations = 0;
  double objective = 0.0;
  double stationarity = 0.0;
  double eq_violation = 0.0;
  double complementarity = 0.0;
  double wall_time_s = 0.0;
  std::vector<IpmIterRecord> trace;
};

IpmResult ipm_solve(const IpmProblem& problem, const Eigen::VectorXd& z0,
                    const IpmOptions& opts = {});

}  // namespace percher

#endif  // PERCHER_IPM_HPP
