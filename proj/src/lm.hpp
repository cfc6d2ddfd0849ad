#ifndef RESOFIT_LM_HPP
#define RESOFIT_LM_HPP

#include <functional>
#include <optional>

#include <Eigen/Dense>

namespace resofit::detail {

// residual(p) returns the residual vector, or nullopt when p is outside the
// model domain (the step is then rejected). jacobian(p), when provided,
// returns the residual Jacobian; otherwise central differences are used.
using ResidualFn = std::function<std::optional<Eigen::VectorXd>(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct LmOptions {
    int max_iterations = 200;
    double step_tolerance = 1e-10;  // relative parameter step
    double cost_tolerance = 1e-12;  // relative cost change
    double initial_lambda = 1e-3;
    double fd_step = 1e-7; // central-difference step for the numeric Jacobian
};

struct LmOutcome {
    Eigen::VectorXd params;
    double cost = 0.0; // sum of squared residuals
    int iterations = 0;
    bool converged = false;
};

// Marquardt-damped Gauss-Newton: solves (J^T J + lambda diag(J^T J)) dp = -J^T r,
// shrinking lambda on accepted steps and growing it on rejected ones.
LmOutcome lm_minimize(const ResidualFn& residual, const JacobianFn& jacobian,
                      const Eigen::VectorXd& start, const LmOptions& options = {});

// Convenience overload with a central-difference Jacobian.
LmOutcome lm_minimize(const ResidualFn& residual, const Eigen::VectorXd& start,
                      const LmOptions& options = {});

} // namespace resofit::detail

#endif
