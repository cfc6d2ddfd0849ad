#include "lm.hpp"

#include <cmath>
#include <limits>

namespace resofit::detail {

namespace {

Eigen::MatrixXd numeric_jacobian(const ResidualFn& residual, const Eigen::VectorXd& p,
                                 std::size_t n_residuals, double fd_step) {
    Eigen::MatrixXd jac(n_residuals, p.size());
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        const double h = fd_step * std::max(1.0, std::abs(p[j]));
        Eigen::VectorXd lo = p, hi = p;
        lo[j] -= h;
        hi[j] += h;
        const auto r_lo = residual(lo);
        const auto r_hi = residual(hi);
        if (r_lo && r_hi) {
            jac.col(j) = (*r_hi - *r_lo) / (2.0 * h);
        } else {
            // One-sided fallback at a domain edge.
            const auto r_center = residual(p);
            if (r_hi && r_center)
                jac.col(j) = (*r_hi - *r_center) / h;
            else if (r_lo && r_center)
                jac.col(j) = (*r_center - *r_lo) / h;
            else
                jac.col(j).setZero();
        }
    }
    return jac;
}

} // namespace

LmOutcome lm_minimize(const ResidualFn& residual, const JacobianFn& jacobian,
                      const Eigen::VectorXd& start, const LmOptions& options) {
    LmOutcome out;
    out.params = start;

    auto r_opt = residual(start);
    if (!r_opt) return out; // start outside the domain: report non-convergence
    Eigen::VectorXd r = *r_opt;
    double cost = r.squaredNorm();
    double lambda = options.initial_lambda;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        out.iterations = iter + 1;

        const Eigen::MatrixXd jac =
            jacobian ? jacobian(out.params)
                     : numeric_jacobian(residual, out.params, r.size(), options.fd_step);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;

        bool stepped = false;
        for (int attempt = 0; attempt < 16; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            for (Eigen::Index k = 0; k < damped.rows(); ++k) {
                const double d = jtj(k, k);
                damped(k, k) = d + lambda * (d > 0 ? d : 1.0);
            }
            const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
            if (!step.allFinite()) {
                lambda *= 8.0;
                continue;
            }
            const Eigen::VectorXd trial = out.params + step;
            const auto r_trial = residual(trial);
            if (!r_trial) {
                lambda *= 8.0;
                continue;
            }
            const double trial_cost = r_trial->squaredNorm();
            if (trial_cost <= cost) {
                const double rel_step =
                    (step.cwiseQuotient(trial.cwiseAbs().cwiseMax(1e-30))).cwiseAbs().maxCoeff();
                const double rel_drop = (cost - trial_cost) / std::max(cost, 1e-300);
                out.params = trial;
                r = *r_trial;
                cost = trial_cost;
                lambda = std::max(lambda / 3.0, 1e-14);
                stepped = true;
                if (rel_step < options.step_tolerance || rel_drop < options.cost_tolerance ||
                    cost == 0.0) {
                    out.converged = true;
                }
                break;
            }
            lambda *= 8.0;
        }

        if (out.converged) break;
        if (!stepped) {
            // No acceptable step even with heavy damping: local minimum.
            out.converged = true;
            break;
        }
    }

    out.cost = cost;
    return out;
}

LmOutcome lm_minimize(const ResidualFn& residual, const Eigen::VectorXd& start,
                      const LmOptions& options) {
    return lm_minimize(residual, nullptr, start, options);
}

} // namespace resofit::detail
