#include "resofit/quasiparticle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include "lm.hpp"
#include "resofit/constants.hpp"
#include "resofit/errors.hpp"
#include "resofit/log.hpp"

namespace resofit {

namespace {

namespace consts = resofit::constants;

const bool gsl_handler_disabled = [] {
    gsl_set_error_handler_off();
    return true;
}();

double bessel_k0_scaled(double x) {
    gsl_sf_result result;
    if (gsl_sf_bessel_K0_scaled_e(x, &result) != GSL_SUCCESS)
        throw Error(ErrorCode::domain, "quasiparticle-fit",
                    "Bessel K0 evaluation failed at x = " + std::to_string(x));
    return result.val;
}

double bessel_i0_scaled(double x) {
    gsl_sf_result result;
    if (gsl_sf_bessel_I0_scaled_e(x, &result) != GSL_SUCCESS)
        throw Error(ErrorCode::domain, "quasiparticle-fit",
                    "Bessel I0 evaluation failed at x = " + std::to_string(x));
    return result.val;
}

} // namespace

void QuasiparticleParams::validate() const {
    if (!(t_c_k > 0) || !std::isfinite(t_c_k))
        throw Error(ErrorCode::domain, "quasiparticle-fit", "t_c must be positive");
    if (!(alpha > 0) || !(alpha <= 1))
        throw Error(ErrorCode::domain, "quasiparticle-fit", "alpha must lie in (0, 1]");
    if (!(a_qp > 0) || !std::isfinite(a_qp))
        throw Error(ErrorCode::domain, "quasiparticle-fit", "a_qp must be positive");
    if (!(q_other > 0) || !std::isfinite(q_other))
        throw Error(ErrorCode::domain, "quasiparticle-fit", "q_other must be positive");
}

double bcs_gap(double t_k, double t_c_k) {
    if (!(t_c_k > 0))
        throw Error(ErrorCode::domain, "quasiparticle-fit", "t_c must be positive");
    if (!(t_k > 0) || !(t_k < t_c_k))
        throw Error(ErrorCode::domain, "quasiparticle-fit",
                    "temperature must lie in (0, t_c)");
    const double delta0 = 1.764 * consts::boltzmann_j_per_k * t_c_k;
    return delta0 * std::tanh(1.74 * std::sqrt(t_c_k / t_k - 1.0));
}

MbSigma mb_sigma(double t_k, double f_hz, double t_c_k) {
    if (!(f_hz > 0))
        throw Error(ErrorCode::domain, "quasiparticle-fit", "frequency must be positive");
    const double delta = bcs_gap(t_k, t_c_k);
    const double kbt = consts::boltzmann_j_per_k * t_k;
    const double hf = consts::planck_j_s * f_hz;

    if (hf > 0.5 * delta) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true))
            log::warn("mb_sigma: photon energy is not small against the pair-breaking "
                      "energy; the low-frequency approximation degrades");
    }

    const double xi = hf / (2.0 * kbt);
    const double boltz = std::exp(-delta / kbt); // underflows to 0 at low temperature

    // sinh(xi)*K0(xi) and exp(-xi)*I0(xi) via exponentially scaled Bessel
    // functions; no overflow for xi >> 1.
    const double sinh_k0 = 0.5 * (1.0 - std::exp(-2.0 * xi)) * bessel_k0_scaled(xi);
    const double exp_i0 = bessel_i0_scaled(xi);

    MbSigma out;
    out.s1 = (4.0 * delta / hf) * boltz * sinh_k0;
    out.s2 = (std::numbers::pi * delta / hf) *
             (1.0 - std::sqrt(2.0 * std::numbers::pi * kbt / delta) * boltz -
              2.0 * boltz * exp_i0);
    return out;
}

std::vector<ModelPoint> model_curves(const QuasiparticleParams& p, double f0_hz,
                                     const std::vector<double>& t_grid) {
    p.validate();
    if (t_grid.empty())
        throw Error(ErrorCode::domain, "quasiparticle-fit", "empty temperature grid");
    const double t_ref = *std::min_element(t_grid.begin(), t_grid.end());

    const MbSigma ref = mb_sigma(t_ref, f0_hz, p.t_c_k);
    if (!(ref.s2 > 0))
        throw Error(ErrorCode::domain, "quasiparticle-fit",
                    "sigma2 non-positive at the base temperature; model out of its "
                    "validity range");

    std::vector<ModelPoint> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        const MbSigma s = t == t_ref ? ref : mb_sigma(t, f0_hz, p.t_c_k);
        if (!(s.s2 > 0))
            throw Error(ErrorCode::domain, "quasiparticle-fit",
                        "sigma2 non-positive at T = " + std::to_string(t) +
                            " K; model out of its validity range");
        ModelPoint point;
        point.delta_f_hz = f0_hz * (p.alpha / 2.0) * (s.s2 - ref.s2) / ref.s2;
        point.q_i = 1.0 / (p.a_qp * p.alpha * s.s1 / s.s2 + 1.0 / p.q_other);
        out.push_back(point);
    }
    return out;
}

QuasiparticleParams initial_guess(const std::vector<TempSweepPoint>& points) {
    if (points.empty())
        throw Error(ErrorCode::domain, "quasiparticle-fit", "no sweep points");

    std::vector<TempSweepPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(),
              [](const TempSweepPoint& a, const TempSweepPoint& b) {
                  return a.temperature_k < b.temperature_k;
              });
    const double q_base = sorted.front().q_i;
    const double t_max = sorted.back().temperature_k;

    double t_c = 0.0;
    for (const TempSweepPoint& p : sorted) {
        if (p.q_i <= q_base / 2.0) {
            t_c = 1.1 * p.temperature_k;
            break;
        }
    }
    // The half-q temperature sits far below t_c whenever quasi-particle loss
    // dominates, so the heuristic can land inside the data range where the
    // model is not evaluable; fall back and clamp above the data.
    if (t_c <= 1.05 * t_max) t_c = 6.0;
    if (t_c <= 1.05 * t_max) t_c = 1.2 * t_max;

    QuasiparticleParams init;
    init.t_c_k = t_c;
    init.alpha = 1e-3;
    init.a_qp = 100.0;
    init.q_other = q_base;
    return init;
}

QuasiparticleFit joint_fit(const std::vector<TempSweepPoint>& points, double f0_hz,
                           const QuasiparticleParams& init, double t_cutoff_factor) {
    init.validate();
    if (!(f0_hz > 0))
        throw Error(ErrorCode::domain, "quasiparticle-fit", "f0 must be positive");
    if (!(t_cutoff_factor > 0))
        throw Error(ErrorCode::domain, "quasiparticle-fit", "cutoff factor must be positive");

    // Points above the model-validity cutoff (a fraction of the t_c
    // estimate) are excluded from the fit.
    std::vector<TempSweepPoint> data;
    for (const TempSweepPoint& p : points)
        if (p.temperature_k <= t_cutoff_factor * init.t_c_k) data.push_back(p);

    if (data.size() < 8)
        throw Error(ErrorCode::fit, "quasiparticle-fit",
                    "insufficient points below the cutoff (need >= 8, have " +
                        std::to_string(data.size()) + ")");
    double t_min = data.front().temperature_k, t_max = t_min;
    for (const TempSweepPoint& p : data) {
        if (!(p.temperature_k > 0) || !(p.q_i > 0))
            throw Error(ErrorCode::domain, "quasiparticle-fit",
                        "sweep points need positive temperature and q_i");
        t_min = std::min(t_min, p.temperature_k);
        t_max = std::max(t_max, p.temperature_k);
    }
    if (!(t_max / t_min >= 3.0))
        throw Error(ErrorCode::fit, "quasiparticle-fit",
                    "insufficient temperature span (need a factor >= 3)");

    std::vector<double> temps(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) temps[i] = data[i].temperature_k;

    double scale_f = 0.0;
    for (const TempSweepPoint& p : data) scale_f = std::max(scale_f, std::abs(p.delta_f_hz));
    if (!(scale_f > 0)) scale_f = 1.0;

    const std::size_t n = data.size();
    const auto residual = [&](const Eigen::VectorXd& x) -> std::optional<Eigen::VectorXd> {
        QuasiparticleParams p;
        p.t_c_k = std::exp(x[0]);
        p.alpha = std::exp(x[1]);
        p.a_qp = std::exp(x[2]);
        p.q_other = std::exp(x[3]);
        if (!(p.t_c_k > t_max) || !(p.alpha <= 1.0)) return std::nullopt;
        std::vector<ModelPoint> model;
        try {
            model = model_curves(p, f0_hz, temps);
        } catch (const Error&) {
            return std::nullopt;
        }
        Eigen::VectorXd r(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = (model[i].delta_f_hz - data[i].delta_f_hz) / scale_f;
            r[n + i] = std::log(model[i].q_i) - std::log(data[i].q_i);
        }
        return r;
    };

    // Walk the t_c estimate upward until the model is evaluable over the
    // whole data range.
    Eigen::VectorXd start(4);
    double t_c_start = init.t_c_k;
    bool feasible = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
        start << std::log(t_c_start), std::log(init.alpha), std::log(init.a_qp),
            std::log(init.q_other);
        if (residual(start)) {
            feasible = true;
            break;
        }
        t_c_start *= 1.3;
    }
    if (!feasible)
        throw Error(ErrorCode::fit, "quasiparticle-fit",
                    "no feasible starting point for the joint fit");

    const auto outcome = detail::lm_minimize(residual, start);
    if (!outcome.converged)
        throw Error(ErrorCode::fit, "quasiparticle-fit",
                    "joint fit did not converge within the iteration cap");

    QuasiparticleFit fit;
    fit.params.t_c_k = std::exp(outcome.params[0]);
    fit.params.alpha = std::exp(outcome.params[1]);
    fit.params.a_qp = std::exp(outcome.params[2]);
    fit.params.q_other = std::exp(outcome.params[3]);
    fit.iterations = outcome.iterations;
    if (fit.params.alpha > 1.0 + 1e-12)
        throw Error(ErrorCode::fit, "quasiparticle-fit",
                    "parameter at bound: fitted alpha exceeds 1");
    fit.params.validate();

    const auto final_residual = residual(outcome.params);
    double rss_f = 0.0, rss_q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rf = (*final_residual)[i] * scale_f;
        const double rq = (*final_residual)[n + i];
        rss_f += rf * rf;
        rss_q += rq * rq;
    }
    fit.rms_delta_f_hz = std::sqrt(rss_f / static_cast<double>(n));
    fit.rms_log_q_i = std::sqrt(rss_q / static_cast<double>(n));
    return fit;
}

} // namespace resofit
