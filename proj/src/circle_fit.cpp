#include "resofit/circle_fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lm.hpp"
#include "resofit/errors.hpp"
#include "resofit/log.hpp"

namespace resofit {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

using cplx = std::complex<double>;

std::size_t edge_count(std::size_t n) {
    return std::max<std::size_t>(2, n / 10);
}

// Unwraps phases in place: successive values never jump by more than pi.
void unwrap_phases(std::vector<double>& phases) {
    double offset = 0.0;
    for (std::size_t i = 1; i < phases.size(); ++i) {
        const double raw = phases[i] + offset;
        double step = raw - phases[i - 1];
        if (step > std::numbers::pi || step < -std::numbers::pi) {
            const double correction = -two_pi * std::round(step / two_pi);
            offset += correction;
        }
        phases[i] = phases[i] + offset;
    }
}

struct Normalization {
    ComplexTrace trace;
    cplx divisor; // the off-resonant point before division
};

Normalization normalize_impl(const ComplexTrace& trace, double delay_s) {
    trace.validate();
    const std::size_t n = trace.size();
    const std::size_t k = edge_count(n);

    Normalization out;
    out.trace.frequencies_hz = trace.frequencies_hz;
    out.trace.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.trace.samples[i] =
            trace.samples[i] * std::polar(1.0, two_pi * trace.frequencies_hz[i] * delay_s);

    cplx sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += out.trace.samples[i];
    for (std::size_t i = n - k; i < n; ++i) sum += out.trace.samples[i];
    const cplx mean = sum / static_cast<double>(2 * k);
    if (std::abs(mean) < 1e-6)
        throw Error(ErrorCode::fit, "circle-fit",
                    "degenerate normalization: off-resonant magnitude below 1e-6");
    for (cplx& s : out.trace.samples) s /= mean;
    out.divisor = mean;
    return out;
}

} // namespace

double estimate_delay(const ComplexTrace& trace) {
    trace.validate();
    const std::size_t n = trace.size();
    if (n < 20)
        throw Error(ErrorCode::fit, "circle-fit",
                    "trace too short for delay estimation (need >= 20 points)");
    const std::size_t k = edge_count(n);

    // Common slope, separate intercept per edge window.
    double sxx = 0.0, sxy = 0.0;
    double residual_sq = 0.0;
    double max_step_hz = 0.0;
    std::size_t count = 0;

    struct Window {
        std::size_t begin, end;
    };
    const Window windows[2] = {{0, k}, {n - k, n}};
    std::vector<std::vector<double>> window_phases(2);
    for (int w = 0; w < 2; ++w) {
        std::vector<double>& phases = window_phases[w];
        phases.reserve(k);
        for (std::size_t i = windows[w].begin; i < windows[w].end; ++i)
            phases.push_back(std::arg(trace.samples[i]));
        unwrap_phases(phases);

        double mean_f = 0.0, mean_p = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            mean_f += trace.frequencies_hz[windows[w].begin + i];
            mean_p += phases[i];
        }
        mean_f /= static_cast<double>(k);
        mean_p /= static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double df = trace.frequencies_hz[windows[w].begin + i] - mean_f;
            const double dp = phases[i] - mean_p;
            sxx += df * df;
            sxy += df * dp;
        }
        for (std::size_t i = windows[w].begin + 1; i < windows[w].end; ++i)
            max_step_hz = std::max(max_step_hz,
                                   trace.frequencies_hz[i] - trace.frequencies_hz[i - 1]);
        count += k;
    }
    if (!(sxx > 0))
        throw Error(ErrorCode::fit, "circle-fit", "delay estimation: degenerate frequency axis");
    const double slope = sxy / sxx;

    for (int w = 0; w < 2; ++w) {
        double mean_f = 0.0, mean_p = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            mean_f += trace.frequencies_hz[windows[w].begin + i];
            mean_p += window_phases[w][i];
        }
        mean_f /= static_cast<double>(k);
        mean_p /= static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double df = trace.frequencies_hz[windows[w].begin + i] - mean_f;
            const double res = window_phases[w][i] - mean_p - slope * df;
            residual_sq += res * res;
        }
    }
    const double rms = std::sqrt(residual_sq / static_cast<double>(count));
    if (rms > 0.5)
        throw Error(ErrorCode::fit, "circle-fit",
                    "delay estimate unreliable: edge phase residual rms " +
                        std::to_string(rms) + " rad exceeds 0.5 rad");
    if (std::abs(slope) * max_step_hz > std::numbers::pi)
        throw Error(ErrorCode::fit, "circle-fit",
                    "phase unwrap ambiguity: fitted slope implies more than pi per point");

    return -slope / two_pi;
}

ComplexTrace normalize(const ComplexTrace& trace, double delay_s) {
    return normalize_impl(trace, delay_s).trace;
}

CircleParams fit_circle(const std::vector<cplx>& points) {
    const std::size_t n = points.size();
    if (n < 3)
        throw Error(ErrorCode::fit, "circle-fit", "circle fit needs at least 3 points");

    double mean_x = 0.0, mean_y = 0.0;
    for (const cplx& p : points) {
        mean_x += p.real();
        mean_y += p.imag();
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double mxx = 0, myy = 0, mxy = 0, mxz = 0, myz = 0, mzz = 0;
    for (const cplx& p : points) {
        const double x = p.real() - mean_x;
        const double y = p.imag() - mean_y;
        const double z = x * x + y * y;
        mxx += x * x;
        myy += y * y;
        mxy += x * y;
        mxz += x * z;
        myz += y * z;
        mzz += z * z;
    }
    mxx /= n; myy /= n; mxy /= n; mxz /= n; myz /= n; mzz /= n;

    // Collinear input has a rank-deficient scatter matrix.
    const double tr = mxx + myy;
    const double det = mxx * myy - mxy * mxy;
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double eig_min = (tr - disc) / 2.0;
    if (!(tr > 0) || eig_min <= 1e-12 * tr)
        throw Error(ErrorCode::fit, "circle-fit", "degenerate circle: points are collinear");

    // Taubin fit: Newton iteration on the characteristic polynomial.
    const double mz = mxx + myy;
    const double cov_xy = det;
    const double var_z = mzz - mz * mz;
    const double a3 = 4.0 * mz;
    const double a2 = -3.0 * mz * mz - mzz;
    const double a1 = var_z * mz + 4.0 * cov_xy * mz - mxz * mxz - myz * myz;
    const double a0 = mxz * (mxz * myy - myz * mxy) + myz * (myz * mxx - mxz * mxy) -
                      var_z * cov_xy;
    const double a22 = a2 + a2;
    const double a33 = a3 + a3 + a3;

    double x = 0.0, y = a0;
    for (int iter = 0; iter < 99; ++iter) {
        const double dy = a1 + x * (a22 + a33 * x);
        const double x_new = x - y / dy;
        if (x_new == x || !std::isfinite(x_new)) break;
        const double y_new = a0 + x_new * (a1 + x_new * (a2 + x_new * a3));
        if (std::abs(y_new) >= std::abs(y)) break;
        x = x_new;
        y = y_new;
    }

    const double denom = x * x - x * mz + cov_xy;
    if (denom == 0.0 || !std::isfinite(denom))
        throw Error(ErrorCode::fit, "circle-fit", "degenerate circle fit");
    const double xc = (mxz * (myy - x) - myz * mxy) / denom / 2.0;
    const double yc = (myz * (mxx - x) - mxz * mxy) / denom / 2.0;
    const double radius = std::sqrt(xc * xc + yc * yc + mz);

    CircleParams out;
    out.center = cplx(xc + mean_x, yc + mean_y);
    out.radius = radius;

    double rss = 0.0;
    for (const cplx& p : points) {
        const double d = std::abs(p - out.center) - radius;
        rss += d * d;
    }
    out.rms = std::sqrt(rss / static_cast<double>(n));
    return out;
}

PhaseFit fit_phase(const ComplexTrace& trace, cplx center) {
    trace.validate();
    const std::size_t n = trace.size();
    const double f_min = trace.frequencies_hz.front();
    const double f_max = trace.frequencies_hz.back();

    std::vector<double> phases(n);
    for (std::size_t i = 0; i < n; ++i) phases[i] = std::arg(trace.samples[i] - center);
    unwrap_phases(phases);

    // The resonance sweeps the angle seen from the circle center by nearly
    // a full turn; without that roll there is nothing to fit.
    const double swing = phases.front() - phases.back();
    if (std::abs(swing) < 1.0)
        throw Error(ErrorCode::fit, "circle-fit",
                    "phase fit did not converge: no resonance phase roll detected");

    // A frequency-mirrored trace winds the opposite way; fit its reflection.
    const double sign = swing >= 0 ? 1.0 : -1.0;
    if (sign < 0)
        for (double& p : phases) p = -p;

    // Initial guesses: f0 from the mid-phase crossing, q from the +-pi/2
    // deviation points (separated by one linewidth).
    const double phi_mid = (phases.front() + phases.back()) / 2.0;
    std::size_t mid_idx = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if ((phases[i - 1] - phi_mid) * (phases[i] - phi_mid) <= 0) {
            mid_idx = i;
            break;
        }
    }
    const double f0_init = trace.frequencies_hz[mid_idx];

    double f_lo = f_min, f_hi = f_max;
    for (std::size_t i = mid_idx; i > 0; --i) {
        if (phases[i] - phi_mid >= std::numbers::pi / 2.0) {
            f_lo = trace.frequencies_hz[i];
            break;
        }
    }
    for (std::size_t i = mid_idx; i < n; ++i) {
        if (phi_mid - phases[i] >= std::numbers::pi / 2.0) {
            f_hi = trace.frequencies_hz[i];
            break;
        }
    }
    double q_init = f_hi > f_lo ? f0_init / (f_hi - f_lo) : 10.0 * f0_init / (f_max - f_min);
    if (!(q_init > 0) || !std::isfinite(q_init)) q_init = 10.0 * f0_init / (f_max - f_min);

    // Least squares on theta(f) = theta0 + 2 atan(2 q (1 - f/f0)),
    // parameters (f0, ln q, theta0) with an analytic Jacobian.
    const auto model_residual =
        [&](const Eigen::VectorXd& p) -> std::optional<Eigen::VectorXd> {
        const double f0 = p[0];
        const double q = std::exp(p[1]);
        const double theta0 = p[2];
        if (!(f0 > 0) || !std::isfinite(q)) return std::nullopt;
        Eigen::VectorXd r(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = 2.0 * q * (1.0 - trace.frequencies_hz[i] / f0);
            r[i] = theta0 + 2.0 * std::atan(u) - phases[i];
        }
        return r;
    };
    const auto model_jacobian = [&](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
        const double f0 = p[0];
        const double q = std::exp(p[1]);
        Eigen::MatrixXd jac(n, 3);
        for (std::size_t i = 0; i < n; ++i) {
            const double f = trace.frequencies_hz[i];
            const double u = 2.0 * q * (1.0 - f / f0);
            const double g = 2.0 / (1.0 + u * u);
            jac(i, 0) = g * 2.0 * q * f / (f0 * f0);
            jac(i, 1) = g * u;
            jac(i, 2) = 1.0;
        }
        return jac;
    };

    Eigen::VectorXd start(3);
    start << f0_init, std::log(q_init), phi_mid;
    const auto outcome = detail::lm_minimize(model_residual, model_jacobian, start);
    if (!outcome.converged)
        throw Error(ErrorCode::fit, "circle-fit",
                    "phase fit did not converge within the iteration cap");
    const double f0 = outcome.params[0];
    const double q_total = std::exp(outcome.params[1]);
    if (!(f0 >= f_min) || !(f0 <= f_max))
        throw Error(ErrorCode::fit, "circle-fit", "phase fit: f0 outside the trace span");

    PhaseFit fit;
    fit.f0_hz = f0;
    fit.q_total = q_total;
    fit.theta0_rad = sign * outcome.params[2];
    return fit;
}

double fwhm(double f0_hz, double q_total) {
    if (!(f0_hz > 0) || !(q_total > 0))
        throw Error(ErrorCode::domain, "circle-fit", "fwhm requires positive f0 and q_total");
    return f0_hz / q_total;
}

CircleFitResult fit_reflection(const ComplexTrace& trace) {
    trace.validate();
    const std::size_t n = trace.size();

    // Seed pipeline.
    const double delay_seed = estimate_delay(trace);
    const Normalization norm = normalize_impl(trace, delay_seed);
    const CircleParams circle = fit_circle(norm.trace.samples);
    if (!(circle.radius > 0) || circle.radius >= 1.0)
        throw Error(ErrorCode::fit, "circle-fit",
                    "fitted circle radius outside (0, 1): " + std::to_string(circle.radius));
    const PhaseFit phase = fit_phase(norm.trace, circle.center);

    const double amp_seed = std::abs(norm.divisor);
    const double phase_seed = std::arg(norm.divisor);

    // Full-model refinement against the raw trace,
    // params = (f0, ln q_total, ln q_c, delay, ln amp, phase).
    const auto model_residual =
        [&](const Eigen::VectorXd& p) -> std::optional<Eigen::VectorXd> {
        const double f0 = p[0];
        const double q = std::exp(p[1]);
        const double qc = std::exp(p[2]);
        const double delay = p[3];
        const double amp = std::exp(p[4]);
        const double phi = p[5];
        if (!(f0 > 0) || !std::isfinite(q) || !std::isfinite(qc) || !std::isfinite(amp))
            return std::nullopt;
        Eigen::VectorXd r(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double f = trace.frequencies_hz[i];
            const cplx denom(1.0, 2.0 * q * (f / f0 - 1.0));
            const cplx s = 1.0 - (2.0 * q / qc) / denom;
            const cplx env = amp * std::polar(1.0, phi - two_pi * f * delay);
            const cplx diff = env * s - trace.samples[i];
            r[2 * i] = diff.real();
            r[2 * i + 1] = diff.imag();
        }
        return r;
    };
    const auto model_jacobian = [&](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
        const double f0 = p[0];
        const double q = std::exp(p[1]);
        const double qc = std::exp(p[2]);
        const double delay = p[3];
        const double amp = std::exp(p[4]);
        const double phi = p[5];
        Eigen::MatrixXd jac(2 * n, 6);
        for (std::size_t i = 0; i < n; ++i) {
            const double f = trace.frequencies_hz[i];
            const cplx denom(1.0, 2.0 * q * (f / f0 - 1.0));
            const cplx denom2 = denom * denom;
            const double two_r = 2.0 * q / qc;
            const cplx s = 1.0 - two_r / denom;
            const cplx env = amp * std::polar(1.0, phi - two_pi * f * delay);
            const cplx m = env * s;

            const cplx d_f0 = env * (two_r * cplx(0.0, -2.0 * q * f / (f0 * f0)) / denom2);
            const cplx d_lnq = env * (-two_r / denom2);
            const cplx d_lnqc = env * (two_r / denom);
            const cplx d_delay = cplx(0.0, -two_pi * f) * m;
            const cplx d_lnamp = m;
            const cplx d_phi = cplx(0.0, 1.0) * m;

            const cplx cols[6] = {d_f0, d_lnq, d_lnqc, d_delay, d_lnamp, d_phi};
            for (int c = 0; c < 6; ++c) {
                jac(2 * i, c) = cols[c].real();
                jac(2 * i + 1, c) = cols[c].imag();
            }
        }
        return jac;
    };

    Eigen::VectorXd seed(6);
    seed << phase.f0_hz, std::log(phase.q_total), std::log(phase.q_total / circle.radius),
        delay_seed, std::log(amp_seed), phase_seed;
    const double seed_cost = model_residual(seed)->squaredNorm();

    const auto refined = detail::lm_minimize(model_residual, model_jacobian, seed);
    const double r_refined = std::exp(refined.params[1] - refined.params[2]);

    bool use_refined = refined.converged && refined.cost <= seed_cost && r_refined > 0.0 &&
                       r_refined < 1.0 && refined.params[0] >= trace.frequencies_hz.front() &&
                       refined.params[0] <= trace.frequencies_hz.back();
    if (!use_refined)
        log::warn("circle-fit: refinement rejected (worse than seed or invalid); "
                  "returning the seeded fit");

    CircleFitResult result;
    result.n_points = n;
    result.refined = use_refined;
    double cost = 0.0;
    if (use_refined) {
        result.f0_hz = refined.params[0];
        result.q_total = std::exp(refined.params[1]);
        result.r = r_refined;
        result.delay_s = refined.params[3];
        result.amp = std::exp(refined.params[4]);
        result.phase_rad = refined.params[5];
        cost = refined.cost;
    } else {
        result.f0_hz = phase.f0_hz;
        result.q_total = phase.q_total;
        result.r = circle.radius;
        result.delay_s = delay_seed;
        result.amp = amp_seed;
        result.phase_rad = phase_seed;
        cost = seed_cost;
    }
    result.q_c = result.q_total / result.r;
    result.q_i = result.q_total / (1.0 - result.r);
    result.fwhm_hz = result.f0_hz / result.q_total;
    result.rms_residual = std::sqrt(cost / static_cast<double>(n));

    if (!(result.q_total > 0) || !(result.q_c > 0) || !(result.q_i > 0) ||
        !(result.r > 0) || !(result.r < 1))
        throw Error(ErrorCode::fit, "circle-fit", "fit produced invalid quality factors");
    return result;
}

FanoEnvelope fano_envelope(const ComplexTrace& trace, double eps, int n_phases) {
    if (eps < 0)
        throw Error(ErrorCode::domain, "circle-fit", "fano envelope: eps must be >= 0");
    if (n_phases < 8)
        throw Error(ErrorCode::domain, "circle-fit", "fano envelope: n_phases must be >= 8");

    const CircleFitResult point = fit_reflection(trace);
    FanoEnvelope envelope{point.q_i, point.q_i, point.q_i, eps};
    if (eps == 0.0) return envelope;

    // Calibrate with the fitted environment, then scan the unknown
    // interference phase.
    ComplexTrace calibrated;
    calibrated.frequencies_hz = trace.frequencies_hz;
    calibrated.samples.resize(trace.size());
    const cplx gain = std::polar(point.amp, point.phase_rad);
    for (std::size_t i = 0; i < trace.size(); ++i)
        calibrated.samples[i] =
            trace.samples[i] *
            std::polar(1.0, two_pi * trace.frequencies_hz[i] * point.delay_s) / gain;

    for (int k = 0; k < n_phases; ++k) {
        const double phi_k = two_pi * static_cast<double>(k) / n_phases;
        ComplexTrace shifted = calibrated;
        const cplx background = eps * std::polar(1.0, phi_k);
        for (cplx& s : shifted.samples) s -= background;
        try {
            const CircleFitResult refit = fit_reflection(shifted);
            envelope.q_i_lo = std::min(envelope.q_i_lo, refit.q_i);
            envelope.q_i_hi = std::max(envelope.q_i_hi, refit.q_i);
        } catch (const Error& e) {
            throw Error(ErrorCode::fit, "circle-fit",
                        "fano envelope refit failed at phase " + std::to_string(phi_k) +
                            " rad: " + e.message());
        }
    }
    return envelope;
}

} // namespace resofit
