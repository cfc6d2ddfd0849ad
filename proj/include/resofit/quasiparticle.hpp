#ifndef RESOFIT_QUASIPARTICLE_HPP
#define RESOFIT_QUASIPARTICLE_HPP

#include <vector>

namespace resofit {

/// Parameters of the thermal quasi-particle surface-impedance model.
struct QuasiparticleParams {
    double t_c_k = 0.0;   // critical temperature, K
    double alpha = 0.0;   // kinetic inductance fraction, in (0, 1]
    double a_qp = 0.0;    // quasi-particle loss scale
    double q_other = 0.0; // temperature-independent residual quality factor

    void validate() const;
};

/// One point of a temperature sweep: stage temperature, frequency shift
/// relative to base temperature, and fitted internal quality factor.
struct TempSweepPoint {
    double temperature_k = 0.0;
    double delta_f_hz = 0.0;
    double q_i = 0.0;
};

/// BCS gap with the tanh interpolation
///   Delta(T) = Delta0 * tanh(1.74*sqrt(t_c/t - 1)),  Delta0 = 1.764*k_B*t_c.
/// Valid for 0 < t < t_c; throws outside.
double bcs_gap(double t_k, double t_c_k);

struct MbSigma {
    double s1 = 0.0; // sigma1/sigma_n, dissipative part
    double s2 = 0.0; // sigma2/sigma_n, reactive part
};

/// Low-frequency, low-temperature quasi-particle conductivity ratios.
/// With xi = h*f/(2*k_B*t) and Delta = bcs_gap(t, t_c):
///   s1 = (4*Delta/(h*f)) * exp(-Delta/(k_B*t)) * sinh(xi) * K0(xi)
///   s2 = (pi*Delta/(h*f)) * [1 - sqrt(2*pi*k_B*t/Delta)*exp(-Delta/(k_B*t))
///                              - 2*exp(-Delta/(k_B*t))*exp(-xi)*I0(xi)]
/// Bessel factors are evaluated in exponentially scaled form, so there is
/// no overflow at low temperature. Warns when h*f is not small against the
/// pair-breaking energy 2*Delta. The approximation loses validity as t
/// approaches t_c, where s2 can turn negative.
MbSigma mb_sigma(double t_k, double f_hz, double t_c_k);

struct ModelPoint {
    double delta_f_hz = 0.0;
    double q_i = 0.0;
};

/// Model curves on a temperature grid, anchored at t_ref = min(t_grid):
///   delta_f(T) = f0*(alpha/2)*(s2(T) - s2(t_ref))/s2(t_ref)
///   1/q_i(T)   = a_qp*alpha*s1(T)/s2(T) + 1/q_other
/// delta_f(t_ref) is exactly zero. Throws if any s2(T) is non-positive
/// (the approximation has left its validity domain).
std::vector<ModelPoint> model_curves(const QuasiparticleParams& p, double f0_hz,
                                     const std::vector<double>& t_grid);

/// Data-driven starting point: t_c from where q_i halves (clamped above the
/// data range, 6 K fallback), alpha = 1e-3, a_qp = 100, q_other = base q_i.
QuasiparticleParams initial_guess(const std::vector<TempSweepPoint>& points);

struct QuasiparticleFit {
    QuasiparticleParams params;
    double rms_delta_f_hz = 0.0; // per-channel rms, frequency shift (Hz)
    double rms_log_q_i = 0.0;    // per-channel rms, log q_i
    int iterations = 0;
};

/// Joint damped least-squares fit of delta_f(T) and q_i(T). Residuals stack
/// (delta_f_model - delta_f_data)/scale_f with scale_f = max |delta_f_data|
/// and log(q_i_model) - log(q_i_data); all four parameters are fitted in
/// log space. Points above t_cutoff_factor * init.t_c_k are excluded. After
/// the cutoff there must be >= 8 points spanning at least a factor 3 in
/// temperature.
QuasiparticleFit joint_fit(const std::vector<TempSweepPoint>& points, double f0_hz,
                           const QuasiparticleParams& init, double t_cutoff_factor = 0.9);

} // namespace resofit

#endif
