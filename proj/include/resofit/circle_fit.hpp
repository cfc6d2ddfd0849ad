#ifndef RESOFIT_CIRCLE_FIT_HPP
#define RESOFIT_CIRCLE_FIT_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "resofit/trace.hpp"

namespace resofit {

/// Calibrated reflection-fit output.
///
/// The quality factors satisfy the algebraic identities
///   1/q_i = 1/q_total - 1/q_c,   q_i = q_total/(1 - r),   fwhm = f0/q_total
/// with r = q_total/q_c in (0, 1); q_i, q_c and fwhm are derived from
/// (f0, q_total, r) so those identities hold to round-off.
struct CircleFitResult {
    double f0_hz = 0.0;
    double q_total = 0.0;
    double q_c = 0.0;
    double q_i = 0.0;
    double r = 0.0;
    double delay_s = 0.0;
    double amp = 1.0;
    double phase_rad = 0.0;
    double rms_residual = 0.0; // rms of |model - data| from the accepted fit
    double fwhm_hz = 0.0;
    std::size_t n_points = 0;
    bool refined = true; // false when the nonlinear refinement was rejected
};

/// Bounds on q_i under an assumed interference background of amplitude eps.
struct FanoEnvelope {
    double q_i_point = 0.0;
    double q_i_lo = 0.0;
    double q_i_hi = 0.0;
    double eps = 0.0;
};

/// Estimates cable delay from the least-squares slope of unwrapped phase vs
/// frequency over the outer 10 % of points on each edge (common slope,
/// separate intercepts); delay = -slope/(2*pi). Requires >= 20 points and
/// edge windows that look linear in phase (rms residual below 0.5 rad).
double estimate_delay(const ComplexTrace& trace);

/// Removes the delay (multiplies by exp(+2*pi*i*f*delay)) and divides by the
/// off-resonant point, the mean of the outer 10 % of samples on each edge,
/// so that the off-resonant point maps to 1 + 0i.
ComplexTrace normalize(const ComplexTrace& trace, double delay_s);

struct CircleParams {
    std::complex<double> center;
    double radius = 0.0;
    double rms = 0.0; // rms geometric distance of the points to the circle
};

/// Taubin algebraic circle fit. Requires >= 3 non-collinear points.
CircleParams fit_circle(const std::vector<std::complex<double>>& points);

struct PhaseFit {
    double f0_hz = 0.0;
    double q_total = 0.0;
    double theta0_rad = 0.0;
};

/// Fits the angle of (sample - center) on a normalized trace to
///   theta(f) = theta0 + 2*arctan(2*q_total*(1 - f/f0)).
PhaseFit fit_phase(const ComplexTrace& trace, std::complex<double> center);

/// Full calibrated reflection fit:
/// delay estimate -> normalization -> circle fit -> phase fit, then a
/// damped least-squares refinement of (f0, q_total, q_c, delay, amp, phase)
/// against the raw trace. If the refinement cannot improve on the seeded
/// fit, the seed is returned with `refined = false`.
CircleFitResult fit_reflection(const ComplexTrace& trace);

/// Full width at half maximum of the resonance dip, f0/q_total.
double fwhm(double f0_hz, double q_total);

/// Brute-force interference bound: for each phase phi_k = 2*pi*k/n_phases
/// the background eps*exp(i*phi_k) is subtracted from the calibrated trace
/// and the fit repeated; the envelope is the min/max q_i over all phases
/// together with the unperturbed point estimate.
FanoEnvelope fano_envelope(const ComplexTrace& trace, double eps, int n_phases);

} // namespace resofit

#endif
