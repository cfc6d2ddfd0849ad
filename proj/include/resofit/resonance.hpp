#ifndef RESOFIT_RESONANCE_HPP
#define RESOFIT_RESONANCE_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "resofit/trace.hpp"

namespace resofit {

/// Single-mode reflection resonator.
///
/// The loaded quality factor q_total combines internal and coupling losses,
/// 1/q_total = 1/q_i + 1/q_c, so q_total <= q_c and the circle radius
/// r = q_total/q_c lies in (0, 1).
struct ResonatorParams {
    double f0_hz = 0.0;
    double q_total = 0.0;
    double q_c = 0.0;

    double radius() const { return q_total / q_c; }
    void validate() const;
};

/// Instrument environment wrapped around the ideal reflection model:
/// cable delay, complex gain, an additive interference background, and
/// per-quadrature Gaussian noise.
struct EnvironmentParams {
    double delay_s = 0.0;
    double amp = 1.0;
    double phase_rad = 0.0;
    double fano_eps = 0.0;
    double fano_phase_rad = 0.0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Equivalent-circuit elements of the lumped resonator.
struct LumpedElements {
    double l_h = 0.0;
    double c1_f = 0.0;
    double c2_f = 0.0;

    void validate() const;
};

/// Ideal normalized reflection coefficient
///   S11(f) = 1 - (2 q_total/q_c) / (1 + 2i q_total (f/f0 - 1)).
/// Far off resonance the value approaches 1 + 0i; the locus over frequency
/// is a circle of radius r = q_total/q_c centered at (1 - r, 0).
std::complex<double> s11_ideal(const ResonatorParams& p, double f_hz);

/// Samples the reflection model through the environment envelope:
///   amp * exp(i(phase - 2*pi*f*delay)) * [S11(f) + fano_eps*exp(i*fano_phase)] + noise.
/// Noise is seeded and reproducible; real and imaginary quadratures draw
/// independent Gaussian deviates. The grid must be strictly increasing.
ComplexTrace synthesize(const ResonatorParams& p, const EnvironmentParams& env,
                        const std::vector<double>& f_grid);

/// Resonance frequency of the equivalent circuit, 1/(2*pi*sqrt(L*(C1+C2))).
double lumped_f0(const LumpedElements& e);

/// Uniform grid of n points over [start, stop], inclusive.
std::vector<double> linspace(double start, double stop, std::size_t n);

} // namespace resofit

#endif
