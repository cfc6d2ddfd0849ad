#include "resofit/resonance.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "resofit/errors.hpp"

namespace resofit {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

void ResonatorParams::validate() const {
    if (!(f0_hz > 0) || !(q_total > 0) || !(q_c > 0))
        throw Error(ErrorCode::domain, "resonance-model",
                    "resonator parameters must be positive");
    if (!(q_total <= q_c))
        throw Error(ErrorCode::domain, "resonance-model",
                    "q_total must not exceed q_c (requires q_i > 0)");
}

void EnvironmentParams::validate() const {
    if (!(amp > 0))
        throw Error(ErrorCode::domain, "resonance-model", "amp must be positive");
    if (fano_eps < 0)
        throw Error(ErrorCode::domain, "resonance-model", "fano_eps must be >= 0");
    if (noise_sigma < 0)
        throw Error(ErrorCode::domain, "resonance-model", "noise_sigma must be >= 0");
}

void LumpedElements::validate() const {
    if (!(l_h > 0) || !(c1_f > 0) || !(c2_f > 0))
        throw Error(ErrorCode::domain, "resonance-model",
                    "inductance and capacitances must be positive");
}

std::complex<double> s11_ideal(const ResonatorParams& p, double f_hz) {
    p.validate();
    if (!(f_hz > 0))
        throw Error(ErrorCode::domain, "resonance-model", "frequency must be positive");
    const std::complex<double> denom(1.0, 2.0 * p.q_total * (f_hz / p.f0_hz - 1.0));
    return 1.0 - (2.0 * p.q_total / p.q_c) / denom;
}

ComplexTrace synthesize(const ResonatorParams& p, const EnvironmentParams& env,
                        const std::vector<double>& f_grid) {
    p.validate();
    env.validate();
    if (f_grid.empty())
        throw Error(ErrorCode::domain, "resonance-model", "empty frequency grid");
    for (std::size_t i = 1; i < f_grid.size(); ++i)
        if (!(f_grid[i] > f_grid[i - 1]))
            throw Error(ErrorCode::domain, "resonance-model",
                        "frequency grid not strictly increasing");

    const std::complex<double> fano =
        env.fano_eps * std::polar(1.0, env.fano_phase_rad);

    ComplexTrace trace;
    trace.frequencies_hz = f_grid;
    trace.samples.reserve(f_grid.size());

    std::mt19937_64 rng(env.seed);
    std::normal_distribution<double> gauss(0.0, env.noise_sigma > 0 ? env.noise_sigma : 1.0);

    for (double f : f_grid) {
        const std::complex<double> envelope =
            env.amp * std::polar(1.0, env.phase_rad - two_pi * f * env.delay_s);
        std::complex<double> s = envelope * (s11_ideal(p, f) + fano);
        if (env.noise_sigma > 0) {
            const double nre = gauss(rng);
            const double nim = gauss(rng);
            s += std::complex<double>(nre, nim);
        }
        trace.samples.push_back(s);
    }
    return trace;
}

double lumped_f0(const LumpedElements& e) {
    e.validate();
    return 1.0 / (two_pi * std::sqrt(e.l_h * (e.c1_f + e.c2_f)));
}

std::vector<double> linspace(double start, double stop, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {start};
    std::vector<double> grid(n);
    const double step = (stop - start) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = start + step * static_cast<double>(i);
    grid.back() = stop;
    return grid;
}

} // namespace resofit
