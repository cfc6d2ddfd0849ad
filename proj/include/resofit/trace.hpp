#ifndef RESOFIT_TRACE_HPP
#define RESOFIT_TRACE_HPP

#include <complex>
#include <string>
#include <vector>

namespace resofit {

/// A frequency-ordered sequence of complex reflection samples.
///
/// Invariants (checked by validate()): at least 3 points, strictly increasing
/// frequency axis in hertz, equal-length axes, all values finite.
struct ComplexTrace {
    std::vector<double> frequencies_hz;
    std::vector<std::complex<double>> samples;

    std::size_t size() const { return frequencies_hz.size(); }

    /// Throws Error(domain) if any invariant is violated.
    void validate(const std::string& context = "trace") const;
};

/// One measured trace plus its acquisition metadata.
struct SweepRecord {
    ComplexTrace trace;
    double source_power_dbm = 0.0;   // instrument output power, dBm
    double line_attenuation_db = 0.0; // total input-line attenuation, dB (>= 0)
    double temperature_k = 0.0;       // stage temperature, K (> 0)
    std::string label;

    void validate() const;
};

} // namespace resofit

#endif
