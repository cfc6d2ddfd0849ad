#include "resofit/trace.hpp"

#include <cmath>

#include "resofit/errors.hpp"

namespace resofit {

void ComplexTrace::validate(const std::string& context) const {
    if (frequencies_hz.size() != samples.size())
        throw Error(ErrorCode::domain, "trace-io",
                    context + ": frequency and sample arrays differ in length");
    if (frequencies_hz.size() < 3)
        throw Error(ErrorCode::domain, "trace-io",
                    context + ": fewer than 3 points");
    for (std::size_t i = 0; i < frequencies_hz.size(); ++i) {
        if (!std::isfinite(frequencies_hz[i]) || !std::isfinite(samples[i].real()) ||
            !std::isfinite(samples[i].imag()))
            throw Error(ErrorCode::domain, "trace-io",
                        context + ": non-finite value at index " + std::to_string(i));
        if (i > 0 && !(frequencies_hz[i] > frequencies_hz[i - 1]))
            throw Error(ErrorCode::domain, "trace-io",
                        context + ": frequency axis not strictly increasing at index " +
                            std::to_string(i));
    }
}

void SweepRecord::validate() const {
    trace.validate("record '" + label + "'");
    if (line_attenuation_db < 0)
        throw Error(ErrorCode::domain, "trace-io",
                    "record '" + label + "': negative attenuation");
    if (!(temperature_k > 0))
        throw Error(ErrorCode::domain, "trace-io",
                    "record '" + label + "': temperature must be positive");
}

} // namespace resofit
