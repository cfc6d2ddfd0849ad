#ifndef RESOFIT_TOUCHSTONE_HPP
#define RESOFIT_TOUCHSTONE_HPP

#include <string>

#include "resofit/trace.hpp"

namespace resofit {

enum class FrequencyUnit { hz, khz, mhz, ghz };
enum class SampleFormat { ri, ma, db };

/// Parses a Touchstone v1 one-port document: `!` comments, exactly one
/// option line `# <HZ|KHZ|MHZ|GHZ> S <RI|MA|DB> R <resistance>`, then data
/// rows of three numbers. Frequencies are converted to hertz at the decimal
/// level, so powers-of-ten unit scaling is exact. Errors carry line numbers.
ComplexTrace parse_touchstone(const std::string& text);

/// Serializes a one-port trace. RI output and the frequency column are
/// lossless (17 significant digits, exact decimal unit scaling); MA/DB
/// output quantizes magnitude to 12 significant digits and angles/dB values
/// to 11 decimal places, which keeps serialize -> parse -> serialize
/// byte-identical. DB serialization rejects exact-zero samples.
std::string serialize_touchstone(const ComplexTrace& trace, FrequencyUnit unit,
                                 SampleFormat format, double resistance_ohm = 50.0);

const char* frequency_unit_token(FrequencyUnit unit);
const char* sample_format_token(SampleFormat format);

} // namespace resofit

#endif
