#ifndef RESOFIT_DECIMAL_HPP
#define RESOFIT_DECIMAL_HPP

#include <optional>
#include <string>

namespace resofit::detail {

// Shortest-fixed formatting used across all emitters: %.17g, which
// round-trips any double exactly through strtod.
std::string format_double(double v);

// Parses `token` as a decimal number and returns the correctly rounded
// double of (token value) * 10^shift. The scaling happens on the decimal
// representation, so it is exact: no double multiply is involved. Returns
// nullopt for tokens that are not plain finite decimal numbers.
std::optional<double> parse_decimal_shifted(const std::string& token, int shift);

// Formats v / 10^shift exactly at the decimal level: v is printed with
// %.17g and the decimal exponent is then lowered by `shift`. Together with
// parse_decimal_shifted this makes unit-scaled serialization lossless.
std::string format_shifted(double v, int shift);

// strtod over the whole token; nullopt if anything trails or it is empty.
std::optional<double> parse_number(const std::string& token);

} // namespace resofit::detail

#endif
