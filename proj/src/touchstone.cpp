#include "resofit/touchstone.hpp"

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "decimal.hpp"
#include "resofit/errors.hpp"

namespace resofit {

namespace {

constexpr double deg_to_rad = std::numbers::pi / 180.0;
constexpr double rad_to_deg = 180.0 / std::numbers::pi;

[[noreturn]] void fail(std::size_t line_no, const std::string& message) {
    throw Error(ErrorCode::parse, "trace-io",
                "touchstone line " + std::to_string(line_no) + ": " + message);
}

std::string to_upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) fields.push_back(token);
    return fields;
}

int unit_shift(FrequencyUnit unit) {
    switch (unit) {
        case FrequencyUnit::hz: return 0;
        case FrequencyUnit::khz: return 3;
        case FrequencyUnit::mhz: return 6;
        case FrequencyUnit::ghz: return 9;
    }
    return 0;
}

std::optional<FrequencyUnit> unit_from_token(const std::string& token) {
    const std::string u = to_upper(token);
    if (u == "HZ") return FrequencyUnit::hz;
    if (u == "KHZ") return FrequencyUnit::khz;
    if (u == "MHZ") return FrequencyUnit::mhz;
    if (u == "GHZ") return FrequencyUnit::ghz;
    return std::nullopt;
}

std::optional<SampleFormat> format_from_token(const std::string& token) {
    const std::string f = to_upper(token);
    if (f == "RI") return SampleFormat::ri;
    if (f == "MA") return SampleFormat::ma;
    if (f == "DB") return SampleFormat::db;
    return std::nullopt;
}

std::complex<double> decode_sample(SampleFormat format, double a, double b) {
    switch (format) {
        case SampleFormat::ri:
            return {a, b};
        case SampleFormat::ma: {
            const double theta = b * deg_to_rad;
            return {a * std::cos(theta), a * std::sin(theta)};
        }
        case SampleFormat::db: {
            const double mag = std::pow(10.0, a / 20.0);
            const double theta = b * deg_to_rad;
            return {mag * std::cos(theta), mag * std::sin(theta)};
        }
    }
    return {};
}

std::string format_fixed(double v, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, v);
    return buf;
}

std::string format_sig12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

const char* frequency_unit_token(FrequencyUnit unit) {
    switch (unit) {
        case FrequencyUnit::hz: return "HZ";
        case FrequencyUnit::khz: return "KHZ";
        case FrequencyUnit::mhz: return "MHZ";
        case FrequencyUnit::ghz: return "GHZ";
    }
    return "HZ";
}

const char* sample_format_token(SampleFormat format) {
    switch (format) {
        case SampleFormat::ri: return "RI";
        case SampleFormat::ma: return "MA";
        case SampleFormat::db: return "DB";
    }
    return "RI";
}

ComplexTrace parse_touchstone(const std::string& text) {
    std::istringstream stream(text);
    std::string raw_line;
    std::size_t line_no = 0;

    bool have_option = false;
    FrequencyUnit unit = FrequencyUnit::hz;
    SampleFormat format = SampleFormat::ri;
    ComplexTrace trace;

    while (std::getline(stream, raw_line)) {
        ++line_no;
        if (!raw_line.empty() && raw_line.back() == '\r') raw_line.pop_back();
        const std::size_t bang = raw_line.find('!');
        std::string line = bang == std::string::npos ? raw_line : raw_line.substr(0, bang);

        const std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;

        if (line[first] == '#') {
            if (have_option) fail(line_no, "duplicate option line");
            const auto fields = split_fields(line.substr(first + 1));
            if (fields.size() < 3) fail(line_no, "option line needs '<unit> S <format>'");
            const auto parsed_unit = unit_from_token(fields[0]);
            if (!parsed_unit)
                fail(line_no, "unsupported frequency unit '" + fields[0] + "'");
            if (to_upper(fields[1]) != "S")
                fail(line_no, "only S-parameter data is supported, got '" + fields[1] + "'");
            const auto parsed_format = format_from_token(fields[2]);
            if (!parsed_format)
                fail(line_no, "unsupported format token '" + fields[2] + "'");
            if (fields.size() >= 4) {
                if (to_upper(fields[3]) != "R" || fields.size() != 5 ||
                    !detail::parse_number(fields[4]))
                    fail(line_no, "malformed resistance clause");
            }
            unit = *parsed_unit;
            format = *parsed_format;
            have_option = true;
            continue;
        }

        // Data row.
        if (!have_option) fail(line_no, "data row before option line");
        const auto fields = split_fields(line);
        if (fields.size() != 3)
            fail(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
        const auto freq = detail::parse_decimal_shifted(fields[0], unit_shift(unit));
        if (!freq) fail(line_no, "invalid frequency '" + fields[0] + "'");
        const auto a = detail::parse_number(fields[1]);
        const auto b = detail::parse_number(fields[2]);
        if (!a || !b) fail(line_no, "invalid sample value");
        if (!std::isfinite(*freq) || !std::isfinite(*a) || !std::isfinite(*b))
            fail(line_no, "non-finite value");
        if (!trace.frequencies_hz.empty() && !(*freq > trace.frequencies_hz.back()))
            fail(line_no, "frequency axis not strictly increasing");
        trace.frequencies_hz.push_back(*freq);
        trace.samples.push_back(decode_sample(format, *a, *b));
    }

    if (!have_option)
        throw Error(ErrorCode::parse, "trace-io", "touchstone: missing option line");
    if (trace.size() < 3)
        throw Error(ErrorCode::parse, "trace-io",
                    "touchstone: fewer than 3 data rows (" + std::to_string(trace.size()) + ")");
    trace.validate("touchstone");
    return trace;
}

std::string serialize_touchstone(const ComplexTrace& trace, FrequencyUnit unit,
                                 SampleFormat format, double resistance_ohm) {
    trace.validate("serialize");
    std::string out;
    out.reserve(trace.size() * 48 + 64);
    out += "# ";
    out += frequency_unit_token(unit);
    out += " S ";
    out += sample_format_token(format);
    out += " R ";
    out += detail::format_double(resistance_ohm);
    out += '\n';

    const int shift = unit_shift(unit);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const std::complex<double> z = trace.samples[i];
        out += detail::format_shifted(trace.frequencies_hz[i], shift);
        out += ' ';
        switch (format) {
            case SampleFormat::ri:
                out += detail::format_double(z.real());
                out += ' ';
                out += detail::format_double(z.imag());
                break;
            case SampleFormat::ma:
                out += format_sig12(std::abs(z));
                out += ' ';
                out += format_fixed(std::atan2(z.imag(), z.real()) * rad_to_deg, 11);
                break;
            case SampleFormat::db: {
                const double mag = std::abs(z);
                if (mag == 0.0)
                    throw Error(ErrorCode::domain, "trace-io",
                                "cannot serialize a zero sample in DB format");
                out += format_fixed(20.0 * std::log10(mag), 11);
                out += ' ';
                out += format_fixed(std::atan2(z.imag(), z.real()) * rad_to_deg, 11);
                break;
            }
        }
        out += '\n';
    }
    return out;
}

} // namespace resofit
