#include "decimal.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace resofit::detail {

namespace {

struct Decimal {
    bool negative = false;
    std::string digits; // no leading/trailing zeros; empty means zero
    long exponent = 0;  // value = digits * 10^exponent
};

// Splits a plain decimal token (optionally signed, optional fraction and
// exponent part) into sign/digits/exponent. Returns false on any deviation
// from that grammar.
bool split_decimal(const std::string& token, Decimal& out) {
    std::size_t i = 0;
    const std::size_t n = token.size();
    if (n == 0) return false;
    if (token[i] == '+' || token[i] == '-') {
        out.negative = token[i] == '-';
        ++i;
    }
    std::string digits;
    long frac_len = 0;
    bool any_digit = false;
    while (i < n && std::isdigit(static_cast<unsigned char>(token[i]))) {
        digits += token[i++];
        any_digit = true;
    }
    if (i < n && token[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(token[i]))) {
            digits += token[i++];
            ++frac_len;
            any_digit = true;
        }
    }
    if (!any_digit) return false;
    long exp10 = 0;
    if (i < n && (token[i] == 'e' || token[i] == 'E')) {
        ++i;
        bool neg_exp = false;
        if (i < n && (token[i] == '+' || token[i] == '-')) {
            neg_exp = token[i] == '-';
            ++i;
        }
        if (i >= n) return false;
        long v = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(token[i]))) {
            if (v < 100000000L) v = v * 10 + (token[i] - '0');
            ++i;
        }
        exp10 = neg_exp ? -v : v;
    }
    if (i != n) return false;

    std::size_t first = digits.find_first_not_of('0');
    if (first == std::string::npos) {
        out.digits.clear();
        out.exponent = 0;
        return true;
    }
    std::size_t last = digits.find_last_not_of('0');
    out.exponent = exp10 - frac_len + static_cast<long>(digits.size() - 1 - last);
    out.digits = digits.substr(first, last - first + 1);
    return true;
}

// Canonical positional/scientific rendering of digits * 10^exponent.
std::string render(const Decimal& d) {
    if (d.digits.empty()) return "0";
    std::string out = d.negative ? "-" : "";
    const long n = static_cast<long>(d.digits.size());
    const long sci_exp = d.exponent + n - 1; // exponent of the leading digit
    if (sci_exp >= -4 && sci_exp < 17) {
        if (d.exponent >= 0) {
            out += d.digits;
            out.append(static_cast<std::size_t>(d.exponent), '0');
        } else if (n + d.exponent > 0) {
            out += d.digits.substr(0, n + d.exponent);
            out += '.';
            out += d.digits.substr(n + d.exponent);
        } else {
            out += "0.";
            out.append(static_cast<std::size_t>(-d.exponent - n), '0');
            out += d.digits;
        }
    } else {
        out += d.digits[0];
        if (n > 1) {
            out += '.';
            out += d.digits.substr(1);
        }
        out += 'e';
        out += sci_exp < 0 ? '-' : '+';
        std::string e = std::to_string(sci_exp < 0 ? -sci_exp : sci_exp);
        if (e.size() < 2) e.insert(e.begin(), '0');
        out += e;
    }
    return out;
}

double decimal_to_double(const Decimal& d) {
    if (d.digits.empty()) return d.negative ? -0.0 : 0.0;
    std::string repr = d.negative ? "-" : "";
    repr += d.digits;
    repr += 'e';
    repr += std::to_string(d.exponent);
    return std::strtod(repr.c_str(), nullptr);
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::optional<double> parse_decimal_shifted(const std::string& token, int shift) {
    Decimal d;
    if (!split_decimal(token, d)) return std::nullopt;
    d.exponent += shift;
    return decimal_to_double(d);
}

std::string format_shifted(double v, int shift) {
    Decimal d;
    // %.17g of a finite double always satisfies the decimal grammar.
    if (!split_decimal(format_double(v), d)) return format_double(v);
    d.exponent -= shift;
    return render(d);
}

std::optional<double> parse_number(const std::string& token) {
    if (token.empty()) return std::nullopt;
    const char* begin = token.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + token.size()) return std::nullopt;
    return v;
}

} // namespace resofit::detail
