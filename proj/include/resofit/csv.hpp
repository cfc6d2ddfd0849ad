#ifndef RESOFIT_CSV_HPP
#define RESOFIT_CSV_HPP

#include <string>
#include <vector>

#include "resofit/quasiparticle.hpp"
#include "resofit/trace.hpp"

namespace resofit {

struct CsvTrace {
    ComplexTrace trace;
    bool reordered = false; // rows arrived out of frequency order and were sorted
};

/// Parses a trace CSV with header columns freq_hz, re, im (any order,
/// case-insensitive). Rows out of frequency order are sorted and flagged;
/// duplicate frequencies are an error.
CsvTrace parse_csv(const std::string& text);

/// Parses a temperature-sweep CSV with header columns
/// temperature_k, delta_f_hz, q_i (any order, case-insensitive).
std::vector<TempSweepPoint> parse_temperature_csv(const std::string& text);

} // namespace resofit

#endif
