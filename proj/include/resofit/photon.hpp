#ifndef RESOFIT_PHOTON_HPP
#define RESOFIT_PHOTON_HPP

#include <string>
#include <vector>

#include "resofit/trace.hpp"

namespace resofit {

/// One entry of a Q_i vs photon-number curve.
struct PowerPoint {
    double n_bar = 0.0;
    double q_i = 0.0;
    double q_i_lo = 0.0;
    double q_i_hi = 0.0;
    double source_power_dbm = 0.0;
    double p_in_w = 0.0;
};

/// On-chip input power in watts: 1e-3 * 10^((P_dBm - attenuation_dB)/10).
double input_power(double source_power_dbm, double line_attenuation_db);

/// Mean photon number stored in the resonator at input power p_in_w:
///   n = 4 * q_total^2 / (q_c * hbar * (2*pi*f0)^2) * p_in.
double mean_photon_number(double q_total, double q_c, double f0_hz, double p_in_w);

struct PowerSweep {
    std::vector<PowerPoint> points;       // sorted ascending in n_bar
    std::vector<std::string> failures;    // per-record fit failures, by label
};

/// Fits every record, converts its metadata to photon number using the
/// record's own fitted (q_total, q_c, f0), and attaches a Fano envelope of
/// amplitude fano_eps. Failures are collected per record; an all-failed
/// batch throws. `workers` = 0 uses the hardware concurrency.
PowerSweep assemble_power_sweep(const std::vector<SweepRecord>& records, double fano_eps,
                                int n_phases = 16, unsigned workers = 0);

} // namespace resofit

#endif
