#include "resofit/photon.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

#include "resofit/circle_fit.hpp"
#include "resofit/constants.hpp"
#include "resofit/errors.hpp"
#include "resofit/log.hpp"

namespace resofit {

double input_power(double source_power_dbm, double line_attenuation_db) {
    if (line_attenuation_db < 0)
        throw Error(ErrorCode::domain, "photon-calibration", "negative attenuation");
    return 1e-3 * std::pow(10.0, (source_power_dbm - line_attenuation_db) / 10.0);
}

double mean_photon_number(double q_total, double q_c, double f0_hz, double p_in_w) {
    if (!(q_total > 0) || !(q_c > 0) || !(f0_hz > 0) || !(p_in_w > 0))
        throw Error(ErrorCode::domain, "photon-calibration",
                    "photon number requires positive q_total, q_c, f0 and p_in");
    if (!(q_total <= q_c))
        throw Error(ErrorCode::domain, "photon-calibration", "q_total must not exceed q_c");
    const double omega = 2.0 * std::numbers::pi * f0_hz;
    return 4.0 * q_total * q_total / (q_c * constants::hbar_j_s * omega * omega) * p_in_w;
}

PowerSweep assemble_power_sweep(const std::vector<SweepRecord>& records, double fano_eps,
                                int n_phases, unsigned workers) {
    if (records.empty())
        throw Error(ErrorCode::domain, "photon-calibration", "empty record list");
    if (fano_eps < 0)
        throw Error(ErrorCode::domain, "photon-calibration", "fano_eps must be >= 0");

    const std::size_t n = records.size();
    std::vector<std::optional<PowerPoint>> slots(n);
    std::vector<std::optional<std::string>> errors(n);

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n));

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            const SweepRecord& record = records[i];
            try {
                record.validate();
                PowerPoint point;
                point.source_power_dbm = record.source_power_dbm;
                point.p_in_w = input_power(record.source_power_dbm, record.line_attenuation_db);
                if (fano_eps > 0) {
                    const FanoEnvelope env = fano_envelope(record.trace, fano_eps, n_phases);
                    // fano_envelope's point estimate is the plain fit of the trace.
                    const CircleFitResult fit = fit_reflection(record.trace);
                    point.q_i = env.q_i_point;
                    point.q_i_lo = env.q_i_lo;
                    point.q_i_hi = env.q_i_hi;
                    point.n_bar = mean_photon_number(fit.q_total, fit.q_c, fit.f0_hz,
                                                     point.p_in_w);
                } else {
                    const CircleFitResult fit = fit_reflection(record.trace);
                    point.q_i = fit.q_i;
                    point.q_i_lo = fit.q_i;
                    point.q_i_hi = fit.q_i;
                    point.n_bar = mean_photon_number(fit.q_total, fit.q_c, fit.f0_hz,
                                                     point.p_in_w);
                }
                slots[i] = point;
            } catch (const Error& e) {
                errors[i] = record.label + ": " + e.what();
            } catch (const std::exception& e) {
                errors[i] = record.label + ": " + e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    PowerSweep sweep;
    for (std::size_t i = 0; i < n; ++i) {
        if (slots[i])
            sweep.points.push_back(*slots[i]);
        else if (errors[i]) {
            log::warn("power sweep: " + *errors[i]);
            sweep.failures.push_back(*errors[i]);
        }
    }
    if (sweep.points.empty())
        throw Error(ErrorCode::fit, "photon-calibration",
                    "all records failed to fit; first failure: " + sweep.failures.front());

    std::stable_sort(sweep.points.begin(), sweep.points.end(),
                     [](const PowerPoint& a, const PowerPoint& b) { return a.n_bar < b.n_bar; });
    return sweep;
}

} // namespace resofit
