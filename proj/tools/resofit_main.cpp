#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resofit/circle_fit.hpp"
#include "resofit/csv.hpp"
#include "resofit/emit.hpp"
#include "resofit/errors.hpp"
#include "resofit/manifest.hpp"
#include "resofit/photon.hpp"
#include "resofit/quasiparticle.hpp"
#include "resofit/resonance.hpp"
#include "resofit/touchstone.hpp"

namespace {

using resofit::EmitFormat;
using resofit::Error;
using resofit::ErrorCode;

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::config: return 2;
        case ErrorCode::parse: return 3;
        case ErrorCode::fit: return 4;
        case ErrorCode::io: return 5;
        case ErrorCode::domain: return 2;
    }
    return 1;
}

// Accepts a flat JSON object as a per-subcommand config file; command-line
// flags take precedence over file values.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json doc;
        try {
            input >> doc;
        } catch (const nlohmann::json::parse_error& e) {
            throw CLI::FileError(std::string("config: ") + e.what());
        }
        if (!doc.is_object()) throw CLI::FileError("config: top-level value must be an object");
        std::vector<CLI::ConfigItem> items;
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            CLI::ConfigItem item;
            item.name = it.key();
            const auto& value = it.value();
            if (value.is_string())
                item.inputs = {value.get<std::string>()};
            else if (value.is_boolean())
                item.inputs = {value.get<bool>() ? "true" : "false"};
            else if (value.is_number())
                item.inputs = {value.dump()};
            else
                throw CLI::FileError("config: value of '" + it.key() + "' must be a scalar");
            items.push_back(item);
        }
        return items;
    }
};

void add_config_option(CLI::App* sub) {
    sub->set_config("--config", "", "JSON config file; explicit flags override file values");
    sub->config_formatter(std::make_shared<JsonConfig>());
}

EmitFormat parse_format(const std::string& name) {
    if (name == "json") return EmitFormat::json;
    if (name == "csv") return EmitFormat::csv;
    throw Error(ErrorCode::config, "cli", "unknown output format '" + name + "'");
}

void deliver(const std::string& document, const std::string& output_path) {
    if (output_path.empty()) {
        std::fputs(document.c_str(), stdout);
        return;
    }
    resofit::write_text_file(output_path, document);
}

resofit::ComplexTrace load_trace(const std::string& path, const std::string& format) {
    const std::string text = resofit::read_text_file(path);
    std::string kind = format;
    if (kind == "auto") {
        const std::string ext = std::filesystem::path(path).extension().string();
        kind = ext == ".csv" ? "csv" : "touchstone";
    }
    if (kind == "touchstone") return resofit::parse_touchstone(text);
    if (kind == "csv") return resofit::parse_csv(text).trace;
    throw Error(ErrorCode::config, "cli", "unknown input format '" + kind + "'");
}

struct FitArgs {
    std::string input, input_format = "auto", output, format = "json";
};

struct SweepArgs {
    std::string manifest, output, format = "csv";
    double eps = 0.0;
    int n_phases = 16;
    unsigned workers = 0;
};

struct TempfitArgs {
    std::string input, output, format = "json";
    double f0_hz = 0.0;
    double tc_cutoff = 0.9;
};

struct SynthArgs {
    double f0_hz = 0.0, q_total = 0.0, q_c = 0.0;
    double delay_s = 0.0, amp = 1.0, phase_rad = 0.0;
    double fano_eps = 0.0, fano_phase_rad = 0.0, noise_sigma = 0.0;
    std::uint64_t seed = 0;
    double f_start_hz = 0.0, f_stop_hz = 0.0, span_linewidths = 10.0;
    std::size_t n_points = 1001;
    std::string unit = "hz", sformat = "ri", output;
};

struct FanoArgs {
    std::string input, input_format = "auto", output, format = "json";
    double eps = 0.0;
    int n_phases = 16;
};

struct LumpedArgs {
    double l_h = 0.0, c1_f = 0.0, c2_f = 0.0;
    std::string output, format = "json";
};

resofit::FrequencyUnit parse_unit(const std::string& name) {
    if (name == "hz") return resofit::FrequencyUnit::hz;
    if (name == "khz") return resofit::FrequencyUnit::khz;
    if (name == "mhz") return resofit::FrequencyUnit::mhz;
    if (name == "ghz") return resofit::FrequencyUnit::ghz;
    throw Error(ErrorCode::config, "cli", "unknown frequency unit '" + name + "'");
}

resofit::SampleFormat parse_sformat(const std::string& name) {
    if (name == "ri") return resofit::SampleFormat::ri;
    if (name == "ma") return resofit::SampleFormat::ma;
    if (name == "db") return resofit::SampleFormat::db;
    throw Error(ErrorCode::config, "cli", "unknown sample format '" + name + "'");
}

int run_synth(const SynthArgs& args) {
    resofit::ResonatorParams params{args.f0_hz, args.q_total, args.q_c};
    params.validate();
    resofit::EnvironmentParams env;
    env.delay_s = args.delay_s;
    env.amp = args.amp;
    env.phase_rad = args.phase_rad;
    env.fano_eps = args.fano_eps;
    env.fano_phase_rad = args.fano_phase_rad;
    env.noise_sigma = args.noise_sigma;
    env.seed = args.seed;

    double f_start = args.f_start_hz, f_stop = args.f_stop_hz;
    if (f_start <= 0 || f_stop <= 0) {
        const double half_span = 0.5 * args.span_linewidths * args.f0_hz / args.q_total;
        f_start = args.f0_hz - half_span;
        f_stop = args.f0_hz + half_span;
    }
    if (!(f_stop > f_start) || args.n_points < 3)
        throw Error(ErrorCode::config, "cli", "synth: need f_stop > f_start and >= 3 points");

    const auto grid = resofit::linspace(f_start, f_stop, args.n_points);
    const auto trace = resofit::synthesize(params, env, grid);
    deliver(resofit::serialize_touchstone(trace, parse_unit(args.unit),
                                          parse_sformat(args.sformat)),
            args.output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"resofit: reflection-resonator fitting and calibration toolkit"};
    app.require_subcommand(1);

    FitArgs fit_args;
    CLI::App* fit = app.add_subcommand(
        "fit", "Fit a single reflection trace and report the quality factors");
    fit->add_option("--input", fit_args.input, "Input trace file (.s1p Touchstone or .csv)")
        ->required();
    fit->add_option("--input-format", fit_args.input_format,
                    "Input kind: auto|touchstone|csv (auto uses the extension)");
    fit->add_option("--output", fit_args.output, "Output path (default: stdout)");
    fit->add_option("--format", fit_args.format, "Report format: json|csv");
    add_config_option(fit);

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Fit every record of a manifest and report Q_i vs photon number");
    sweep->add_option("--manifest", sweep_args.manifest, "Manifest JSON path")->required();
    sweep->add_option("--eps", sweep_args.eps,
                      "Fano background amplitude (dimensionless, 0 disables the envelope)");
    sweep->add_option("--n-phases", sweep_args.n_phases,
                      "Number of interference phases scanned (>= 8)");
    sweep->add_option("--workers", sweep_args.workers,
                      "Worker threads (0 = hardware concurrency)");
    sweep->add_option("--output", sweep_args.output, "Output path (default: stdout)");
    sweep->add_option("--format", sweep_args.format, "Report format: json|csv");
    add_config_option(sweep);

    TempfitArgs temp_args;
    CLI::App* tempfit = app.add_subcommand(
        "tempfit", "Joint thermal quasi-particle fit of a temperature sweep CSV");
    tempfit->add_option("--input", temp_args.input,
                        "CSV with columns temperature_k,delta_f_hz,q_i")
        ->required();
    tempfit->add_option("--f0", temp_args.f0_hz, "Resonance frequency in Hz")->required();
    tempfit->add_option("--tc-cutoff", temp_args.tc_cutoff,
                        "Drop points above this fraction of the t_c estimate");
    tempfit->add_option("--output", temp_args.output, "Output path (default: stdout)");
    tempfit->add_option("--format", temp_args.format, "Report format: json|csv");
    add_config_option(tempfit);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand(
        "synth", "Synthesize a reflection trace and write it as Touchstone");
    synth->add_option("--f0", synth_args.f0_hz, "Resonance frequency in Hz")->required();
    synth->add_option("--q-total", synth_args.q_total, "Loaded quality factor")->required();
    synth->add_option("--q-c", synth_args.q_c, "Coupling quality factor")->required();
    synth->add_option("--delay", synth_args.delay_s, "Cable delay in seconds");
    synth->add_option("--amp", synth_args.amp, "Off-resonant amplitude scale");
    synth->add_option("--phase", synth_args.phase_rad, "Global phase offset in radians");
    synth->add_option("--fano-eps", synth_args.fano_eps,
                      "Interference background amplitude (dimensionless)");
    synth->add_option("--fano-phase", synth_args.fano_phase_rad,
                      "Interference background phase in radians");
    synth->add_option("--noise-sigma", synth_args.noise_sigma,
                      "Per-quadrature Gaussian noise standard deviation");
    synth->add_option("--seed", synth_args.seed, "Noise seed");
    synth->add_option("--f-start", synth_args.f_start_hz, "Grid start in Hz (optional)");
    synth->add_option("--f-stop", synth_args.f_stop_hz, "Grid stop in Hz (optional)");
    synth->add_option("--span-linewidths", synth_args.span_linewidths,
                      "Grid span in linewidths when --f-start/--f-stop are not given");
    synth->add_option("--n-points", synth_args.n_points, "Number of grid points");
    synth->add_option("--unit", synth_args.unit, "Frequency unit: hz|khz|mhz|ghz");
    synth->add_option("--sformat", synth_args.sformat, "Sample format: ri|ma|db");
    synth->add_option("--output", synth_args.output, "Output path (default: stdout)");
    add_config_option(synth);

    FanoArgs fano_args;
    CLI::App* fano = app.add_subcommand(
        "fano", "Compute the Fano uncertainty envelope of a fitted trace");
    fano->add_option("--input", fano_args.input, "Input trace file")->required();
    fano->add_option("--input-format", fano_args.input_format,
                     "Input kind: auto|touchstone|csv");
    fano->add_option("--eps", fano_args.eps,
                     "Assumed interference background amplitude (dimensionless)")
        ->required();
    fano->add_option("--n-phases", fano_args.n_phases,
                     "Number of interference phases scanned (>= 8)");
    fano->add_option("--output", fano_args.output, "Output path (default: stdout)");
    fano->add_option("--format", fano_args.format, "Report format: json|csv");
    add_config_option(fano);

    LumpedArgs lumped_args;
    CLI::App* lumped = app.add_subcommand(
        "lumped", "Resonance frequency of the lumped equivalent circuit");
    lumped->add_option("--l", lumped_args.l_h, "Inductance in henry")->required();
    lumped->add_option("--c1", lumped_args.c1_f, "First capacitance in farad")->required();
    lumped->add_option("--c2", lumped_args.c2_f, "Second capacitance in farad")->required();
    lumped->add_option("--output", lumped_args.output, "Output path (default: stdout)");
    lumped->add_option("--format", lumped_args.format, "Report format: json|csv");
    add_config_option(lumped);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fit->parsed()) {
            const auto trace = load_trace(fit_args.input, fit_args.input_format);
            const auto result = resofit::fit_reflection(trace);
            deliver(resofit::emit_results(result, parse_format(fit_args.format)),
                    fit_args.output);
        } else if (sweep->parsed()) {
            if (sweep_args.eps > 0 && sweep_args.n_phases < 8)
                throw Error(ErrorCode::config, "cli", "sweep: --n-phases must be >= 8");
            const auto records = resofit::load_manifest_file(sweep_args.manifest);
            const auto result = resofit::assemble_power_sweep(
                records, sweep_args.eps, sweep_args.n_phases, sweep_args.workers);
            deliver(resofit::emit_results(result.points, parse_format(sweep_args.format)),
                    sweep_args.output);
        } else if (tempfit->parsed()) {
            const auto points =
                resofit::parse_temperature_csv(resofit::read_text_file(temp_args.input));
            auto init = resofit::initial_guess(points);
            if (!(temp_args.tc_cutoff > 0))
                throw Error(ErrorCode::config, "cli", "tempfit: --tc-cutoff must be positive");
            const auto result =
                resofit::joint_fit(points, temp_args.f0_hz, init, temp_args.tc_cutoff);
            deliver(resofit::emit_results(result, parse_format(temp_args.format)),
                    temp_args.output);
        } else if (synth->parsed()) {
            return run_synth(synth_args);
        } else if (fano->parsed()) {
            const auto trace = load_trace(fano_args.input, fano_args.input_format);
            const auto envelope =
                resofit::fano_envelope(trace, fano_args.eps, fano_args.n_phases);
            deliver(resofit::emit_results(envelope, parse_format(fano_args.format)),
                    fano_args.output);
        } else if (lumped->parsed()) {
            resofit::LumpedElements elements{lumped_args.l_h, lumped_args.c1_f,
                                             lumped_args.c2_f};
            deliver(resofit::emit_lumped_f0(resofit::lumped_f0(elements),
                                            parse_format(lumped_args.format)),
                    lumped_args.output);
        }
    } catch (const Error& e) {
        std::fprintf(stderr,
                     "{\"error\":{\"code\":\"%s\",\"module\":\"%s\",\"message\":\"%s\"}}\n",
                     resofit::error_code_name(e.code()), e.module().c_str(),
                     e.message().c_str());
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "{\"error\":{\"code\":\"internal\",\"message\":\"%s\"}}\n",
                     e.what());
        return 1;
    }
    return 0;
}
