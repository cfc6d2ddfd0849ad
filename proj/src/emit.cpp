#include "resofit/emit.hpp"

#include <sstream>

#include "decimal.hpp"

namespace resofit {

namespace {

using detail::format_double;

// Tiny deterministic JSON writer: fields appear in insertion order.
class JsonObject {
public:
    JsonObject& field(const char* key, double value) {
        return raw(key, format_double(value));
    }
    JsonObject& field(const char* key, std::size_t value) {
        return raw(key, std::to_string(value));
    }
    JsonObject& field(const char* key, bool value) {
        return raw(key, value ? "true" : "false");
    }
    JsonObject& field(const char* key, int value) { return raw(key, std::to_string(value)); }

    std::string str() const { return "{" + body_ + "}\n"; }

private:
    JsonObject& raw(const char* key, const std::string& value) {
        if (!body_.empty()) body_ += ",";
        body_ += "\"";
        body_ += key;
        body_ += "\":";
        body_ += value;
        return *this;
    }
    std::string body_;
};

std::string csv_line(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_double(values[i]);
    }
    line += '\n';
    return line;
}

} // namespace

std::string emit_results(const CircleFitResult& r, EmitFormat format) {
    if (format == EmitFormat::json) {
        return JsonObject()
            .field("f0_hz", r.f0_hz)
            .field("q_total", r.q_total)
            .field("q_c", r.q_c)
            .field("q_i", r.q_i)
            .field("r", r.r)
            .field("delay_s", r.delay_s)
            .field("amp", r.amp)
            .field("phase_rad", r.phase_rad)
            .field("rms_residual", r.rms_residual)
            .field("fwhm_hz", r.fwhm_hz)
            .field("n_points", r.n_points)
            .field("refined", r.refined)
            .str();
    }
    std::string out =
        "f0_hz,q_total,q_c,q_i,r,delay_s,amp,phase_rad,rms_residual,fwhm_hz,n_points,refined\n";
    for (double v : {r.f0_hz, r.q_total, r.q_c, r.q_i, r.r, r.delay_s, r.amp, r.phase_rad,
                     r.rms_residual, r.fwhm_hz}) {
        out += format_double(v);
        out += ',';
    }
    out += std::to_string(r.n_points);
    out += r.refined ? ",1\n" : ",0\n";
    return out;
}

std::string emit_results(const std::vector<PowerPoint>& points, EmitFormat format) {
    if (format == EmitFormat::json) {
        std::string out = "[";
        for (std::size_t i = 0; i < points.size(); ++i) {
            const PowerPoint& p = points[i];
            if (i) out += ",";
            out += "\n  ";
            std::string obj = JsonObject()
                                  .field("n_bar", p.n_bar)
                                  .field("q_i", p.q_i)
                                  .field("q_i_lo", p.q_i_lo)
                                  .field("q_i_hi", p.q_i_hi)
                                  .field("source_power_dbm", p.source_power_dbm)
                                  .field("p_in_w", p.p_in_w)
                                  .str();
            obj.pop_back(); // strip the writer's trailing newline
            out += obj;
        }
        out += "\n]\n";
        return out;
    }
    std::string out = "n_bar,q_i,q_i_lo,q_i_hi,source_power_dbm,p_in_w\n";
    for (const PowerPoint& p : points)
        out += csv_line({p.n_bar, p.q_i, p.q_i_lo, p.q_i_hi, p.source_power_dbm, p.p_in_w});
    return out;
}

std::string emit_results(const FanoEnvelope& e, EmitFormat format) {
    if (format == EmitFormat::json) {
        return JsonObject()
            .field("q_i_point", e.q_i_point)
            .field("q_i_lo", e.q_i_lo)
            .field("q_i_hi", e.q_i_hi)
            .field("eps", e.eps)
            .str();
    }
    return "q_i_point,q_i_lo,q_i_hi,eps\n" +
           csv_line({e.q_i_point, e.q_i_lo, e.q_i_hi, e.eps});
}

std::string emit_results(const QuasiparticleFit& fit, EmitFormat format) {
    if (format == EmitFormat::json) {
        return JsonObject()
            .field("t_c_k", fit.params.t_c_k)
            .field("alpha", fit.params.alpha)
            .field("a_qp", fit.params.a_qp)
            .field("q_other", fit.params.q_other)
            .field("rms_delta_f_hz", fit.rms_delta_f_hz)
            .field("rms_log_q_i", fit.rms_log_q_i)
            .field("iterations", fit.iterations)
            .str();
    }
    return "t_c_k,alpha,a_qp,q_other,rms_delta_f_hz,rms_log_q_i,iterations\n" +
           csv_line({fit.params.t_c_k, fit.params.alpha, fit.params.a_qp, fit.params.q_other,
                     fit.rms_delta_f_hz, fit.rms_log_q_i, static_cast<double>(fit.iterations)});
}

std::string emit_lumped_f0(double f0_hz, EmitFormat format) {
    if (format == EmitFormat::json) return JsonObject().field("f0_hz", f0_hz).str();
    return "f0_hz\n" + csv_line({f0_hz});
}

} // namespace resofit
