#ifndef RESOFIT_EMIT_HPP
#define RESOFIT_EMIT_HPP

#include <string>
#include <vector>

#include "resofit/circle_fit.hpp"
#include "resofit/photon.hpp"
#include "resofit/quasiparticle.hpp"

namespace resofit {

enum class EmitFormat { json, csv };

// All emitters produce a fixed field order and print floating-point values
// with 17 significant digits, so emitted numbers re-parse to identical
// doubles and identical inputs yield byte-identical documents.

std::string emit_results(const CircleFitResult& result, EmitFormat format);
std::string emit_results(const std::vector<PowerPoint>& points, EmitFormat format);
std::string emit_results(const FanoEnvelope& envelope, EmitFormat format);
std::string emit_results(const QuasiparticleFit& fit, EmitFormat format);

/// Report for the lumped-element command: {"f0_hz": ...}.
std::string emit_lumped_f0(double f0_hz, EmitFormat format);

} // namespace resofit

#endif
