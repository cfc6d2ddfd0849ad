#ifndef RESOFIT_CONSTANTS_HPP
#define RESOFIT_CONSTANTS_HPP

namespace resofit::constants {

// CODATA 2018 values.
inline constexpr double hbar_j_s = 1.054571817e-34;        // reduced Planck constant
inline constexpr double planck_j_s = 6.62607015e-34;       // Planck constant
inline constexpr double boltzmann_j_per_k = 1.380649e-23;  // Boltzmann constant

} // namespace resofit::constants

#endif
