// constants.hpp: CODATA 2018 SI constants

#pragma once

#include <numbers>

namespace cqed::si {

inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double electron_charge = 1.602176634e-19;  // C
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double mu0 = 1.25663706212e-6;        // H/m
inline constexpr double pi = std::numbers::pi;

// rad/s carried by one natural unit (2π·GHz).
inline constexpr double natural_frequency_unit = 2.0 * pi * 1.0e9;

}  // namespace cqed::si
