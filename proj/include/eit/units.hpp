#pragma once

#include <numbers>

// Every frequency-like quantity crossing a public interface is a cyclic
// frequency in MHz and every time is in microseconds. Formulas that need
// angular frequencies convert here, and only here.
namespace eit {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Cyclic MHz -> angular rad/us.
constexpr double angular(double mhz) { return two_pi * mhz; }

/// Angular rad/us -> cyclic MHz.
constexpr double cyclic(double rad_per_us) { return rad_per_us / two_pi; }

}  // namespace eit
