#pragma once

#include <numbers>

namespace collapse {

// CODATA 2018 values, SI units.
struct PhysicalConstants {
  double hbar;  // J s
  double k_B;   // J / K
  double G;     // m^3 kg^-1 s^-2
  double amu;   // kg
  double c;     // m / s
};

inline constexpr PhysicalConstants kCodata2018{
    1.054571817e-34, 1.380649e-23, 6.67430e-11, 1.66053906660e-27, 299792458.0};

namespace constants {
inline constexpr double hbar = kCodata2018.hbar;
inline constexpr double k_B = kCodata2018.k_B;
inline constexpr double G = kCodata2018.G;
inline constexpr double amu = kCodata2018.amu;
inline constexpr double c = kCodata2018.c;
inline constexpr double pi = std::numbers::pi;
}  // namespace constants

inline constexpr double hz_to_rad_s(double hz) { return 2.0 * std::numbers::pi * hz; }
inline constexpr double rad_s_to_hz(double w) { return w / (2.0 * std::numbers::pi); }

}  // namespace collapse
