#pragma once

#include <numbers>

// Unit conventions used throughout the library:
//   lengths mm, forces N, torques N·mm, angles rad.
// External interfaces (CLI, files) use degrees, N·m for torque and µm for
// small deflections; every conversion goes through these helpers.
namespace deltakit::units {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

constexpr double newton_m_to_newton_mm(double t) { return t * 1000.0; }
constexpr double newton_mm_to_newton_m(double t) { return t / 1000.0; }

constexpr double mm_to_um(double x) { return x * 1000.0; }
constexpr double um_to_mm(double x) { return x / 1000.0; }

}  // namespace deltakit::units
