#pragma once

#include <numbers>

namespace orient::units {

// CODATA 2018. All internal computation is in atomic units (hbar = 1).

/// Hartree per wavenumber: hc * 1 cm^-1 / E_h.
inline constexpr double kHartreePerWavenumber = 4.556335252912e-6;

/// Seconds per atomic unit of time, hbar / E_h.
inline constexpr double kSecondsPerAtomicTime = 2.4188843265857e-17;

inline constexpr double kFemtosecond = 1.0e-15 / kSecondsPerAtomicTime;

inline constexpr double wavenumber_to_atomic(double wavenumber) {
  return wavenumber * kHartreePerWavenumber;
}

inline constexpr double femtoseconds_to_atomic(double fs) { return fs * kFemtosecond; }

inline constexpr double atomic_to_seconds(double t) { return t * kSecondsPerAtomicTime; }

}  // namespace orient::units
