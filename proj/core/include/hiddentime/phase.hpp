#pragma once

#include <cmath>
#include <numbers>

namespace hiddentime {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angle in [0, 2pi).
class Phase {
 public:
  constexpr Phase() = default;

  static Phase from_radians(double radians) {
    double r = std::fmod(radians, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return Phase(r);
  }

  constexpr double radians() const { return radians_; }

  friend constexpr bool operator==(Phase, Phase) = default;

 private:
  constexpr explicit Phase(double r) : radians_(r) {}
  double radians_ = 0.0;
};

/// Phase after crossing one rib of length `rib_length`: phi + 2pi * l / lambda, mod 2pi.
inline Phase next_phase(Phase phase, double rib_length, double wavelength) {
  return Phase::from_radians(phase.radians() + kTwoPi * std::fmod(rib_length / wavelength, 1.0));
}

enum class ArrivalClass { SameSource, NewSource };

/// Local source discrimination at a detector: arrivals whose phase stays within
/// `same_source_tolerance` (circular distance, inclusive) of the previous one
/// are attributed to the same source.
inline ArrivalClass classify_arrival(Phase previous, Phase current, double same_source_tolerance) {
  const double diff = std::abs(current.radians() - previous.radians());
  const double circular = std::min(diff, kTwoPi - diff);
  return circular <= same_source_tolerance ? ArrivalClass::SameSource : ArrivalClass::NewSource;
}

}  // namespace hiddentime
