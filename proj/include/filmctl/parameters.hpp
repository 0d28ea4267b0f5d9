#pragma once

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace filmctl {

inline constexpr double kDefaultTheta = std::numbers::pi / 3.0;
inline constexpr double kDefaultAspect = 30.0;
inline constexpr double kDefaultGravity = 9.807;
inline constexpr double kDefaultFilmHeight = 175e-6;

/// Dimensionless description of a film: Reynolds and capillary numbers,
/// plate inclination (radians from horizontal) and domain length in units
/// of the Nusselt film height.
struct FlowParameters {
  double reynolds = 5.0;
  double capillary = 0.05;
  double theta = kDefaultTheta;
  double aspect = kDefaultAspect;

  /// Throws InvalidArgument naming the first violated bound.
  void validate() const;
  [[nodiscard]] double cot_theta() const;

  friend bool operator==(const FlowParameters&, const FlowParameters&) = default;
};

/// Dimensional fluid properties (SI units).
struct PhysicalFluid {
  double density = 0.0;          // kg m^-3
  double viscosity = 0.0;        // kg m^-1 s^-1
  double surface_tension = 0.0;  // N m^-1
  double film_height = kDefaultFilmHeight;
  double gravity = kDefaultGravity;
  double theta = kDefaultTheta;

  void validate() const;
  /// Free-surface speed of the flat film, rho g h^2 sin(theta) / (2 mu).
  [[nodiscard]] double surface_velocity() const;
};

struct NamedFluid {
  std::string_view name;
  PhysicalFluid fluid;
};

/// Water, ethanol, pentane and nitrogen at a 175 micron Nusselt film.
std::span<const NamedFluid> fluid_presets();
std::optional<PhysicalFluid> find_preset(std::string_view name);

FlowParameters from_physical(const PhysicalFluid& fluid, double aspect = kDefaultAspect);

}  // namespace filmctl
