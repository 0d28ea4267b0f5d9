#include "filmctl/parameters.hpp"

#include <array>
#include <cmath>

#include "filmctl/errors.hpp"

namespace filmctl {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

bool valid_inclination(double theta) {
  return std::isfinite(theta) && theta > 0.0 && theta < std::numbers::pi / 2.0;
}

constexpr std::array<NamedFluid, 4> kPresets{{
    {"water", {999.8, 8.91e-4, 0.072}},
    {"ethanol", {789.5, 1.06e-3, 0.022}},
    {"pentane", {626.0, 2.24e-4, 0.018}},
    {"nitrogen", {3.44, 6.88e-6, 0.0085}},
}};

}  // namespace

void FlowParameters::validate() const {
  require(std::isfinite(reynolds) && reynolds > 0.0, "reynolds must be > 0");
  require(std::isfinite(capillary) && capillary > 0.0, "capillary must be > 0");
  require(valid_inclination(theta), "theta must lie in (0, pi/2)");
  require(std::isfinite(aspect) && aspect > 0.0, "aspect must be > 0");
}

double FlowParameters::cot_theta() const { return 1.0 / std::tan(theta); }

void PhysicalFluid::validate() const {
  require(density > 0.0, "density must be > 0");
  require(viscosity > 0.0, "viscosity must be > 0");
  require(surface_tension > 0.0, "surface_tension must be > 0");
  require(film_height > 0.0, "film_height must be > 0");
  require(gravity > 0.0, "gravity must be > 0");
  require(valid_inclination(theta), "theta must lie in (0, pi/2)");
}

double PhysicalFluid::surface_velocity() const {
  return density * gravity * film_height * film_height * std::sin(theta) / (2.0 * viscosity);
}

std::span<const NamedFluid> fluid_presets() { return kPresets; }

std::optional<PhysicalFluid> find_preset(std::string_view name) {
  for (const auto& preset : kPresets) {
    if (preset.name == name) return preset.fluid;
  }
  return std::nullopt;
}

FlowParameters from_physical(const PhysicalFluid& fluid, double aspect) {
  fluid.validate();
  const double u_s = fluid.surface_velocity();
  FlowParameters params;
  params.reynolds = fluid.density * u_s * fluid.film_height / fluid.viscosity;
  params.capillary = fluid.viscosity * u_s / fluid.surface_tension;
  params.theta = fluid.theta;
  params.aspect = aspect;
  params.validate();
  return params;
}

}  // namespace filmctl
