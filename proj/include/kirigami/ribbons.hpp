#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "boundary.hpp"
#include "catenary.hpp"
#include "sheet.hpp"

namespace kirigami {

struct RibbonLayout {
  std::vector<RibbonCurve> ribbons;  // in station order
  double lz = 0.0;                   // mm, deepest sag
};

/// Normalized centre stations of the slit-separated ribbons on the
/// undeformed sheet. Ribbons tile [margin, lx_init - margin] at one
/// ribbon-width pitch (zero kerf), centred in the span; strips whose
/// undeformed chord is shorter than two ribbon widths are dropped.
inline std::vector<double> ribbon_stations(const SheetSpec& spec) {
  validate(spec);
  const double span = spec.lx_init - 2.0 * spec.boundary_margin;
  const auto count = static_cast<int>(std::floor(span / spec.ribbon_width + 1e-9));
  const double offset = spec.boundary_margin + 0.5 * (span - count * spec.ribbon_width);

  const DeformedState rest = deform(spec, 0.0);
  std::vector<double> stations;
  for (int i = 0; i < count; ++i) {
    const double x = offset + (i + 0.5) * spec.ribbon_width;
    if (boundary_chord(rest, x) < 2.0 * spec.ribbon_width) continue;
    stations.push_back(x / spec.lx_init);
  }
  return stations;
}

/// Solves every ribbon for the given state and writes the bowl depth back
/// into it. A ribbon keeps its normalized station xi when the boundary
/// deforms, so its endpoints move to x = xi * lx.
inline RibbonLayout layout_ribbons(const SheetSpec& spec, DeformedState& state) {
  const DeformedState rest = deform(spec, 0.0);
  RibbonLayout layout;
  for (double xi : ribbon_stations(spec)) {
    const double rest_length = boundary_chord(rest, std::clamp(xi * rest.lx, 0.0, rest.lx));
    const double dy = boundary_chord(state, std::clamp(xi * state.lx, 0.0, state.lx));
    RibbonCurve c = solve_catenary(rest_length, dy);
    c.station_frac = xi;
    layout.lz = std::max(layout.lz, c.dz);
    layout.ribbons.push_back(c);
  }
  state.lz = layout.lz;
  return layout;
}

/// Convenience: deform and lay out in one call.
inline DeformedState deform_with_depth(const SheetSpec& spec, double delta_x) {
  DeformedState s = deform(spec, delta_x);
  layout_ribbons(spec, s);
  return s;
}

}  // namespace kirigami
