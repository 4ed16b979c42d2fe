#pragma once
//
// Four-bar linkage model of the boundary ribbon.
//
// Joints 1 and 3 sit on the pull axis at x = 0 and x = lx; joints 2 and 4
// at (lx/2, +-ly/2). All four links share one length, so pulling joint 3
// by delta_x narrows the sheet along y. The deformed boundary is the
// ellipse centred at (lx/2, 0) with full axes lx and ly.
//

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "sheet.hpp"

namespace kirigami {

struct DeformedState {
  double delta_x = 0.0;  // mm, slider displacement
  double lx = 0.0;       // mm
  double ly = 0.0;       // mm
  double delta_y = 0.0;  // mm, ly_init - ly
  double theta = 0.0;    // rad, atan(ly / lx)
  double lz = 0.0;       // mm, filled in by layout_ribbons
};

inline double link_length(const SheetSpec& spec) {
  validate(spec);
  return std::hypot(spec.lx_init / 2.0, spec.ly_init / 2.0);
}

/// Slider travel at which the linkage closes (ly = 0).
inline double max_displacement(const SheetSpec& spec) {
  return 2.0 * link_length(spec) - spec.lx_init;
}

inline DeformedState deform(const SheetSpec& spec, double delta_x) {
  const double link = link_length(spec);
  const double limit = 2.0 * link - spec.lx_init;
  if (!(delta_x >= 0.0 && delta_x <= limit)) {
    std::ostringstream msg;
    msg << "delta_x = " << delta_x << " mm outside [0, " << limit
        << "] (max_displacement for sheet '" << spec.name << "')";
    throw Error(ErrorKind::DisplacementOutOfRange, msg.str());
  }

  DeformedState s;
  s.delta_x = delta_x;
  if (delta_x == 0.0) {
    s.lx = spec.lx_init;
    s.ly = spec.ly_init;
  } else if (delta_x == limit) {
    s.lx = 2.0 * link;
    s.ly = 0.0;
  } else {
    s.lx = spec.lx_init + delta_x;
    const double half_x = s.lx / 2.0;
    // (link - half_x)(link + half_x) avoids cancellation near closure.
    const double sq = (link - half_x) * (link + half_x);
    s.ly = 2.0 * std::sqrt(std::max(sq, 0.0));
  }
  s.delta_y = spec.ly_init - s.ly;
  s.theta = std::atan2(s.ly, s.lx);
  return s;
}

/// Chord of the deformed boundary ellipse at station x along the pull axis.
inline double boundary_chord(const DeformedState& state, double x) {
  if (!(x >= 0.0 && x <= state.lx)) {
    std::ostringstream msg;
    msg << "station x = " << x << " mm outside [0, " << state.lx << "]";
    throw Error(ErrorKind::StationOutOfRange, msg.str());
  }
  const double half = state.lx / 2.0;
  // 1 - t^2 = (1 - t)(1 + t) with t = (x - half) / half
  const double t = (x - half) / half;
  const double s = (1.0 - t) * (1.0 + t);
  return state.ly * std::sqrt(std::max(s, 0.0));
}

}  // namespace kirigami
