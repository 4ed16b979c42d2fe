#pragma once
//
// Two-spring force model. Spring S_1-3 along the pull axis carries the
// boundary bending stiffness kx; spring S_2-4 across the linkage carries
// the ribbons' reaction stiffness ky, transmitted to the slider through
// the rigid links at angle theta.
//
// Geometry is in mm and stiffness in N/m; the mm -> m conversion happens
// here and nowhere else.
//

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boundary.hpp"
#include "errors.hpp"
#include "sheet.hpp"

namespace kirigami {

struct SpringConstants {
  double kx = 0.0;  // N/m, boundary bending
  double ky = 0.0;  // N/m, ribbon reaction

  friend bool operator==(const SpringConstants&, const SpringConstants&) = default;
};

inline constexpr double kMillimetre = 1e-3;
inline constexpr double kAngleEpsilon = 1e-9;

namespace detail {
inline void require_open_angle(const DeformedState& s) {
  if (!(s.theta > kAngleEpsilon))
    throw Error(ErrorKind::DegenerateAngle,
                "linkage angle " + std::to_string(s.theta) + " rad too close to 0; force diverges");
}
}  // namespace detail

/// Regressor multiplying ky in the tensile force: delta_y / tan(theta), in m.
inline double ribbon_lever(const DeformedState& s) {
  detail::require_open_angle(s);
  // tan(theta) = ly / lx
  return s.delta_y * kMillimetre * s.lx / s.ly;
}

inline double tensile_force(const DeformedState& s, const SpringConstants& k) {
  return k.kx * s.delta_x * kMillimetre + k.ky * ribbon_lever(s);
}

/// Sum of the forces in one pair of links, ky delta_y / sin(theta).
inline double link_force(const DeformedState& s, const SpringConstants& k) {
  detail::require_open_angle(s);
  return k.ky * s.delta_y * kMillimetre / std::sin(s.theta);
}

struct ForcePoint {
  double delta_x;  // mm
  double force;    // N
};

inline std::vector<ForcePoint> force_curve(const SheetSpec& spec, const SpringConstants& k,
                                           std::span<const double> displacements) {
  std::vector<ForcePoint> out;
  out.reserve(displacements.size());
  for (double dx : displacements) out.push_back({dx, tensile_force(deform(spec, dx), k)});
  return out;
}

// ---------------------------------------------------------------------------
// Fitted stiffness of specimens A-E (N/m), with their sheet metadata.

struct ReferenceConstants {
  std::string_view sheet;
  Material material;
  double thickness;     // mm
  double ribbon_width;  // mm
  SpringConstants k;
};

inline constexpr ReferenceConstants kReferenceTable[] = {
    {"A", Material::PET, 0.25, 2.0, {320.02, 54.07}},
    {"B", Material::PET, 0.15, 2.0, {76.15, 28.74}},
    {"C", Material::TPU, 1.0, 2.0, {76.0, 3.95}},
    {"D", Material::PET, 0.25, 2.0, {184.0, 11.17}},
    {"E", Material::PET, 0.25, 1.0, {171.78, 9.25}},
};

inline std::optional<SpringConstants> reference_constants(std::string_view sheet) {
  for (const auto& row : kReferenceTable)
    if (row.sheet == sheet) return row.k;
  return std::nullopt;
}

}  // namespace kirigami
