#pragma once
//
// Design exploration: find the smallest actuation that opens a cavity deep
// enough for a food item while staying wide enough to admit it, within the
// actuator's force budget.
//
// The cavity criterion is the bowl's opening width ly and depth lz; it is
// an operational proxy for "fits in the spoon", not a containment test.
//

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "boundary.hpp"
#include "errors.hpp"
#include "force.hpp"
#include "io.hpp"
#include "ribbons.hpp"
#include "sheet.hpp"

namespace kirigami {

struct GraspRequirement {
  double food_width = 0.0;    // mm
  double food_depth = 0.0;    // mm
  double force_budget = 0.0;  // N
};

inline void validate(const GraspRequirement& r) {
  if (!(std::isfinite(r.food_width) && r.food_width >= 0.0))
    throw Error(ErrorKind::InvalidRequirement, "food_width must be >= 0");
  if (!(std::isfinite(r.food_depth) && r.food_depth >= 0.0))
    throw Error(ErrorKind::InvalidRequirement, "food_depth must be >= 0");
  if (!(std::isfinite(r.force_budget) && r.force_budget > 0.0))
    throw Error(ErrorKind::InvalidRequirement, "force_budget must be > 0");
}

enum Infeasibility : unsigned {
  kFeasible = 0,
  kDepthUnreachable = 1u << 0,
  kWidthCollapsed = 1u << 1,
  kForceExceeded = 1u << 2,
};

inline std::string reason_string(unsigned reasons) {
  if (reasons == kFeasible) return "ok";
  std::string out;
  auto add = [&](unsigned bit, const char* name) {
    if (!(reasons & bit)) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(kDepthUnreachable, "DepthUnreachable");
  add(kWidthCollapsed, "WidthCollapsed");
  add(kForceExceeded, "ForceExceeded");
  return out;
}

struct DesignCandidate {
  SheetSpec spec;
  SpringConstants constants;
  // When feasible: the grasp point. Otherwise, if the depth was reachable,
  // the first displacement reaching it (for diagnosis).
  std::optional<double> delta_x_grasp;  // mm
  std::optional<double> force_at_grasp; // N
  bool feasible = false;
  unsigned reasons = kFeasible;
};

inline constexpr double kDefaultGridStep = 0.1;  // mm

/// Scans delta_x = 0, step, 2 step, ... up to the linkage limit and returns
/// the first grid point meeting depth, width and force together.
inline DesignCandidate evaluate_design(const SheetSpec& spec, const SpringConstants& k,
                                       const GraspRequirement& req, double grid_step = kDefaultGridStep) {
  validate(spec);
  validate(req);
  if (!(std::isfinite(grid_step) && grid_step > 0.0))
    throw Error(ErrorKind::InvalidRequirement, "grid step must be > 0");

  DesignCandidate cand{spec, k, std::nullopt, std::nullopt, false, kFeasible};
  const double limit = max_displacement(spec);

  // Sag never exceeds half a ribbon's rest length; the centre ribbon is
  // the longest.
  DeformedState rest = deform(spec, 0.0);
  double longest = 0.0;
  for (const auto& r : layout_ribbons(spec, rest).ribbons) longest = std::max(longest, r.rest_length);
  if (req.food_depth > longest / 2.0) {
    cand.reasons = kDepthUnreachable;
    return cand;
  }

  for (long i = 0;; ++i) {
    const double dx = static_cast<double>(i) * grid_step;
    if (dx > limit) break;
    DeformedState s = deform(spec, dx);
    if (!(s.theta > kAngleEpsilon)) break;
    layout_ribbons(spec, s);
    if (s.lz < req.food_depth) continue;

    const double f = tensile_force(s, k);
    const bool wide = s.ly >= req.food_width;
    const bool affordable = f <= req.force_budget;
    if (wide && affordable) {
      cand.delta_x_grasp = dx;
      cand.force_at_grasp = f;
      cand.feasible = true;
      return cand;
    }
    // Beyond the first depth-meeting point ly only shrinks and the force
    // only grows, so no later point can pass.
    if (!cand.delta_x_grasp) {
      cand.delta_x_grasp = dx;
      cand.force_at_grasp = f;
      cand.reasons = (wide ? 0u : unsigned{kWidthCollapsed}) | (affordable ? 0u : unsigned{kForceExceeded});
    }
    return cand;
  }
  cand.reasons = kDepthUnreachable;
  return cand;
}

// ---------------------------------------------------------------------------
// Stiffness for designs without their own calibration

enum class ConstantsSource { Fixed, NearestPreset, ThicknessScaled };

struct ConstantsStrategy {
  ConstantsSource source = ConstantsSource::Fixed;
  std::optional<SpringConstants> fixed;
};

/// Reference row closest to the spec: same material required, then the
/// smallest relative thickness + ribbon-width distance, then boundary size,
/// then sheet name.
inline const ReferenceConstants& nearest_reference(const SheetSpec& spec) {
  const ReferenceConstants* best = nullptr;
  std::tuple<double, double, std::string_view> best_key;
  for (const auto& row : kReferenceTable) {
    if (row.material != spec.material) continue;
    const SheetSpec ref = presets::sheet(row.sheet[0]);
    const double primary = std::abs(spec.thickness - row.thickness) / row.thickness +
                           std::abs(spec.ribbon_width - row.ribbon_width) / row.ribbon_width;
    const double boundary = std::abs(spec.lx_init - ref.lx_init) / ref.lx_init +
                            std::abs(spec.ly_init - ref.ly_init) / ref.ly_init;
    const auto key = std::make_tuple(primary, boundary, row.sheet);
    if (!best || key < best_key) {
      best = &row;
      best_key = key;
    }
  }
  if (!best)
    throw Error(ErrorKind::UnknownConstants,
                "no reference stiffness for material " + std::string(to_string(spec.material)));
  return *best;
}

inline SpringConstants resolve_constants(const SheetSpec& spec, const ConstantsStrategy& strategy) {
  switch (strategy.source) {
    case ConstantsSource::Fixed:
      if (!strategy.fixed) throw Error(ErrorKind::UnknownConstants, "no spring constants supplied");
      return *strategy.fixed;
    case ConstantsSource::NearestPreset:
      return nearest_reference(spec).k;
    case ConstantsSource::ThicknessScaled: {
      // Heuristic: stiffness linear in thickness relative to the nearest preset.
      const auto& ref = nearest_reference(spec);
      const double ratio = spec.thickness / ref.thickness;
      return {ref.k.kx * ratio, ref.k.ky * ratio};
    }
  }
  throw Error(ErrorKind::UnknownConstants, "unknown constants source");
}

// ---------------------------------------------------------------------------
// Grid sweep

struct SpecGrid {
  std::string name = "design";
  Material material = Material::PET;
  double thickness = 0.25;                // mm
  std::optional<double> boundary_margin;  // mm; defaults to each ribbon width
  std::vector<double> lx_init;
  std::vector<double> ly_init;
  std::vector<double> ribbon_width;
};

struct SweepResult {
  std::vector<DesignCandidate> feasible;    // force ascending, then (lx, ly, w)
  std::vector<DesignCandidate> infeasible;  // (lx, ly, w) order
};

inline std::string grid_point_name(const std::string& base, double lx, double ly, double w) {
  return base + "_lx" + io::format_double(lx) + "_ly" + io::format_double(ly) + "_w" + io::format_double(w);
}

inline SweepResult sweep_designs(const SpecGrid& grid, const ConstantsStrategy& strategy,
                                 const GraspRequirement& req, double grid_step = kDefaultGridStep) {
  if (grid.lx_init.empty() || grid.ly_init.empty() || grid.ribbon_width.empty())
    throw Error(ErrorKind::EmptyGrid, "design grid has an empty axis");
  validate(req);

  std::vector<DesignCandidate> all;
  for (double lx : grid.lx_init)
    for (double ly : grid.ly_init)
      for (double w : grid.ribbon_width) {
        const SheetSpec spec = make_sheet(grid_point_name(grid.name, lx, ly, w), lx, ly, w, grid.thickness,
                                          grid.material, grid.boundary_margin);
        all.push_back(evaluate_design(spec, resolve_constants(spec, strategy), req, grid_step));
      }

  auto dims = [](const DesignCandidate& c) {
    return std::make_tuple(c.spec.lx_init, c.spec.ly_init, c.spec.ribbon_width);
  };
  SweepResult out;
  for (auto& c : all) (c.feasible ? out.feasible : out.infeasible).push_back(std::move(c));
  std::stable_sort(out.feasible.begin(), out.feasible.end(), [&](const auto& a, const auto& b) {
    return std::make_tuple(*a.force_at_grasp, dims(a)) < std::make_tuple(*b.force_at_grasp, dims(b));
  });
  std::stable_sort(out.infeasible.begin(), out.infeasible.end(),
                   [&](const auto& a, const auto& b) { return dims(a) < dims(b); });
  return out;
}

inline constexpr std::string_view kDesignHeader =
    "spec_name,lx_init,ly_init,ribbon_width,delta_x_grasp_mm,force_n,feasible,reason";

inline std::string format_design_csv(const SweepResult& result) {
  std::string out(kDesignHeader);
  out += '\n';
  auto opt = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); };
  for (const auto* group : {&result.feasible, &result.infeasible})
    for (const auto& c : *group)
      out += c.spec.name + ',' + io::format_double(c.spec.lx_init) + ',' + io::format_double(c.spec.ly_init) + ',' +
             io::format_double(c.spec.ribbon_width) + ',' +
             (c.delta_x_grasp ? io::format_fixed(*c.delta_x_grasp, 6) : std::string()) + ',' + opt(c.force_at_grasp) +
             ',' + (c.feasible ? "true" : "false") + ',' + reason_string(c.reasons) + '\n';
  return out;
}

}  // namespace kirigami
