#pragma once
//
// Deformed 3D shape: the boundary ellipse (z = 0) plus one catenary
// polyline per discrete ribbon, in sheet coordinates with the fixed joint
// at the origin, the pull axis along +x and the bowl sagging toward -z.
//

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "catenary.hpp"
#include "io.hpp"
#include "ribbons.hpp"
#include "sheet.hpp"

namespace kirigami {

struct Point3 {
  double x, y, z;
};

struct ShapeModel {
  std::vector<Point3> boundary_points;                // closed loop, first point not repeated
  std::vector<std::vector<Point3>> ribbon_polylines;  // station order
  double ribbon_width = 0.0;                          // mm, for strip extrusion
  Point3 bounding_box{0.0, 0.0, 0.0};                 // (lx, ly, lz)
};

inline constexpr int kBoundarySamples = 64;

inline ShapeModel build_shape(const SheetSpec& spec, double delta_x, int samples_per_ribbon) {
  if (samples_per_ribbon < 3) throw Error(ErrorKind::InvalidRibbon, "samples_per_ribbon must be >= 3");
  // Odd count so the apex (z = -dz) is one of the samples.
  if (samples_per_ribbon % 2 == 0) ++samples_per_ribbon;

  DeformedState state = deform(spec, delta_x);
  const RibbonLayout layout = layout_ribbons(spec, state);

  ShapeModel model;
  model.ribbon_width = spec.ribbon_width;
  model.bounding_box = {state.lx, state.ly, state.lz};

  // Boundary stations: uniform in the ellipse angle plus every ribbon
  // station, so ribbon endpoints coincide with boundary vertices.
  const double half = state.lx / 2.0;
  std::vector<double> xs;
  for (const auto& r : layout.ribbons) xs.push_back(std::clamp(r.station_frac * state.lx, 0.0, state.lx));
  const std::size_t n_ribbon = xs.size();
  for (int i = 0; i <= kBoundarySamples / 2; ++i) {
    const double phi = std::numbers::pi * i / (kBoundarySamples / 2);
    const double x = i == 0 ? 0.0 : i == kBoundarySamples / 2 ? state.lx : half * (1.0 - std::cos(phi));
    const bool near_ribbon = std::any_of(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(n_ribbon),
                                         [&](double r) { return std::abs(r - x) < 1e-6; });
    if (!near_ribbon) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  // Upper arc left to right, lower arc right to left, vertices shared at the tips.
  for (double x : xs) model.boundary_points.push_back({x, boundary_chord(state, x) / 2.0, 0.0});
  for (auto it = xs.rbegin() + 1; it + 1 != xs.rend(); ++it)
    model.boundary_points.push_back({*it, -boundary_chord(state, *it) / 2.0, 0.0});

  for (const auto& r : layout.ribbons) {
    const double x = std::clamp(r.station_frac * state.lx, 0.0, state.lx);
    std::vector<Point3> line;
    if (r.is_flat()) {
      line = {{x, -r.dy / 2.0, 0.0}, {x, r.dy / 2.0, 0.0}};
    } else {
      for (const auto& p : ribbon_profile(r, samples_per_ribbon)) line.push_back({x, p.y, p.z});
    }
    model.ribbon_polylines.push_back(std::move(line));
  }
  return model;
}

// ---------------------------------------------------------------------------
// Export

namespace detail {
inline std::string obj_vertex(const Point3& p) {
  return "v " + io::format_fixed(p.x, 6) + ' ' + io::format_fixed(p.y, 6) + ' ' + io::format_fixed(p.z, 6) + '\n';
}
}  // namespace detail

/// Wavefront OBJ text: boundary loop vertices, then ribbon vertices in
/// station order; one `l` element per polyline. With ribbon_strips each
/// ribbon is additionally extruded +-width/2 along x into quad faces
/// (a visual approximation of the physical strip).
inline std::string format_obj(const ShapeModel& model, bool ribbon_strips = false) {
  std::string out = "# kirigami deformed shape, units mm\n";
  for (const auto& p : model.boundary_points) out += detail::obj_vertex(p);
  for (const auto& line : model.ribbon_polylines)
    for (const auto& p : line) out += detail::obj_vertex(p);

  std::size_t next = 1;
  if (!model.boundary_points.empty()) {
    out += 'l';
    for (std::size_t i = 0; i < model.boundary_points.size(); ++i) out += ' ' + std::to_string(next + i);
    out += ' ' + std::to_string(next) + '\n';
    next += model.boundary_points.size();
  }
  for (const auto& line : model.ribbon_polylines) {
    out += 'l';
    for (std::size_t i = 0; i < line.size(); ++i) out += ' ' + std::to_string(next + i);
    out += '\n';
    next += line.size();
  }

  if (ribbon_strips) {
    out += "# approximate ribbon strips\n";
    const double h = model.ribbon_width / 2.0;
    for (const auto& line : model.ribbon_polylines) {
      const std::size_t first = next;
      for (const auto& p : line) {
        out += detail::obj_vertex({p.x - h, p.y, p.z});
        out += detail::obj_vertex({p.x + h, p.y, p.z});
      }
      for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        const std::size_t a = first + 2 * i;
        out += "f " + std::to_string(a) + ' ' + std::to_string(a + 1) + ' ' + std::to_string(a + 3) + ' ' +
               std::to_string(a + 2) + '\n';
      }
      next += 2 * line.size();
    }
  }
  return out;
}

/// Point cloud CSV; element_id 0 is the boundary, ribbon k is k + 1.
inline std::string format_pointcloud_csv(const ShapeModel& model) {
  std::string out = "x_mm,y_mm,z_mm,element_id\n";
  auto row = [&](const Point3& p, std::size_t id) {
    out += io::format_fixed(p.x, 6) + ',' + io::format_fixed(p.y, 6) + ',' + io::format_fixed(p.z, 6) + ',' +
           std::to_string(id) + '\n';
  };
  for (const auto& p : model.boundary_points) row(p, 0);
  for (std::size_t k = 0; k < model.ribbon_polylines.size(); ++k)
    for (const auto& p : model.ribbon_polylines[k]) row(p, k + 1);
  return out;
}

inline void export_obj(const ShapeModel& model, const std::filesystem::path& path, bool ribbon_strips = false) {
  io::write_text_file(path, format_obj(model, ribbon_strips));
}

inline void export_csv_pointcloud(const ShapeModel& model, const std::filesystem::path& path) {
  io::write_text_file(path, format_pointcloud_csv(model));
}

}  // namespace kirigami
