#pragma once
//
// Static description of a kirigami sheet and the built-in specimen presets.
//
// Axis convention: x is the pull axis (perpendicular to the discrete
// ribbons), y runs along the ribbons, z is depth (negative = below the
// boundary plane). Lengths are millimetres throughout.
//

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "errors.hpp"

namespace kirigami {

enum class Material { PET, TPU };

constexpr std::string_view to_string(Material m) {
  return m == Material::PET ? "PET" : "TPU";
}

inline Material parse_material(std::string_view s) {
  if (s == "PET") return Material::PET;
  if (s == "TPU") return Material::TPU;
  throw Error(ErrorKind::InvalidSpec, "unknown material '" + std::string(s) + "' (expected PET or TPU)");
}

struct SheetSpec {
  std::string name;
  double lx_init = 0.0;          // mm, along the pull axis
  double ly_init = 0.0;          // mm, along the ribbons
  double ribbon_width = 0.0;     // mm
  double boundary_margin = 0.0;  // mm, uncut boundary band
  double thickness = 0.0;        // mm
  Material material = Material::PET;  // metadata only

  friend bool operator==(const SheetSpec&, const SheetSpec&) = default;
};

inline void validate(const SheetSpec& s) {
  auto positive = [&](double v, const char* field) {
    if (!(std::isfinite(v) && v > 0.0))
      throw Error(ErrorKind::InvalidSpec, std::string(field) + " must be > 0 (sheet '" + s.name + "')");
  };
  positive(s.lx_init, "lx_init");
  positive(s.ly_init, "ly_init");
  positive(s.ribbon_width, "ribbon_width");
  positive(s.thickness, "thickness");
  if (!(std::isfinite(s.boundary_margin) && s.boundary_margin >= 0.0))
    throw Error(ErrorKind::InvalidSpec, "boundary_margin must be >= 0");
  if (!(2.0 * s.boundary_margin < s.lx_init))
    throw Error(ErrorKind::InvalidSpec, "2*boundary_margin must be < lx_init");
}

/// Builds a validated spec; a missing margin defaults to one ribbon width.
inline SheetSpec make_sheet(std::string name, double lx_init, double ly_init, double ribbon_width,
                            double thickness, Material material,
                            std::optional<double> boundary_margin = std::nullopt) {
  SheetSpec s{std::move(name), lx_init, ly_init, ribbon_width,
              boundary_margin.value_or(ribbon_width), thickness, material};
  validate(s);
  return s;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const SheetSpec& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["lx_init"] = s.lx_init;
  j["ly_init"] = s.ly_init;
  j["ribbon_width"] = s.ribbon_width;
  j["boundary_margin"] = s.boundary_margin;
  j["thickness"] = s.thickness;
  j["material"] = std::string(to_string(s.material));
  return nlohmann::json(j);
}

inline SheetSpec sheet_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{"name",      "lx_init",   "ly_init", "ribbon_width",
                                           "boundary_margin", "thickness", "material"};
  if (!j.is_object()) throw Error(ErrorKind::InvalidSpec, "sheet spec must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw Error(ErrorKind::InvalidSpec, "unknown field '" + key + "'");

  auto number = [&](const char* key) -> double {
    if (!j.contains(key)) throw Error(ErrorKind::InvalidSpec, std::string("missing field '") + key + "'");
    if (!j.at(key).is_number()) throw Error(ErrorKind::InvalidSpec, std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  if (!j.contains("name") || !j.at("name").is_string())
    throw Error(ErrorKind::InvalidSpec, "field 'name' must be a string");
  if (!j.contains("material") || !j.at("material").is_string())
    throw Error(ErrorKind::InvalidSpec, "field 'material' must be a string");

  std::optional<double> margin;
  if (j.contains("boundary_margin")) margin = number("boundary_margin");
  return make_sheet(j.at("name").get<std::string>(), number("lx_init"), number("ly_init"),
                    number("ribbon_width"), number("thickness"),
                    parse_material(j.at("material").get<std::string>()), margin);
}

inline SheetSpec load_sheet(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open sheet spec '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidSpec, path.string() + ": " + e.what());
  }
  return sheet_from_json(j);
}

// ---------------------------------------------------------------------------
// Specimens A-E. A-C share a circular boundary of radius 23.5 mm; D and E
// use the 17.8 x 26.7 mm ellipse, pulled along the 17.8 mm axis.

namespace presets {

inline SheetSpec sheet(char id) {
  switch (id) {
    case 'A': return make_sheet("A", 47.0, 47.0, 2.0, 0.25, Material::PET);
    case 'B': return make_sheet("B", 47.0, 47.0, 2.0, 0.15, Material::PET);
    case 'C': return make_sheet("C", 47.0, 47.0, 2.0, 1.0, Material::TPU);
    case 'D': return make_sheet("D", 17.8, 26.7, 2.0, 0.25, Material::PET);
    case 'E': return make_sheet("E", 17.8, 26.7, 1.0, 0.25, Material::PET);
    default: break;
  }
  throw Error(ErrorKind::InvalidSpec, std::string("no preset sheet '") + id + "'");
}

inline std::array<SheetSpec, 5> all_sheets() {
  return {sheet('A'), sheet('B'), sheet('C'), sheet('D'), sheet('E')};
}

inline std::optional<SheetSpec> find_sheet(std::string_view name) {
  if (name.size() == 1 && name[0] >= 'A' && name[0] <= 'E') return sheet(name[0]);
  return std::nullopt;
}

}  // namespace presets
}  // namespace kirigami
