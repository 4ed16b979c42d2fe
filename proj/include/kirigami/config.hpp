#pragma once
//
// JSON inputs: spring-constant files, grasp requirements and design grids.
//

#include <cmath>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "design.hpp"
#include "errors.hpp"
#include "force.hpp"
#include "io.hpp"
#include "sheet.hpp"

namespace kirigami {

namespace detail {

inline nlohmann::json parse_json_file(const std::filesystem::path& path, ErrorKind kind) {
  const std::string text = io::read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(kind, path.string() + ": " + e.what());
  }
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const char* where,
                           ErrorKind kind) {
  if (!j.is_object()) throw Error(kind, std::string(where) + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw Error(kind, std::string("unknown field '") + key + "' in " + where);
}

inline double get_number(const nlohmann::json& j, const char* key, ErrorKind kind) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw Error(kind, std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace detail

inline SpringConstants constants_from_json(const nlohmann::json& j) {
  return {detail::get_number(j, "kx", ErrorKind::UnknownConstants),
          detail::get_number(j, "ky", ErrorKind::UnknownConstants)};
}

/// Reference table file: {"A": {"material": ..., "thickness": ..., "ribbon_width": ..., "kx": ..., "ky": ...}, ...}
inline nlohmann::ordered_json reference_table_json() {
  nlohmann::ordered_json j;
  auto verbatim = [](double v) { return io::format_double(v) + " mm"; };
  for (const auto& row : kReferenceTable) {
    nlohmann::ordered_json e;
    e["material"] = std::string(to_string(row.material));
    e["thickness"] = verbatim(row.thickness);
    e["ribbon_width"] = verbatim(row.ribbon_width);
    e["kx"] = row.k.kx;
    e["ky"] = row.k.ky;
    j[std::string(row.sheet)] = e;
  }
  return j;
}

/// Resolves `--constants <name|path>`. A path may hold a single
/// {"kx", "ky"} object or a table keyed by sheet name, in which case
/// `sheet_name` selects the row.
inline SpringConstants load_constants(const std::string& name_or_path, const std::string& sheet_name,
                                      std::string* resolved_name = nullptr) {
  if (auto k = reference_constants(name_or_path)) {
    if (resolved_name) *resolved_name = name_or_path;
    return *k;
  }
  if (!std::filesystem::exists(name_or_path))
    throw Error(ErrorKind::UnknownConstants,
                "'" + name_or_path + "' is neither a reference sheet name (A-E) nor a file");
  const auto j = detail::parse_json_file(name_or_path, ErrorKind::UnknownConstants);
  if (j.is_object() && j.contains("kx")) {
    if (resolved_name) *resolved_name = "";
    return constants_from_json(j);
  }
  if (j.is_object() && j.contains(sheet_name)) {
    if (resolved_name) *resolved_name = sheet_name;
    return constants_from_json(j.at(sheet_name));
  }
  throw Error(ErrorKind::UnknownConstants, "no constants for sheet '" + sheet_name + "' in " + name_or_path);
}

inline GraspRequirement requirement_from_json(const nlohmann::json& j) {
  detail::reject_unknown(j, {"food_width", "food_depth", "force_budget"}, "requirement",
                         ErrorKind::InvalidRequirement);
  GraspRequirement r{detail::get_number(j, "food_width", ErrorKind::InvalidRequirement),
                     detail::get_number(j, "food_depth", ErrorKind::InvalidRequirement),
                     detail::get_number(j, "force_budget", ErrorKind::InvalidRequirement)};
  validate(r);
  return r;
}

/// A grid axis is a list of values or {"start", "stop", "step"} (inclusive).
inline std::vector<double> axis_from_json(const nlohmann::json& j, const char* axis) {
  std::vector<double> out;
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) throw Error(ErrorKind::InvalidRequirement, std::string(axis) + " values must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  detail::reject_unknown(j, {"start", "stop", "step"}, axis, ErrorKind::InvalidRequirement);
  const double start = detail::get_number(j, "start", ErrorKind::InvalidRequirement);
  const double stop = detail::get_number(j, "stop", ErrorKind::InvalidRequirement);
  const double step = detail::get_number(j, "step", ErrorKind::InvalidRequirement);
  if (!(step > 0.0) || stop < start)
    throw Error(ErrorKind::InvalidRequirement, std::string(axis) + ": need step > 0 and stop >= start");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

inline SpecGrid grid_from_json(const nlohmann::json& j) {
  detail::reject_unknown(j,
                         {"name", "material", "thickness", "boundary_margin", "lx_init", "ly_init", "ribbon_width"},
                         "grid", ErrorKind::InvalidRequirement);
  SpecGrid g;
  if (j.contains("name")) g.name = j.at("name").get<std::string>();
  if (j.contains("material")) g.material = parse_material(j.at("material").get<std::string>());
  if (j.contains("thickness")) g.thickness = detail::get_number(j, "thickness", ErrorKind::InvalidRequirement);
  if (j.contains("boundary_margin"))
    g.boundary_margin = detail::get_number(j, "boundary_margin", ErrorKind::InvalidRequirement);
  for (const char* axis : {"lx_init", "ly_init", "ribbon_width"})
    if (!j.contains(axis)) throw Error(ErrorKind::InvalidRequirement, std::string("grid missing '") + axis + "'");
  g.lx_init = axis_from_json(j.at("lx_init"), "lx_init");
  g.ly_init = axis_from_json(j.at("ly_init"), "ly_init");
  g.ribbon_width = axis_from_json(j.at("ribbon_width"), "ribbon_width");
  return g;
}

/// Parsed design request file.
struct DesignRequest {
  GraspRequirement requirement;
  std::optional<SpecGrid> grid;
  std::optional<std::string> constants;  // sheet name, path, "nearest" or "thickness-scaled"
  std::optional<nlohmann::json> inline_constants;
  std::optional<double> grid_step;
};

inline DesignRequest design_request_from_json(const nlohmann::json& j) {
  detail::reject_unknown(j, {"requirement", "grid", "constants", "grid_step"}, "design request",
                         ErrorKind::InvalidRequirement);
  if (!j.contains("requirement")) throw Error(ErrorKind::InvalidRequirement, "missing 'requirement'");
  DesignRequest r;
  r.requirement = requirement_from_json(j.at("requirement"));
  if (j.contains("grid")) r.grid = grid_from_json(j.at("grid"));
  if (j.contains("constants")) {
    if (j.at("constants").is_string())
      r.constants = j.at("constants").get<std::string>();
    else
      r.inline_constants = j.at("constants");
  }
  if (j.contains("grid_step")) r.grid_step = detail::get_number(j, "grid_step", ErrorKind::InvalidRequirement);
  return r;
}

inline DesignRequest load_design_request(const std::filesystem::path& path) {
  return design_request_from_json(detail::parse_json_file(path, ErrorKind::InvalidRequirement));
}

}  // namespace kirigami
