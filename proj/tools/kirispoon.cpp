// kirispoon: command-line front end for the kirigami sheet model.
//
// Exit codes: 0 success, 2 input/validation error, 3 numeric failure,
// 4 I/O error.

#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kirigami/kirigami.hpp"

namespace {

using namespace kirigami;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IoError: return kExitIo;
    case ErrorKind::SingularDesign:
    case ErrorKind::DegenerateAngle:
    case ErrorKind::FlatRibbon: return kExitNumeric;
    default: return kExitInput;
  }
}

struct Options {
  std::string spec_path;
  std::string csv_path;
  std::string request_path;
  std::optional<double> delta_x;
  std::string sweep;
  std::string constants;
  std::string format = "text";
  double min_displacement = 0.0;
  double grid_step = kDefaultGridStep;
  bool grid_step_set = false;
  int samples = 41;
  std::string out;
  bool ribbon_strips = false;
  double noise = 0.0;
  unsigned seed = 1;
};

// "start:stop:step", stop inclusive.
std::vector<double> parse_sweep(const std::string& text) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    const auto field = text.substr(start, colon == std::string::npos ? std::string::npos : colon - start);
    const auto v = io::parse_double(field);
    if (!v) throw Error(ErrorKind::SchemaError, "--sweep expects start:stop:step in mm, got '" + text + "'");
    parts.push_back(*v);
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0] || parts[0] < 0.0)
    throw Error(ErrorKind::SchemaError, "--sweep expects start:stop:step with step > 0, stop >= start >= 0");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return out;
}

std::vector<double> displacements(const Options& o) {
  if (o.delta_x && !o.sweep.empty()) throw Error(ErrorKind::SchemaError, "use either --delta-x or --sweep");
  if (o.delta_x) return {*o.delta_x};
  if (!o.sweep.empty()) return parse_sweep(o.sweep);
  throw Error(ErrorKind::SchemaError, "one of --delta-x or --sweep is required");
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text;
  else
    io::write_text_file(o.out, text);
}

// Columns of equal width for human-readable tables.
std::string text_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c)
      os << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << cells[c];
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) out += (c ? "," : "") + cells[c];
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string render(const Options& o, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows, const std::vector<std::vector<double>>& values) {
  if (o.format == "csv") return csv_table(header, rows);
  if (o.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : values) {
      ordered_json obj;
      for (std::size_t c = 0; c < header.size(); ++c) obj[header[c]] = r[c];
      arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
  }
  return text_table(header, rows);
}

std::vector<std::string> formatted(const std::vector<double>& values) {
  std::vector<std::string> out;
  for (double v : values) out.push_back(io::format_fixed(v, 6));
  return out;
}

SpringConstants constants_for(const Options& o, const SheetSpec& spec) {
  if (o.constants.empty())
    throw Error(ErrorKind::UnknownConstants, "--constants <name|path> is required");
  std::string resolved;
  const SpringConstants k = load_constants(o.constants, spec.name, &resolved);
  if (!resolved.empty() && resolved != spec.name)
    std::cerr << "warning: constants for sheet '" << resolved << "' applied to sheet '" << spec.name << "'\n";
  return k;
}

int cmd_deform(const Options& o) {
  const SheetSpec spec = load_sheet(o.spec_path);
  const std::vector<std::string> header{"delta_x_mm", "lx_mm", "ly_mm", "lz_mm", "theta_rad", "delta_y_mm"};
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<double>> values;
  for (double dx : displacements(o)) {
    const DeformedState s = deform_with_depth(spec, dx);
    values.push_back({s.delta_x, s.lx, s.ly, s.lz, s.theta, s.delta_y});
    rows.push_back(formatted(values.back()));
  }
  emit(o, render(o, header, rows, values));
  return kExitOk;
}

int cmd_force(const Options& o) {
  const SheetSpec spec = load_sheet(o.spec_path);
  const SpringConstants k = constants_for(o, spec);
  const std::vector<std::string> header{"delta_x_mm", "force_n"};
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<double>> values;
  for (const auto& p : force_curve(spec, k, displacements(o))) {
    values.push_back({p.delta_x, p.force});
    rows.push_back(formatted(values.back()));
  }
  emit(o, render(o, header, rows, values));
  return kExitOk;
}

ordered_json metric_json(const std::optional<ErrorMetric>& m) {
  if (!m) return nullptr;
  ordered_json j;
  j["count"] = m->count;
  j["mae"] = m->mae;
  j["r2"] = m->r2 ? ordered_json(*m->r2) : ordered_json(nullptr);
  j["r2_defined"] = m->r2.has_value();
  return j;
}

std::string metric_text(const char* label, const char* unit, const std::optional<ErrorMetric>& m) {
  std::ostringstream os;
  if (!m) return "";
  os << label << ": MAE " << io::format_fixed(m->mae, 6) << ' ' << unit << ", R^2 "
     << (m->r2 ? io::format_fixed(*m->r2, 6) : std::string("undefined (constant measurements)")) << " (n = "
     << m->count << ")\n";
  return os.str();
}

int cmd_fit(const Options& o) {
  const SheetSpec spec = load_sheet(o.spec_path);
  const MeasurementSet data = load_measurements(spec, o.csv_path);
  const FitReport rep = make_fit_report(data, o.min_displacement);

  ordered_json j;
  j["sheet"] = spec.name;
  if (rep.constants) {
    j["constants"] = {{"kx", rep.constants->kx}, {"ky", rep.constants->ky}};
  } else {
    j["constants"] = nullptr;
  }
  j["residuals_n"] = rep.residuals;
  j["force"] = metric_json(rep.force);
  j["width"] = metric_json(rep.width);
  j["depth"] = metric_json(rep.depth);
  j["min_displacement_mm"] = o.min_displacement;
  j["warnings"] = rep.warnings;
  const std::string json_text = j.dump(2) + "\n";

  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  if (!o.out.empty()) io::write_text_file(o.out, json_text);
  if (o.format == "json") {
    std::cout << json_text;
    return kExitOk;
  }
  std::ostringstream os;
  os << "sheet " << spec.name << '\n';
  if (rep.constants)
    os << "kx = " << io::format_fixed(rep.constants->kx, 4) << " N/m, ky = " << io::format_fixed(rep.constants->ky, 4)
       << " N/m\n";
  os << metric_text("force", "N", rep.force) << metric_text("width", "mm", rep.width)
     << metric_text("depth", "mm", rep.depth);
  std::cout << os.str();
  return kExitOk;
}

int cmd_loocv(const Options& o) {
  const SheetSpec spec = load_sheet(o.spec_path);
  const MeasurementSet data = load_measurements(spec, o.csv_path);
  const auto samples = force_samples(data);
  const LoocvResult res = loocv(spec, samples);

  if (o.format == "json") {
    ordered_json j;
    j["sheet"] = spec.name;
    j["rows"] = ordered_json::array();
    for (const auto& r : res.rows)
      j["rows"].push_back({{"delta_x_mm", samples[r.index].delta_x},
                           {"predicted_n", r.predicted},
                           {"actual_n", r.actual},
                           {"abs_error_n", r.abs_error}});
    j["mae_n"] = res.mae;
    emit(o, j.dump(2) + "\n");
    return kExitOk;
  }
  const std::vector<std::string> header{"delta_x_mm", "predicted_n", "actual_n", "abs_error_n"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : res.rows) rows.push_back(formatted({samples[r.index].delta_x, r.predicted, r.actual, r.abs_error}));
  std::string text = o.format == "csv" ? csv_table(header, rows) : text_table(header, rows);
  text += (o.format == "csv" ? "# mae_n," : "MAE ") + io::format_fixed(res.mae, 9) + (o.format == "csv" ? "\n" : " N\n");
  emit(o, text);
  return kExitOk;
}

int cmd_mesh(const Options& o) {
  const SheetSpec spec = load_sheet(o.spec_path);
  if (!o.delta_x) throw Error(ErrorKind::SchemaError, "--delta-x is required");
  if (o.out.empty()) throw Error(ErrorKind::SchemaError, "--out <file.obj|file.csv> is required");
  const ShapeModel model = build_shape(spec, *o.delta_x, o.samples);
  const std::string ext = std::filesystem::path(o.out).extension().string();
  if (ext == ".obj")
    export_obj(model, o.out, o.ribbon_strips);
  else if (ext == ".csv")
    export_csv_pointcloud(model, o.out);
  else
    throw Error(ErrorKind::SchemaError, "--out must end in .obj or .csv");
  return kExitOk;
}

ConstantsStrategy strategy_from(const std::string& source, const std::optional<nlohmann::json>& inline_k,
                                const std::string& sheet_name) {
  ConstantsStrategy st;
  if (inline_k) {
    st.fixed = constants_from_json(*inline_k);
  } else if (source == "nearest") {
    st.source = ConstantsSource::NearestPreset;
  } else if (source == "thickness-scaled") {
    st.source = ConstantsSource::ThicknessScaled;
  } else if (!source.empty()) {
    st.fixed = load_constants(source, sheet_name);
  }
  return st;
}

int cmd_design(const Options& o) {
  const DesignRequest req = load_design_request(o.request_path);
  const double step = o.grid_step_set ? o.grid_step : req.grid_step.value_or(kDefaultGridStep);
  const std::string source = !o.constants.empty() ? o.constants : req.constants.value_or("");
  const auto inline_k = o.constants.empty() ? req.inline_constants : std::nullopt;

  SweepResult result;
  if (!o.spec_path.empty()) {
    const SheetSpec spec = load_sheet(o.spec_path);
    const SpringConstants k = resolve_constants(spec, strategy_from(source, inline_k, spec.name));
    DesignCandidate c = evaluate_design(spec, k, req.requirement, step);
    (c.feasible ? result.feasible : result.infeasible).push_back(std::move(c));
  } else if (req.grid) {
    result = sweep_designs(*req.grid, strategy_from(source, inline_k, req.grid->name), req.requirement, step);
  } else {
    throw Error(ErrorKind::SchemaError, "design needs --spec or a 'grid' in the request file");
  }
  emit(o, format_design_csv(result));
  return kExitOk;
}

// Model-generated measurement CSV, optionally with Gaussian force noise.
int cmd_synth(const Options& o) {
  const SheetSpec spec = load_sheet(o.spec_path);
  const SpringConstants k = constants_for(o, spec);
  MeasurementSet data = synthesize_measurements(spec, k, displacements(o));
  if (o.noise > 0.0) {
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> noise(0.0, o.noise);
    for (auto& r : data.rows) *r.force += noise(rng);
  }
  emit(o, format_measurements(data));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kirigami sheet deformation, force, calibration and design tool.\n"
               "Lengths in mm, forces in N, stiffness in N/m."};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* cmd, std::vector<std::string> allowed) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember(allowed));
  };
  auto add_displacement = [&](CLI::App* cmd) {
    cmd->add_option("--delta-x", o.delta_x, "Slider displacement delta_x [mm]");
    cmd->add_option("--sweep", o.sweep, "Displacement sweep start:stop:step [mm], stop inclusive");
  };
  auto add_out = [&](CLI::App* cmd, const char* what) { cmd->add_option("--out", o.out, what); };

  auto* deform_cmd = app.add_subcommand("deform", "Deformed geometry (lx, ly, lz [mm], theta [rad], delta_y [mm])");
  deform_cmd->add_option("spec", o.spec_path, "Sheet spec JSON")->required();
  add_displacement(deform_cmd);
  add_format(deform_cmd, {"text", "csv", "json"});
  add_out(deform_cmd, "Write the table to this file instead of stdout");

  auto* force_cmd = app.add_subcommand("force", "Predicted tensile force [N] for displacements [mm]");
  force_cmd->add_option("spec", o.spec_path, "Sheet spec JSON")->required();
  force_cmd->add_option("--constants", o.constants, "Reference sheet A-E or JSON file with kx, ky [N/m]");
  add_displacement(force_cmd);
  add_format(force_cmd, {"text", "csv", "json"});
  add_out(force_cmd, "Write the table to this file instead of stdout");

  auto* fit_cmd = app.add_subcommand("fit", "Least-squares fit of kx, ky [N/m] from measurement CSV");
  fit_cmd->add_option("spec", o.spec_path, "Sheet spec JSON")->required();
  fit_cmd->add_option("csv", o.csv_path, "Measurements: delta_x_mm,width_mm,depth_mm,force_n")->required();
  fit_cmd->add_option("--min-displacement", o.min_displacement,
                      "Skip rows below this delta_x [mm] in width/depth metrics");
  add_format(fit_cmd, {"text", "json"});
  add_out(fit_cmd, "Write the JSON report to this file");

  auto* loocv_cmd = app.add_subcommand("loocv", "Leave-one-out force prediction errors [N]");
  loocv_cmd->add_option("spec", o.spec_path, "Sheet spec JSON")->required();
  loocv_cmd->add_option("csv", o.csv_path, "Measurements: delta_x_mm,width_mm,depth_mm,force_n")->required();
  add_format(loocv_cmd, {"text", "csv", "json"});
  add_out(loocv_cmd, "Write the table to this file instead of stdout");

  auto* mesh_cmd = app.add_subcommand("mesh", "Export the deformed shape (mm) as OBJ or CSV point cloud");
  mesh_cmd->add_option("spec", o.spec_path, "Sheet spec JSON")->required();
  mesh_cmd->add_option("--delta-x", o.delta_x, "Slider displacement delta_x [mm]");
  mesh_cmd->add_option("--samples", o.samples, "Samples per ribbon (>= 3)")->check(CLI::Range(3, 100000));
  mesh_cmd->add_flag("--ribbon-strips", o.ribbon_strips, "OBJ only: add approximate quad strips of ribbon width");
  add_out(mesh_cmd, "Output file; .obj or .csv selects the format");

  auto* design_cmd = app.add_subcommand("design", "Find designs meeting food width/depth [mm] within a force budget [N]");
  design_cmd->add_option("request", o.request_path, "Requirement (+ optional grid) JSON")->required();
  design_cmd->add_option("--spec", o.spec_path, "Evaluate this single sheet instead of the request's grid");
  design_cmd->add_option("--constants", o.constants,
                         "Sheet A-E, JSON file with kx, ky [N/m], 'nearest' or 'thickness-scaled' (heuristic)");
  design_cmd->add_option("--grid-step", o.grid_step, "Displacement scan step [mm]")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { o.grid_step_set = true; });
  add_out(design_cmd, "Write the candidate CSV to this file instead of stdout");

  auto* synth_cmd = app.add_subcommand("synth", "Model-generated measurement CSV (optionally noisy forces [N])");
  synth_cmd->add_option("spec", o.spec_path, "Sheet spec JSON")->required();
  synth_cmd->add_option("--constants", o.constants, "Reference sheet A-E or JSON file with kx, ky [N/m]");
  add_displacement(synth_cmd);
  synth_cmd->add_option("--noise", o.noise, "Gaussian force noise standard deviation [N]")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", o.seed, "Noise seed");
  add_out(synth_cmd, "Write the CSV to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (deform_cmd->parsed()) return cmd_deform(o);
    if (force_cmd->parsed()) return cmd_force(o);
    if (fit_cmd->parsed()) return cmd_fit(o);
    if (loocv_cmd->parsed()) return cmd_loocv(o);
    if (mesh_cmd->parsed()) return cmd_mesh(o);
    if (design_cmd->parsed()) return cmd_design(o);
    if (synth_cmd->parsed()) return cmd_synth(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
