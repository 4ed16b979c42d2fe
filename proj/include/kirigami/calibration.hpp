#pragma once
//
// Stiffness calibration from load-cell data.
//
// For each measured displacement the linkage model supplies delta_y and
// theta, which turns the force law into one linear equation in (kx, ky):
//
//   F_i = kx * delta_x_i + ky * delta_y_i / tan(theta_i)
//
// The stacked system is solved by column-pivoted Householder QR on the
// column-normalized design matrix. Measured widths and depths never enter
// the fit; they are only scored against the geometric predictions.
//

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "boundary.hpp"
#include "errors.hpp"
#include "force.hpp"
#include "io.hpp"
#include "ribbons.hpp"
#include "sheet.hpp"

namespace kirigami {

struct Measurement {
  double delta_x = 0.0;          // mm
  std::optional<double> width;   // mm
  std::optional<double> depth;   // mm
  std::optional<double> force;   // N
};

struct MeasurementSet {
  SheetSpec sheet;
  std::vector<Measurement> rows;  // strictly increasing delta_x
};

struct ForceSample {
  double delta_x;  // mm
  double force;    // N
};

inline void validate(const MeasurementSet& data) {
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const double dx = data.rows[i].delta_x;
    if (!(dx >= 0.0)) throw Error(ErrorKind::SchemaError, "delta_x must be non-negative");
    if (i > 0 && !(dx > data.rows[i - 1].delta_x))
      throw Error(ErrorKind::SchemaError, "delta_x values must be strictly increasing");
  }
}

inline std::vector<ForceSample> force_samples(const MeasurementSet& data) {
  std::vector<ForceSample> out;
  for (const auto& r : data.rows)
    if (r.force) out.push_back({r.delta_x, *r.force});
  return out;
}

/// Design-matrix row (delta_x [m], delta_y / tan(theta) [m]) for one displacement.
inline std::array<double, 2> force_regressors(const SheetSpec& spec, double delta_x) {
  const DeformedState s = deform(spec, delta_x);
  return {s.delta_x * kMillimetre, ribbon_lever(s)};
}

inline bool has_negative(const SpringConstants& k) { return k.kx < 0.0 || k.ky < 0.0; }

inline SpringConstants fit_spring_constants(const SheetSpec& spec, std::span<const ForceSample> samples) {
  if (samples.size() < 2)
    throw Error(ErrorKind::InsufficientData,
                "need at least 2 force rows to fit kx and ky, got " + std::to_string(samples.size()));

  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = force_regressors(spec, samples[static_cast<std::size_t>(i)].delta_x);
    design(i, 0) = row[0];
    design(i, 1) = row[1];
    rhs(i) = samples[static_cast<std::size_t>(i)].force;
  }

  const Eigen::Vector2d scale = design.colwise().norm().transpose();
  if (!(scale(0) > 0.0) || !(scale(1) > 0.0))
    throw Error(ErrorKind::SingularDesign, "a regressor column is identically zero (no displacement)");
  design.col(0) /= scale(0);
  design.col(1) /= scale(1);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 2) throw Error(ErrorKind::SingularDesign, "regressors are collinear");
  const Eigen::Vector2d k = qr.solve(rhs);
  return {k(0) / scale(0), k(1) / scale(1)};
}

inline SpringConstants fit_spring_constants(const MeasurementSet& data) {
  const auto samples = force_samples(data);
  return fit_spring_constants(data.sheet, samples);
}

// ---------------------------------------------------------------------------
// Leave-one-out cross-validation

struct LoocvRow {
  std::size_t index;  // position in the input samples
  double predicted;   // N
  double actual;      // N
  double abs_error;   // N
};

struct LoocvResult {
  std::vector<LoocvRow> rows;
  double mae = 0.0;  // N
};

inline LoocvResult loocv(const SheetSpec& spec, std::span<const ForceSample> samples) {
  if (samples.size() < 3)
    throw Error(ErrorKind::InsufficientData,
                "LOOCV needs at least 3 force rows, got " + std::to_string(samples.size()));
  LoocvResult out;
  std::vector<ForceSample> train;
  train.reserve(samples.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    train.clear();
    for (std::size_t j = 0; j < samples.size(); ++j)
      if (j != i) train.push_back(samples[j]);
    const SpringConstants k = fit_spring_constants(spec, train);
    const double predicted = tensile_force(deform(spec, samples[i].delta_x), k);
    const double err = std::abs(predicted - samples[i].force);
    out.rows.push_back({i, predicted, samples[i].force, err});
    total += err;
  }
  out.mae = total / static_cast<double>(samples.size());
  return out;
}

inline LoocvResult loocv(const MeasurementSet& data) {
  const auto samples = force_samples(data);
  return loocv(data.sheet, samples);
}

// ---------------------------------------------------------------------------
// Error metrics

/// MAE and coefficient of determination 1 - SS_res / SS_tot. r2 is empty
/// when the measured column has zero variance.
struct ErrorMetric {
  std::size_t count = 0;
  double mae = 0.0;
  std::optional<double> r2;
};

inline ErrorMetric score(std::span<const double> measured, std::span<const double> predicted) {
  ErrorMetric m;
  m.count = measured.size();
  if (measured.empty()) return m;
  double mean = 0.0;
  for (double v : measured) mean += v;
  mean /= static_cast<double>(measured.size());
  double abs_sum = 0.0, ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const double r = measured[i] - predicted[i];
    abs_sum += std::abs(r);
    ss_res += r * r;
    ss_tot += (measured[i] - mean) * (measured[i] - mean);
  }
  m.mae = abs_sum / static_cast<double>(measured.size());
  if (ss_tot > 0.0) m.r2 = 1.0 - ss_res / ss_tot;
  return m;
}

struct GeometryMetrics {
  std::optional<ErrorMetric> width;  // measured width vs model ly
  std::optional<ErrorMetric> depth;  // measured depth vs model lz
};

/// Rows with delta_x below min_displacement are skipped.
inline GeometryMetrics geometry_metrics(const MeasurementSet& data, double min_displacement = 0.0) {
  std::vector<double> w_meas, w_pred, d_meas, d_pred;
  bool any_width = false, any_depth = false;
  for (const auto& r : data.rows) {
    any_width |= r.width.has_value();
    any_depth |= r.depth.has_value();
    if (r.delta_x < min_displacement || (!r.width && !r.depth)) continue;
    const DeformedState s = deform_with_depth(data.sheet, r.delta_x);
    if (r.width) {
      w_meas.push_back(*r.width);
      w_pred.push_back(s.ly);
    }
    if (r.depth) {
      d_meas.push_back(*r.depth);
      d_pred.push_back(s.lz);
    }
  }
  if (!any_width && !any_depth)
    throw Error(ErrorKind::MissingColumn, "no width_mm or depth_mm values to score");
  GeometryMetrics g;
  if (any_width) g.width = score(w_meas, w_pred);
  if (any_depth) g.depth = score(d_meas, d_pred);
  return g;
}

struct FitReport {
  std::optional<SpringConstants> constants;
  std::vector<double> residuals;  // measured - predicted force, N, per force row
  std::optional<ErrorMetric> force;
  std::optional<ErrorMetric> width;
  std::optional<ErrorMetric> depth;
  std::vector<std::string> warnings;
};

/// Fits when force rows exist and scores geometry when width/depth rows exist.
inline FitReport make_fit_report(const MeasurementSet& data, double min_displacement = 0.0) {
  FitReport rep;
  const auto samples = force_samples(data);
  bool any_geometry = false;
  for (const auto& r : data.rows) any_geometry |= r.width || r.depth;
  if (samples.empty() && !any_geometry)
    throw Error(ErrorKind::MissingColumn, "no force_n, width_mm or depth_mm values present");

  if (!samples.empty()) {
    const SpringConstants k = fit_spring_constants(data.sheet, samples);
    rep.constants = k;
    std::vector<double> measured, predicted;
    for (const auto& s : samples) {
      const double f = tensile_force(deform(data.sheet, s.delta_x), k);
      measured.push_back(s.force);
      predicted.push_back(f);
      rep.residuals.push_back(s.force - f);
    }
    rep.force = score(measured, predicted);
    if (has_negative(k)) rep.warnings.push_back("fitted spring constant is negative; model may not suit this data");
  }
  if (any_geometry) {
    const GeometryMetrics g = geometry_metrics(data, min_displacement);
    rep.width = g.width;
    rep.depth = g.depth;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// CSV: delta_x_mm,width_mm,depth_mm,force_n

inline constexpr std::string_view kMeasurementHeader = "delta_x_mm,width_mm,depth_mm,force_n";

/// Parses measurement CSV text. Rows may come in any order; they are
/// sorted by delta_x and duplicates are rejected.
inline MeasurementSet parse_measurements(const SheetSpec& sheet, std::string_view text) {
  static constexpr std::string_view kColumns[] = {"delta_x_mm", "width_mm", "depth_mm", "force_n"};
  MeasurementSet data{sheet, {}};
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> Error {
    return Error(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": " + what);
  };
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') throw fail("CR line ending (LF required)");
    if (line_no == 1) {
      if (line != kMeasurementHeader)
        throw fail("header must be exactly '" + std::string(kMeasurementHeader) + "'");
      continue;
    }
    if (line.empty()) {
      if (pos >= text.size()) break;
      throw fail("empty line");
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) throw fail("expected 4 columns, got " + std::to_string(fields.size()));
    Measurement m;
    std::optional<double> values[4];
    for (std::size_t c = 0; c < 4; ++c) {
      if (fields[c].empty()) continue;
      values[c] = io::parse_double(fields[c]);
      if (!values[c])
        throw fail("column " + std::string(kColumns[c]) + ": '" + std::string(fields[c]) + "' is not a number");
    }
    if (!values[0]) throw fail("column delta_x_mm: value required");
    if (*values[0] < 0.0) throw fail("column delta_x_mm: must be non-negative");
    m.delta_x = *values[0];
    m.width = values[1];
    m.depth = values[2];
    m.force = values[3];
    data.rows.push_back(m);
  }
  if (line_no == 0) throw Error(ErrorKind::SchemaError, "line 1: empty file (header required)");
  std::stable_sort(data.rows.begin(), data.rows.end(),
                   [](const Measurement& a, const Measurement& b) { return a.delta_x < b.delta_x; });
  for (std::size_t i = 1; i < data.rows.size(); ++i)
    if (data.rows[i].delta_x == data.rows[i - 1].delta_x)
      throw Error(ErrorKind::SchemaError, "duplicate delta_x_mm value " + io::format_double(data.rows[i].delta_x));
  return data;
}

inline MeasurementSet load_measurements(const SheetSpec& sheet, const std::filesystem::path& path) {
  return parse_measurements(sheet, io::read_text_file(path));
}

inline std::string format_measurements(const MeasurementSet& data) {
  std::string out(kMeasurementHeader);
  out += '\n';
  auto opt = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); };
  for (const auto& r : data.rows)
    out += io::format_double(r.delta_x) + ',' + opt(r.width) + ',' + opt(r.depth) + ',' + opt(r.force) + '\n';
  return out;
}

/// Model-generated measurements (width, depth, force) at the given displacements.
inline MeasurementSet synthesize_measurements(const SheetSpec& sheet, const SpringConstants& k,
                                              std::span<const double> displacements) {
  MeasurementSet data{sheet, {}};
  for (double dx : displacements) {
    const DeformedState s = deform_with_depth(sheet, dx);
    data.rows.push_back({dx, s.ly, s.lz, tensile_force(s, k)});
  }
  validate(data);
  return data;
}

}  // namespace kirigami
