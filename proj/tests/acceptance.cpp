// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kirigami/kirigami.hpp"
#include "oracles.hpp"

using namespace kirigami;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const SpringConstants kSheetE{171.78, 9.25};
const std::vector<double> kSweep{2.5, 5.0, 7.5, 10.0, 12.5};

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// 1. Geometry invariants over random sheets and displacements.
void geometry_invariants(Check& c) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  int pairs = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto spec = oracle::random_sheet(rng);
    const double limit = max_displacement(spec);
    std::uniform_real_distribution<double> u(0.0, limit);
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double link = link_length(spec);
    for (double dx : {a, b}) {
      const auto s = deform(spec, dx);
      worst = std::max(worst, std::abs(std::hypot(s.lx / 2.0, s.ly / 2.0) - link) / link);
      ++pairs;
    }
    c.require(deform(spec, 0.0).ly == spec.ly_init, "ly(0) == ly_init");
    if (a < b) c.require(deform(spec, a).ly > deform(spec, b).ly, "ly strictly decreasing");
  }
  const double t = seconds_since(t0);
  c.require(worst <= 1e-9, "link conservation 1e-9");
  c.require(t < 1.0, "runtime < 1 s");
  c.detail << pairs << " pairs, worst link error " << num(worst) << ", " << num(t) << " s";
}

// 2. Catenary root, sag cross-check and arc length.
void catenary_oracles(Check& c) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> len(0.5, 60.0), ratio(1e-3, 1.0);
  double worst_res = 0.0, worst_dz = 0.0, worst_arc = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double L = len(rng);
    const double dy = L * ratio(rng);
    if (!(dy < L)) continue;
    const auto cur = solve_catenary(L, dy);
    worst_res = std::max(worst_res, std::abs(2.0 * cur.a * std::sinh(dy / (2.0 * cur.a)) - L) / L);
    worst_dz = std::max(worst_dz, std::abs(sag_from_shape(cur.a, dy) - cur.dz) / cur.dz);
    worst_arc = std::max(worst_arc, std::abs(oracle::profile_arc_length(cur, 2001) - L) / L);
  }
  const double t = seconds_since(t0);
  c.require(worst_res <= 1e-10, "length residual 1e-10");
  c.require(worst_dz <= 1e-9, "sag cross-check 1e-9");
  c.require(worst_arc <= 1e-6, "arc length 1e-6");
  c.require(t < 2.0, "runtime < 2 s");
  c.detail << "worst residual " << num(worst_res) << ", sag " << num(worst_dz) << ", arc " << num(worst_arc) << ", "
           << num(t) << " s";
}

std::vector<ForceSample> oracle_samples(const SheetSpec& spec, const SpringConstants& k,
                                        const std::vector<double>& dxs) {
  std::vector<ForceSample> out;
  for (double dx : dxs) {
    const auto r = oracle::regressors(spec.lx_init, spec.ly_init, dx);
    out.push_back({dx, k.kx * r[0] + k.ky * r[1]});
  }
  return out;
}

// 3. Noiseless refit of the sheet-E constants.
void fit_recovery(Check& c) {
  const auto e = presets::sheet('E');
  const auto samples = oracle_samples(e, kSheetE, kSweep);
  const auto k = fit_spring_constants(e, samples);
  const double ex = std::abs(k.kx - kSheetE.kx) / kSheetE.kx, ey = std::abs(k.ky - kSheetE.ky) / kSheetE.ky;
  const double mae = loocv(e, samples).mae;
  c.require(ex <= 1e-6 && ey <= 1e-6, "recovery 1e-6");
  c.require(mae <= 1e-9, "LOOCV MAE <= 1e-9 N");
  c.detail << "kx " << k.kx << ", ky " << k.ky << ", LOOCV MAE " << num(mae) << " N";
}

// 4. LOOCV under Gaussian force noise.
void noise_robustness(Check& c) {
  const auto e = presets::sheet('E');
  const double sigma = 0.2;
  const int seeds = 200;
  const auto clean = oracle_samples(e, kSheetE, kSweep);

  // Expected LOOCV MAE: held-out residual i is N(0, sigma^2 / (1 - h_ii)).
  std::vector<std::array<double, 2>> rows;
  for (double dx : kSweep) rows.push_back(oracle::regressors(e.lx_init, e.ly_init, dx));
  double s00 = 0, s01 = 0, s11 = 0;
  for (const auto& r : rows) {
    s00 += r[0] * r[0];
    s01 += r[0] * r[1];
    s11 += r[1] * r[1];
  }
  const double det = s00 * s11 - s01 * s01;
  double expected = 0.0;
  for (const auto& r : rows) {
    const double h = (r[0] * r[0] * s11 - 2.0 * r[0] * r[1] * s01 + r[1] * r[1] * s00) / det;
    expected += sigma * std::sqrt(2.0 / std::numbers::pi) / std::sqrt(1.0 - h);
  }
  expected /= static_cast<double>(rows.size());

  double total = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    std::mt19937_64 rng(static_cast<unsigned>(seed) + 1000);
    std::normal_distribution<double> noise(0.0, sigma);
    auto samples = clean;
    for (auto& s : samples) s.force += noise(rng);
    total += loocv(e, samples).mae;
  }
  const double mean = total / seeds;
  c.require(mean >= 0.5 * sigma && mean <= 3.0 * sigma, "mean LOOCV MAE in [0.5, 3] sigma");
  c.require(std::abs(mean - expected) <= 0.15 * expected, "Monte-Carlo mean within 15% of analytic expectation");
  c.detail << "sigma " << sigma << " N, " << seeds << " seeds, mean MAE " << num(mean) << " N (" << num(mean / sigma)
           << " sigma), analytic " << num(expected) << " N";
}

// 5. Sheet-E force curve: strictly increasing and convex.
void forward_curve(Check& c) {
  const auto e = presets::sheet('E');
  std::vector<double> dxs;
  for (int i = 0; i <= 50; ++i) dxs.push_back(0.25 * i);  // 0 .. 12.5 mm
  const auto curve = force_curve(e, kSheetE, dxs);
  double min_second = 1e300;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    c.require(curve[i].force > curve[i - 1].force, "strictly increasing");
    if (i + 1 < curve.size())
      min_second = std::min(min_second, curve[i + 1].force - 2.0 * curve[i].force + curve[i - 1].force);
  }
  c.require(min_second >= 0.0, "second differences >= 0");
  c.detail << "F(12.5) = " << num(curve.back().force) << " N, min second difference " << num(min_second) << " N";
}

// 6. Ordering relations on the shipped reference table.
void table_ordering(Check& c) {
  const auto j = nlohmann::json::parse(oracle::slurp(std::string(KIRIGAMI_SOURCE_DIR) + "/data/table1_constants.json"));
  auto kx = [&](const char* s) { return j.at(s).at("kx").get<double>(); };
  auto ky = [&](const char* s) { return j.at(s).at("ky").get<double>(); };
  c.require(kx("A") > kx("B"), "kx(A) > kx(B)");
  c.require(ky("D") > ky("E"), "ky(D) > ky(E)");
  c.require(kx("C") < kx("A") && kx("C") < kx("B"), "kx(C) below A and B");
  c.require(ky("C") < ky("A") && ky("C") < ky("B"), "ky(C) below A and B");
  c.require(j == nlohmann::json(reference_table_json()), "file matches built-in table");
  c.detail << "kx A/B/C = " << kx("A") << "/" << kx("B") << "/" << kx("C") << ", ky D/E = " << ky("D") << "/"
           << ky("E");
}

// 7. OBJ/CSV round trip and byte determinism.
void export_round_trip(Check& c) {
  const auto dir = std::filesystem::temp_directory_path() / "kirigami_acceptance";
  std::filesystem::create_directories(dir);
  const auto e = presets::sheet('E');
  double worst = 0.0;
  for (double dx : {0.0, 2.5, 7.5, 12.5}) {
    const auto model = build_shape(e, dx, 33);
    std::vector<Point3> pts = model.boundary_points;
    for (const auto& l : model.ribbon_polylines) pts.insert(pts.end(), l.begin(), l.end());

    export_obj(model, dir / "a.obj");
    export_obj(build_shape(e, dx, 33), dir / "b.obj");
    export_csv_pointcloud(model, dir / "a.csv");
    export_csv_pointcloud(build_shape(e, dx, 33), dir / "b.csv");
    const auto obj_text = oracle::slurp((dir / "a.obj").string());
    const auto csv_text = oracle::slurp((dir / "a.csv").string());
    c.require(obj_text == oracle::slurp((dir / "b.obj").string()), "OBJ byte-identical");
    c.require(csv_text == oracle::slurp((dir / "b.csv").string()), "CSV byte-identical");

    const auto obj = oracle::parse_obj(obj_text);
    c.require(obj.vertices.size() == pts.size(), "OBJ vertex count");
    std::istringstream csv(csv_text);
    std::string line;
    std::getline(csv, line);
    std::size_t i = 0;
    while (std::getline(csv, line) && i < pts.size()) {
      double x, y, z;
      std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &z);
      worst = std::max({worst, std::abs(x - pts[i].x), std::abs(y - pts[i].y), std::abs(z - pts[i].z)});
      ++i;
    }
    c.require(i == pts.size(), "CSV vertex count");
    for (std::size_t k = 0; k < std::min(pts.size(), obj.vertices.size()); ++k)
      worst = std::max({worst, std::abs(obj.vertices[k][0] - pts[k].x), std::abs(obj.vertices[k][1] - pts[k].y),
                        std::abs(obj.vertices[k][2] - pts[k].z)});
  }
  c.require(worst <= 1e-6, "coordinates within 1e-6 mm");
  c.detail << "worst coordinate error " << num(worst) << " mm";
}

// Dense rescan written directly against the model primitives.
std::optional<double> brute_grasp(const SheetSpec& spec, const SpringConstants& k, const GraspRequirement& req,
                                  double step) {
  const double limit = max_displacement(spec);
  for (long i = 0; static_cast<double>(i) * step <= limit; ++i) {
    const double dx = static_cast<double>(i) * step;
    const auto s = deform_with_depth(spec, dx);
    if (s.theta <= kAngleEpsilon) break;
    if (s.lz >= req.food_depth && s.ly >= req.food_width && tensile_force(s, k) <= req.force_budget) return dx;
  }
  return std::nullopt;
}

// 8. Design explorer against a 10x finer oracle, and budget monotonicity.
void design_consistency(Check& c) {
  int compared = 0;
  for (char id : {'D', 'E', 'A'}) {
    const auto spec = presets::sheet(id);
    const auto k = *reference_constants(std::string(1, id));
    for (double depth : {1.0, 3.0, 5.0, 7.0, 9.0})
      for (double budget : {0.5, 1.5, 3.0, 10.0}) {
        const GraspRequirement req{6.0, depth, budget};
        const auto coarse = evaluate_design(spec, k, req, 0.1);
        const auto fine = brute_grasp(spec, k, req, 0.01);
        ++compared;
        if (coarse.feasible) {
          c.require(fine.has_value(), "coarse feasible implies fine feasible");
          if (fine) {
            c.require(*fine <= *coarse.delta_x_grasp + 1e-9, "fine grasp not later than coarse");
            c.require(*coarse.delta_x_grasp - *fine <= 0.1 + 1e-9, "coarse within one step of fine");
          }
        } else if (fine) {
          // Only possible when the fine point lies between the last coarse point and the limit.
          c.require(*fine > max_displacement(spec) - 0.1 - 1e-9, "fine-only feasibility inside the last coarse step");
        }
      }
  }

  SpecGrid grid;
  grid.name = "g";
  grid.lx_init = {14.0, 16.0, 17.8, 20.0, 22.0};
  grid.ly_init = {22.0, 26.7, 30.0};
  grid.ribbon_width = {1.0, 2.0};
  const ConstantsStrategy st{ConstantsSource::NearestPreset, std::nullopt};
  std::size_t prev = 0;
  for (double budget : {0.3, 0.6, 1.0, 1.5, 2.5, 5.0}) {
    const auto res = sweep_designs(grid, st, {8.0, 5.0, budget});
    c.require(res.feasible.size() >= prev, "feasible set grows with budget");
    prev = res.feasible.size();
  }
  c.detail << compared << " requirement/sheet pairs vs 0.01 mm oracle; feasible count at 5 N budget " << prev << "/30";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(KIRISPOON_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 9. deform -> fit -> loocv -> mesh -> design through the CLI.
void cli_pipeline(Check& c) {
  const auto dir = std::filesystem::temp_directory_path() / "kirigami_acceptance";
  std::filesystem::create_directories(dir);
  const std::string spec = std::string(KIRIGAMI_SOURCE_DIR) + "/specs/sheet_e.json";
  const auto csv = (dir / "sheet_e.csv").string();
  io::write_text_file(csv, format_measurements(synthesize_measurements(presets::sheet('E'), kSheetE, kSweep)));
  const auto req = (dir / "req.json").string();
  io::write_text_file(req, R"({"requirement": {"food_width": 12, "food_depth": 5, "force_budget": 2}})");

  const auto t0 = Clock::now();
  const std::vector<std::string> steps{
      "deform " + spec + " --sweep 0:12.5:2.5 --format csv",
      "fit " + spec + " " + csv + " --format json --out " + (dir / "fit.json").string(),
      "loocv " + spec + " " + csv,
      "mesh " + spec + " --delta-x 7.5 --out " + (dir / "shape.obj").string(),
      "design " + req + " --spec " + spec + " --constants E --out " + (dir / "design.csv").string(),
  };
  for (const auto& s : steps) c.require(run_cli(s) == 0, "exit 0: " + s.substr(0, s.find(' ')));
  const double t = seconds_since(t0);
  c.require(t < 5.0, "pipeline < 5 s");
  c.detail << steps.size() << " steps, " << num(t) << " s";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"1 geometry invariants", geometry_invariants},
      {"2 catenary oracle equivalence", catenary_oracles},
      {"3 fit recovery (sheet E)", fit_recovery},
      {"4 noise robustness (LOOCV)", noise_robustness},
      {"5 forward force curve shape", forward_curve},
      {"6 reference table ordering", table_ordering},
      {"7 export round trip", export_round_trip},
      {"8 design explorer consistency", design_consistency},
      {"9 CLI pipeline smoke", cli_pipeline},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    std::cout << (c.ok ? "PASS " : "FAIL ") << name << " -- " << c.detail.str() << '\n';
    failed += c.ok ? 0 : 1;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
