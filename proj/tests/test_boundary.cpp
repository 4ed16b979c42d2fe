#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kirigami/kirigami.hpp"
#include "oracles.hpp"

using namespace kirigami;

TEST(Boundary, LinkLengthExamples) {
  const auto circ = make_sheet("c", 47.0, 47.0, 2.0, 0.25, Material::PET);
  EXPECT_NEAR(link_length(circ), 33.2340187157677336, 1e-12);
  EXPECT_DOUBLE_EQ(link_length(make_sheet("t", 6.0, 8.0, 1.0, 0.25, Material::PET)), 5.0);
  // mpmath, 30 digits
  EXPECT_NEAR(link_length(presets::sheet('E')), 16.0447031758147524, 1e-12);
}

TEST(Boundary, LinkLengthMatchesJointCoordinates) {
  // Joint 1 at origin, joint 2 at (lx/2, ly/2): the link is their distance.
  const auto e = presets::sheet('E');
  const double jx = e.lx_init / 2.0, jy = e.ly_init / 2.0;
  EXPECT_NEAR(link_length(e), std::sqrt(jx * jx + jy * jy), 1e-14);
}

TEST(Boundary, MaxDisplacement) {
  const double L = 30.0;
  EXPECT_NEAR(max_displacement(make_sheet("s", L, L, 1.0, 0.25, Material::PET)), L * (std::sqrt(2.0) - 1.0), 1e-12);
  EXPECT_DOUBLE_EQ(max_displacement(make_sheet("t", 6.0, 8.0, 1.0, 0.25, Material::PET)), 4.0);
  const auto e = presets::sheet('E');
  EXPECT_NEAR(max_displacement(e), 14.2894063516295047, 1e-12);
  EXPECT_LE(deform(e, max_displacement(e)).ly, 1e-9);
}

TEST(Boundary, UndeformedStateIsFixedPoint) {
  const auto e = presets::sheet('E');
  const auto s = deform(e, 0.0);
  EXPECT_EQ(s.lx, e.lx_init);
  EXPECT_EQ(s.ly, e.ly_init);
  EXPECT_EQ(s.delta_y, 0.0);
  EXPECT_EQ(s.lz, 0.0);
}

TEST(Boundary, ClosedLinkage) {
  const auto e = presets::sheet('E');
  const auto s = deform(e, max_displacement(e));
  EXPECT_EQ(s.ly, 0.0);
  EXPECT_EQ(s.theta, 0.0);
}

TEST(Boundary, SheetEAtFiveMillimetresMatchesJointConstruction) {
  const auto e = presets::sheet('E');
  const auto s = deform(e, 5.0);
  EXPECT_NEAR(s.ly, oracle::four_bar_width(e.lx_init, e.ly_init, 5.0), 1e-12);
  EXPECT_NEAR(s.ly, 22.5807440090002349, 1e-12);  // mpmath
  EXPECT_DOUBLE_EQ(s.lx, 22.8);
  EXPECT_NEAR(s.theta, std::atan(s.ly / s.lx), 1e-15);
}

TEST(Boundary, OutOfRangeDisplacementIsAnError) {
  const auto e = presets::sheet('E');
  for (double dx : {-1e-9, max_displacement(e) + 1e-9, std::nan("")}) {
    try {
      deform(e, dx);
      FAIL() << dx;
    } catch (const Error& err) {
      EXPECT_EQ(err.kind(), ErrorKind::DisplacementOutOfRange);
      EXPECT_NE(std::string(err.what()).find("max_displacement"), std::string::npos);
    }
  }
}

TEST(Boundary, ChordExamples) {
  const auto s = deform(presets::sheet('E'), 5.0);
  EXPECT_DOUBLE_EQ(boundary_chord(s, s.lx / 2.0), s.ly);
  EXPECT_EQ(boundary_chord(s, 0.0), 0.0);
  EXPECT_EQ(boundary_chord(s, s.lx), 0.0);
  EXPECT_NEAR(boundary_chord(s, s.lx / 4.0), s.ly * std::sqrt(3.0) / 2.0, 1e-12);
  EXPECT_THROW(boundary_chord(s, -0.1), Error);
  EXPECT_THROW(boundary_chord(s, s.lx + 0.1), Error);
}

TEST(Boundary, PropertiesOnRandomSheets) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = oracle::random_sheet(rng);
    const double link = link_length(spec), limit = max_displacement(spec);
    double prev_ly = spec.ly_init + 1.0, prev_lx = 0.0;
    for (int k = 0; k <= 20; ++k) {
      const double dx = k == 20 ? limit : limit * k / 20.0;
      const auto s = deform(spec, dx);
      EXPECT_NEAR(std::hypot(s.lx / 2.0, s.ly / 2.0), link, 1e-9 * link);
      EXPECT_LT(s.ly, prev_ly);
      EXPECT_GT(s.lx, prev_lx);
      prev_ly = s.ly;
      prev_lx = s.lx;
      std::uniform_real_distribution<double> u(0.0, s.lx);
      const double x = u(rng);
      EXPECT_NEAR(boundary_chord(s, x), boundary_chord(s, s.lx - x), 1e-8 * (1.0 + s.ly));
    }
  }
}
