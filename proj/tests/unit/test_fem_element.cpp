#include <doctest.h>

#include <cmath>

#include "atlasfem/error.hpp"
#include "atlasfem/fem.hpp"
#include "oracles.hpp"

using namespace atlasfem;

namespace {

/// Axis-aligned cube with the given edge length in mm, VTK corner order.
std::array<Vec3, 8> cube_corners(double edge_mm, Vec3 origin = {0, 0, 0}) {
  std::array<Vec3, 8> corners;
  for (int c = 0; c < 8; ++c) {
    corners[c] = origin + Vec3{edge_mm * oracles::kParity[c][0], edge_mm * oracles::kParity[c][1],
                               edge_mm * oracles::kParity[c][2]};
  }
  return corners;
}

/// Parity distance between VTK corners: 0 self, 1 edge neighbor, 2 face
/// diagonal, 3 body diagonal.
int parity_distance(int i, int j) {
  int d = 0;
  for (int a = 0; a < 3; ++a) d += oracles::kParity[i][a] != oracles::kParity[j][a];
  return d;
}

}  // namespace

TEST_CASE("oracle confirms the frozen unit-cube entries") {
  // 1 m edges passed directly (1000 mm), sigma 1.
  const auto K = oracles::element_stiffness(cube_corners(1000.0), 1.0);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double expected[4] = {1.0 / 3.0, 0.0, -1.0 / 12.0, -1.0 / 12.0};
      CHECK(K[i][j] == doctest::Approx(expected[parity_distance(i, j)]).epsilon(1e-14));
    }
  }
}

TEST_CASE("element stiffness matches the oracle entrywise on the unit cube") {
  const auto corners = cube_corners(1000.0);
  const auto K = element_stiffness(corners, 1.0);
  const auto R = oracles::element_stiffness(corners, 1.0);
  for (int i = 0; i < 8; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < 8; ++j) {
      CHECK(K[i][j] == doctest::Approx(R[i][j]).epsilon(1e-13));
      CHECK(std::abs(K[i][j] - R[i][j]) < 1e-12);
      row_sum += K[i][j];
    }
    CHECK(std::abs(row_sum) < 1e-14);
  }
}

TEST_CASE("zero conductivity gives the zero matrix") {
  const auto K = element_stiffness(cube_corners(1000.0), 0.0);
  for (const auto& row : K) {
    for (double v : row) CHECK(v == 0.0);
  }
}

TEST_CASE("cube stiffness scales as sigma times edge length") {
  const auto K_unit = element_stiffness(cube_corners(1000.0), 1.0);
  for (double h_m : {0.5, 2.0}) {
    for (double sigma : {1.0, 0.33}) {
      const auto K = element_stiffness(cube_corners(1000.0 * h_m), sigma);
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
          CHECK(K[i][j] == doctest::Approx(sigma * h_m * K_unit[i][j]).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("stiffness is symmetric and matches the oracle on stretched boxes") {
  std::array<Vec3, 8> corners;
  for (int c = 0; c < 8; ++c) {
    corners[c] = Vec3{2.0 * oracles::kParity[c][0] + 5.0, 0.5 * oracles::kParity[c][1] - 1.0,
                      1.25 * oracles::kParity[c][2]};
  }
  const auto K = element_stiffness(corners, 0.7);
  const auto R = oracles::element_stiffness(corners, 0.7);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      CHECK(K[i][j] == K[j][i]);
      CHECK(K[i][j] == doctest::Approx(R[i][j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("parallelepiped from a skewed lattice matches the oracle") {
  const Vec3 e1{1.0, 0.0, 0.0};
  const Vec3 e2{0.5, std::sqrt(3.0) / 2.0, 0.0};
  const Vec3 e3{0.1, 0.2, 1.1};
  std::array<Vec3, 8> corners;
  for (int c = 0; c < 8; ++c) {
    corners[c] = (1.0 * oracles::kParity[c][0]) * e1 + (1.0 * oracles::kParity[c][1]) * e2 +
                 (1.0 * oracles::kParity[c][2]) * e3;
  }
  const auto K = element_stiffness(corners, 1.3);
  const auto R = oracles::element_stiffness(corners, 1.3);
  for (int i = 0; i < 8; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < 8; ++j) {
      CHECK(K[i][j] == doctest::Approx(R[i][j]).epsilon(1e-12));
      row_sum += K[i][j];
    }
    CHECK(row_sum == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("inverted corner ordering is rejected") {
  auto corners = cube_corners(1.0);
  std::swap(corners[0], corners[4]);
  std::swap(corners[1], corners[5]);
  std::swap(corners[2], corners[6]);
  std::swap(corners[3], corners[7]);
  CHECK_THROWS_AS(element_stiffness(corners, 1.0), Error);
}

TEST_CASE("analytic dipole symmetries") {
  const double sigma = 0.33;
  const Vec3 p{0, 0, 1e-8};
  const Vec3 x0{5, 5, 5};

  // Zero on the perpendicular plane through the source.
  CHECK(analytic_infinite_dipole(sigma, p, x0, Vec3{9, -3, 5}) == 0.0);

  // Odd along the moment axis.
  const double up = analytic_infinite_dipole(sigma, p, x0, Vec3{5, 5, 8});
  const double dn = analytic_infinite_dipole(sigma, p, x0, Vec3{5, 5, 2});
  CHECK(up == doctest::Approx(-dn).epsilon(1e-15));
  CHECK(up > 0.0);

  // Doubling sigma halves the potential.
  const double half = analytic_infinite_dipole(2.0 * sigma, p, x0, Vec3{5, 5, 8});
  CHECK(up == doctest::Approx(2.0 * half).epsilon(1e-15));

  CHECK_THROWS_AS(analytic_infinite_dipole(sigma, p, x0, x0), Error);
}

TEST_CASE("analytic dipole magnitude in SI") {
  // p = 1e-8 A*m along z, sigma = 1 S/m, 10 mm above the source:
  // u = p / (4 pi sigma r^2) = 1e-8 / (4 pi 1e-4) V = 7.957747e-6 V.
  const double uV =
      analytic_infinite_dipole(1.0, Vec3{0, 0, 1e-8}, Vec3{0, 0, 0}, Vec3{0, 0, 10});
  CHECK(uV == doctest::Approx(1e-8 / (4.0 * std::numbers::pi * 1e-4) * 1e6).epsilon(1e-12));
}
