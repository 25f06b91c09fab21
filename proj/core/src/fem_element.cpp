#include <array>
#include <cmath>
#include <numbers>

#include "atlasfem/error.hpp"
#include "atlasfem/fem.hpp"

namespace atlasfem {

namespace {

/// Corner signs of the reference cube [-1,1]^3 in VTK hexahedron order.
constexpr double kSign[8][3] = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                                {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

}  // namespace

const char* to_string(Gauge gauge) noexcept {
  return gauge == Gauge::pure_neumann_zero_mean ? "pure-neumann-zero-mean" : "dirichlet";
}

std::array<std::array<double, 8>, 8> element_stiffness(const std::array<Vec3, 8>& corners_mm,
                                                       double sigma) {
  // Work in metres so that K u[V] is a current in A.
  std::array<Vec3, 8> x;
  for (int c = 0; c < 8; ++c) x[c] = 1e-3 * corners_mm[c];

  std::array<std::array<double, 8>, 8> K{};
  const double g = 1.0 / std::sqrt(3.0);  // 2-point Gauss abscissa, weight 1

  for (int qa = 0; qa < 2; ++qa) {
    for (int qb = 0; qb < 2; ++qb) {
      for (int qc = 0; qc < 2; ++qc) {
        const double xi = qa ? g : -g, eta = qb ? g : -g, zeta = qc ? g : -g;

        // Reference gradients of the trilinear shape functions.
        double dN[8][3];
        for (int i = 0; i < 8; ++i) {
          const double sx = kSign[i][0], sy = kSign[i][1], sz = kSign[i][2];
          dN[i][0] = 0.125 * sx * (1 + sy * eta) * (1 + sz * zeta);
          dN[i][1] = 0.125 * sy * (1 + sx * xi) * (1 + sz * zeta);
          dN[i][2] = 0.125 * sz * (1 + sx * xi) * (1 + sy * eta);
        }

        // Jacobian J[a][b] = d x_a / d ref_b.
        double J[3][3] = {};
        for (int i = 0; i < 8; ++i) {
          for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) J[a][b] += x[i][a] * dN[i][b];
          }
        }
        const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                           J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                           J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
        if (!(det > 0.0)) {
          throw Error(errc::inverted_element, "non-positive Jacobian at a quadrature point");
        }
        double inv[3][3];
        inv[0][0] = (J[1][1] * J[2][2] - J[1][2] * J[2][1]) / det;
        inv[0][1] = (J[0][2] * J[2][1] - J[0][1] * J[2][2]) / det;
        inv[0][2] = (J[0][1] * J[1][2] - J[0][2] * J[1][1]) / det;
        inv[1][0] = (J[1][2] * J[2][0] - J[1][0] * J[2][2]) / det;
        inv[1][1] = (J[0][0] * J[2][2] - J[0][2] * J[2][0]) / det;
        inv[1][2] = (J[0][2] * J[1][0] - J[0][0] * J[1][2]) / det;
        inv[2][0] = (J[1][0] * J[2][1] - J[1][1] * J[2][0]) / det;
        inv[2][1] = (J[0][1] * J[2][0] - J[0][0] * J[2][1]) / det;
        inv[2][2] = (J[0][0] * J[1][1] - J[0][1] * J[1][0]) / det;

        // Physical gradients: grad N_i = J^{-T} dN_i.
        double B[8][3];
        for (int i = 0; i < 8; ++i) {
          for (int a = 0; a < 3; ++a) {
            B[i][a] = inv[0][a] * dN[i][0] + inv[1][a] * dN[i][1] + inv[2][a] * dN[i][2];
          }
        }

        const double w = sigma * det;  // all Gauss weights are 1
        for (int i = 0; i < 8; ++i) {
          for (int j = i; j < 8; ++j) {
            K[i][j] += w * (B[i][0] * B[j][0] + B[i][1] * B[j][1] + B[i][2] * B[j][2]);
          }
        }
      }
    }
  }

  // Symmetric by construction; mirror the upper triangle.
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < i; ++j) K[i][j] = K[j][i];
  }
  return K;
}

double analytic_infinite_dipole(double sigma, const Vec3& moment_Am, const Vec3& source_mm,
                                const Vec3& eval_mm) {
  const Vec3 r_m = 1e-3 * (eval_mm - source_mm);
  const double dist = norm(r_m);
  if (dist == 0.0) {
    throw Error(errc::singular_point, "evaluation point coincides with the dipole position");
  }
  const double u_volts = dot(moment_Am, r_m) / (4.0 * std::numbers::pi * sigma * dist * dist * dist);
  return u_volts * 1e6;
}

}  // namespace atlasfem
