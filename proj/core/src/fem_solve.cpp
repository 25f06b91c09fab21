#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "atlasfem/error.hpp"
#include "atlasfem/fem.hpp"

namespace atlasfem {

namespace {

/// Trilinear partition-of-unity weights in VTK corner order.
std::array<double, 8> trilinear_weights(const Vec3& xi) {
  const double x = xi[0], y = xi[1], z = xi[2];
  return {(1 - x) * (1 - y) * (1 - z), x * (1 - y) * (1 - z), x * y * (1 - z), (1 - x) * y * (1 - z),
          (1 - x) * (1 - y) * z,       x * (1 - y) * z,       x * y * z,       (1 - x) * y * z};
}

struct Located {
  std::size_t cell;
  Vec3 xi;  // local coordinates in [0,1]^3
};

/// Finds the domain cell containing a physical point, via the voxel lattice.
Located locate(const HexMesh& mesh, const Vec3& point_mm, const char* what) {
  const GridProvenance& grid = *mesh.provenance;
  const Vec3 w = grid.direction.solve(point_mm - grid.origin);
  Vec3 t{w[0] / grid.spacing[0], w[1] / grid.spacing[1], w[2] / grid.spacing[2]};
  std::array<std::size_t, 3> idx{};
  Vec3 xi{};
  for (int a = 0; a < 3; ++a) {
    const auto extent = static_cast<double>(grid.dims[a]);
    if (t[a] < 0.0 || t[a] > extent) {
      throw Error(errc::source_outside_domain, std::string(what) + " lies outside the voxel grid");
    }
    double cell = std::floor(t[a]);
    if (cell >= extent) cell = extent - 1.0;  // right boundary belongs to the last cell
    idx[a] = static_cast<std::size_t>(cell);
    xi[a] = t[a] - cell;
  }
  const std::size_t voxel = idx[0] + grid.dims[0] * (idx[1] + grid.dims[1] * idx[2]);
  const std::int32_t cell = mesh.cell_of_voxel[voxel];
  if (cell < 0) {
    throw Error(errc::source_outside_domain,
                std::string(what) + " falls in a voxel without a property label");
  }
  return {static_cast<std::size_t>(cell), xi};
}

/// Deposits a monopole of the given (quantized) strength: node values are
/// multiples of the dyadic grid q and sum to the strength exactly.
void deposit_monopole(const HexMesh& mesh, const Located& loc, double strength, double q,
                      std::vector<double>& rhs) {
  const auto weights = trilinear_weights(loc.xi);
  std::array<double, 8> deposit{};
  double total = 0.0;
  int largest = 0;
  for (int c = 0; c < 8; ++c) {
    deposit[c] = std::nearbyint(strength * weights[c] / q) * q;
    total += deposit[c];  // exact: all terms are multiples of q, well below 2^53 q
    if (weights[c] > weights[largest]) largest = c;
  }
  deposit[largest] += strength - total;  // exact remainder, still a multiple of q
  const auto& cell = mesh.cells[loc.cell];
  for (int c = 0; c < 8; ++c) rhs[cell[c]] += deposit[c];
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> dipole_rhs(const HexMesh& mesh, const DipoleSource& source) {
  if (!mesh.provenance || mesh.cell_of_voxel.empty()) {
    throw Error(errc::source_outside_domain,
                "mesh carries no voxel-grid provenance; build it with voxels_to_hexmesh");
  }
  std::vector<double> rhs(mesh.node_count(), 0.0);
  const double magnitude = norm(source.moment_Am);
  if (magnitude == 0.0) return rhs;

  const Vec3& spacing = mesh.provenance->spacing;
  double d_mm = source.separation_mm.value_or(2.0 * std::min({spacing[0], spacing[1], spacing[2]}));
  if (!(d_mm > 0.0)) {
    throw Error(errc::zero_separation, "monopole separation must be positive");
  }

  const Vec3 direction = (1.0 / magnitude) * source.moment_Am;
  const Vec3 pos_plus = source.position_mm + (0.5 * d_mm) * direction;
  const Vec3 pos_minus = source.position_mm - (0.5 * d_mm) * direction;
  const Located plus = locate(mesh, pos_plus, "positive monopole");
  const Located minus = locate(mesh, pos_minus, "negative monopole");

  // I = |p| / d. Deposits are quantized to a common dyadic grid q so that
  // both monopoles carry exactly the same total and the assembled vector
  // sums to zero bit-exactly in any order (every partial sum is an exact
  // multiple of q below 2^53 q).
  const double current = magnitude / (d_mm * 1e-3);
  const double q = std::ldexp(1.0, std::ilogb(current) - 48);
  const double quantized = std::nearbyint(current / q) * q;
  deposit_monopole(mesh, plus, quantized, q, rhs);
  deposit_monopole(mesh, minus, -quantized, q, rhs);
  return rhs;
}

std::vector<double> neumann_rhs(const FemSystem& system, const NeumannFlux& g) {
  std::vector<double> rhs(system.matrix.n, 0.0);
  if (!g) return rhs;
  // Same 2x2 Gauss layout the face quadrature points were built with.
  const double a = 0.5 - 0.5 / std::sqrt(3.0);
  const double b = 1.0 - a;
  const double st[4][2] = {{a, a}, {b, a}, {a, b}, {b, b}};
  for (const BoundaryFaceQuadrature& face : system.boundary) {
    for (int k = 0; k < 4; ++k) {
      const double s = st[k][0], t = st[k][1];
      const double flux = g(face.qpoints_mm[k], face.unit_normal);
      const double w = 0.25 * face.area_m2 * flux;
      const double phi[4] = {(1 - s) * (1 - t), s * (1 - t), s * t, (1 - s) * t};
      for (int i = 0; i < 4; ++i) rhs[face.nodes[i]] += w * phi[i];
    }
  }
  return rhs;
}

SolveResult solve(const FemSystem& system, const BoundaryConditions& bc, double tol,
                  std::size_t maxit) {
  const auto t_start = std::chrono::steady_clock::now();
  const std::size_t n = system.matrix.n;
  if (system.rhs.size() != n) {
    throw Error(errc::length_mismatch, "rhs length does not match the matrix size");
  }
  if (maxit == 0) maxit = 10 * n;

  std::vector<double> b = system.rhs;
  if (bc.neumann_flux) {
    const std::vector<double> flux = neumann_rhs(system, bc.neumann_flux);
    for (std::size_t i = 0; i < n; ++i) b[i] += flux[i];
  }

  const bool pure_neumann = bc.dirichlet.empty();
  const Gauge gauge = pure_neumann ? Gauge::pure_neumann_zero_mean : Gauge::dirichlet;

  SparseMatrix A = system.matrix;  // values are modified for Dirichlet elimination
  std::vector<char> constrained(n, 0);
  if (pure_neumann) {
    double sum = 0.0, maxabs = 0.0;
    for (double v : b) {
      sum += v;
      maxabs = std::max(maxabs, std::abs(v));
    }
    if (std::abs(sum) > 1e-12 * maxabs) {
      throw Error(errc::incompatible_source,
                  "pure-Neumann source does not sum to zero: sum = " + std::to_string(sum));
    }
  } else {
    std::map<NodeId, double> dirichlet;
    for (const auto& [node, value_uV] : bc.dirichlet) {
      if (node >= n) {
        throw Error(errc::invalid_config, "Dirichlet node " + std::to_string(node) + " out of range");
      }
      if (!dirichlet.emplace(node, value_uV * 1e-6).second) {
        throw Error(errc::invalid_config, "Dirichlet node " + std::to_string(node) + " listed twice");
      }
    }
    for (const auto& [node, h] : dirichlet) constrained[node] = 1;
    // Move prescribed values to the rhs, then zero constrained rows and
    // columns symmetrically. Constrained rows keep their original diagonal
    // so the reduced system stays on one scale.
    for (std::size_t i = 0; i < n; ++i) {
      if (constrained[i]) continue;
      for (std::int64_t e = A.row_ptr[i]; e < A.row_ptr[i + 1]; ++e) {
        if (constrained[A.col[e]]) b[i] -= A.val[e] * dirichlet.at(A.col[e]);
      }
    }
    for (const auto& [node, h] : dirichlet) b[node] = A.entry(node, node) * h;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::int64_t e = A.row_ptr[i]; e < A.row_ptr[i + 1]; ++e) {
        if ((constrained[i] || constrained[A.col[e]]) && i != A.col[e]) {
          A.val[e] = 0.0;
        }
      }
    }
  }

  SolveResult result;
  result.report.gauge = gauge;
  result.field.gauge = gauge;

  const double b_norm = norm2(b);
  std::vector<double> x(n, 0.0);
  if (b_norm == 0.0) {
    result.field.values_uV.assign(n, 0.0);
    result.report.iterations = 0;
    result.report.relative_residual = 0.0;
    result.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
  }

  std::vector<double> inv_diag(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = A.entry(i, i);
    if (!(d > 0.0)) {
      throw Error(errc::invalid_geometry, "non-positive diagonal in the assembled operator");
    }
    inv_diag[i] = 1.0 / d;
  }

  auto recenter = [&](std::vector<double>& v) {
    const double m = mean(v);
    for (double& vi : v) vi -= m;
  };

  // Jacobi-preconditioned CG; the pure-Neumann constant nullspace is
  // deflated by re-centering the iterate and the preconditioned residual.
  std::vector<double> r = b;
  if (pure_neumann) recenter(r);
  std::vector<double> z(n), p(n), q(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  if (pure_neumann) recenter(z);
  p = z;
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) rz += r[i] * z[i];

  double rel = norm2(r) / b_norm;
  std::size_t it = 0;
  while (rel > tol) {
    if (it >= maxit) {
      throw Error(errc::no_convergence, "CG stalled after " + std::to_string(it) +
                                            " iterations, relative residual " + std::to_string(rel));
    }
    ++it;
    A.multiply(p, q);
    double pq = 0.0;
    for (std::size_t i = 0; i < n; ++i) pq += p[i] * q[i];
    if (!(pq > 0.0)) {
      throw Error(errc::no_convergence, "CG breakdown: non-positive curvature");
    }
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    if (pure_neumann) recenter(x);
    rel = norm2(r) / b_norm;
    if (rel <= tol) break;
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    if (pure_neumann) recenter(z);
    double rz_next = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz_next += r[i] * z[i];
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  if (pure_neumann) recenter(x);
  result.field.values_uV.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.field.values_uV[i] = x[i] * 1e6;
  result.report.iterations = it;
  result.report.relative_residual = rel;
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

}  // namespace atlasfem
