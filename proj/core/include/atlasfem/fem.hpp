#ifndef ATLASFEM_FEM_HPP
#define ATLASFEM_FEM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "atlasfem/hexmesh.hpp"
#include "atlasfem/types.hpp"

namespace atlasfem {

/// Current dipole, the standard model of a focal source. Interface units:
/// position and separation in mm, moment in A*m.
struct DipoleSource {
  Vec3 position_mm{0, 0, 0};
  Vec3 moment_Am{0, 0, 0};
  /// Distance between the two monopoles; unset selects the default of
  /// twice the minimum voxel spacing.
  std::optional<double> separation_mm;
};

/// Flux callback g(x, n) in A/m^2, evaluated at boundary quadrature points
/// (position in mm, outward unit normal).
using NeumannFlux = std::function<double(const Vec3& position_mm, const Vec3& unit_normal)>;

struct BoundaryConditions {
  NeumannFlux neumann_flux;  // empty = homogeneous (no current leaves the boundary)
  /// (node id, prescribed potential in uV) pairs; empty means the pure
  /// Neumann problem with the zero-mean gauge.
  std::vector<std::pair<NodeId, double>> dirichlet;
};

enum class Gauge { pure_neumann_zero_mean, dirichlet };

const char* to_string(Gauge gauge) noexcept;

/// Compressed sparse row square matrix.
struct SparseMatrix {
  std::size_t n = 0;
  std::vector<std::int64_t> row_ptr;  // n + 1
  std::vector<NodeId> col;
  std::vector<double> val;

  void multiply(std::span<const double> x, std::span<double> y) const;
  double entry(std::size_t row, std::size_t column) const;  // 0 outside the pattern
};

/// Precomputed boundary-face quadrature for Neumann flux integration:
/// 2x2 Gauss points on each parallelogram face.
struct BoundaryFaceQuadrature {
  std::array<NodeId, 4> nodes;
  std::array<Vec3, 4> qpoints_mm;
  Vec3 unit_normal;
  double area_m2 = 0.0;
};

/// Discrete Poisson operator: symmetric positive semi-definite stiffness
/// matrix in S (so K u[V] is a current in A) plus a source vector in A.
struct FemSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;  // A; zero after assemble
  Gauge gauge = Gauge::pure_neumann_zero_mean;
  std::vector<BoundaryFaceQuadrature> boundary;
};

/// Nodal scalar potential in uV.
struct PotentialField {
  std::vector<double> values_uV;
  Gauge gauge = Gauge::pure_neumann_zero_mean;
};

struct SolveReport {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  double wall_seconds = 0.0;
  Gauge gauge = Gauge::pure_neumann_zero_mean;
};

struct SolveResult {
  PotentialField field;
  SolveReport report;
};

/// Trilinear hexahedral element stiffness K_ij = integral sigma grad(phi_i)
/// . grad(phi_j) dV with 2x2x2 Gauss-Legendre quadrature, exact for
/// parallelepiped cells. Corners in mm (VTK ordering, positive Jacobian);
/// the result is in S. Rows sum to zero.
std::array<std::array<double, 8>, 8> element_stiffness(const std::array<Vec3, 8>& corners_mm,
                                                       double sigma);

/// Scatters element stiffness matrices into a global CSR matrix.
/// Congruent cells (one distinct geometry per voxel grid) share a reference
/// integration, matching naive per-element assembly within 1e-12. The rhs
/// is zero; boundary face quadrature is precomputed for later flux use.
FemSystem assemble(const HexMesh& mesh, const std::vector<double>& sigma);

/// Monopole-pair discretization of the dipole: current I = |p|/d deposited
/// at position +/- (d/2) along the moment direction with trilinear weights
/// on the containing cell's nodes. Deposits are quantized to a common
/// dyadic grid so the pair cancels bit-exactly in any summation order.
std::vector<double> dipole_rhs(const HexMesh& mesh, const DipoleSource& source);

/// Nodal flux contributions integral g phi_i dGamma over the mesh boundary,
/// in A, using the system's precomputed face quadrature.
std::vector<double> neumann_rhs(const FemSystem& system, const NeumannFlux& g);

/// Jacobi-preconditioned conjugate gradients. Pure Neumann systems are
/// deflated by re-centering iterate and preconditioned residual to zero
/// mean each iteration and the returned field has zero mean; Dirichlet
/// constraints are eliminated symmetrically with the prescribed values
/// moved to the rhs. Converged when ||r||_2 / ||rhs||_2 <= tol.
/// maxit == 0 selects the default of 10 * N.
SolveResult solve(const FemSystem& system, const BoundaryConditions& bc, double tol = 1e-8,
                  std::size_t maxit = 0);

/// Closed-form potential of a point dipole in an unbounded homogeneous
/// medium: u = p . (x - x0) / (4 pi sigma |x - x0|^3), positions in mm,
/// result in uV. The standard oracle for homogeneous-medium checks.
double analytic_infinite_dipole(double sigma, const Vec3& moment_Am, const Vec3& source_mm,
                                const Vec3& eval_mm);

}  // namespace atlasfem

#endif
