#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "atlasfem/error.hpp"
#include "atlasfem/fem.hpp"

namespace atlasfem {

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::int64_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      acc += val[e] * x[col[e]];
    }
    y[i] = acc;
  }
}

double SparseMatrix::entry(std::size_t row, std::size_t column) const {
  auto begin = col.begin() + row_ptr[row];
  auto end = col.begin() + row_ptr[row + 1];
  auto it = std::lower_bound(begin, end, static_cast<NodeId>(column));
  if (it == end || *it != column) return 0.0;
  return val[it - col.begin()];
}

namespace {

/// Cells of a voxel mesh are congruent parallelepipeds; cache the unit-sigma
/// stiffness per distinct corner-offset geometry and verify congruence per
/// cell instead of re-integrating.
struct GeometryCache {
  struct Entry {
    std::array<Vec3, 8> offsets;  // corners relative to corner 0, mm
    double scale;
    std::array<std::array<double, 8>, 8> unit_stiffness;
  };
  std::vector<Entry> entries;

  const std::array<std::array<double, 8>, 8>& get(const std::array<Vec3, 8>& corners) {
    std::array<Vec3, 8> offsets;
    double scale = 0.0;
    for (int c = 0; c < 8; ++c) {
      offsets[c] = corners[c] - corners[0];
      for (int a = 0; a < 3; ++a) scale = std::max(scale, std::abs(offsets[c][a]));
    }
    for (const Entry& e : entries) {
      if (std::abs(e.scale - scale) > 1e-12 * std::max(1.0, scale)) continue;
      bool match = true;
      for (int c = 1; c < 8 && match; ++c) {
        for (int a = 0; a < 3; ++a) {
          if (std::abs(e.offsets[c][a] - offsets[c][a]) > 1e-12 * std::max(1.0, scale)) {
            match = false;
            break;
          }
        }
      }
      if (match) return e.unit_stiffness;
    }
    entries.push_back(Entry{offsets, scale, element_stiffness(corners, 1.0)});
    return entries.back().unit_stiffness;
  }
};

std::vector<BoundaryFaceQuadrature> build_boundary_quadrature(const HexMesh& mesh) {
  std::vector<BoundaryFaceQuadrature> out;
  const double a = 0.5 - 0.5 / std::sqrt(3.0);  // 2-point Gauss on [0,1]
  const double b = 1.0 - a;
  const double st[4][2] = {{a, a}, {b, a}, {a, b}, {b, b}};
  for (const auto& [cell_idx, face] : boundary_faces(mesh)) {
    const auto quad = face_nodes(mesh.cells[cell_idx], face);
    const Vec3 p0 = mesh.nodes[quad[0]];
    const Vec3 e1 = mesh.nodes[quad[1]] - p0;
    const Vec3 e2 = mesh.nodes[quad[3]] - p0;
    Vec3 nvec = cross(e1, e2);
    const double area_mm2 = norm(nvec);
    if (area_mm2 == 0.0) continue;
    Vec3 unit_normal = (1.0 / area_mm2) * nvec;
    // Orient outward: away from the cell centroid.
    Vec3 cell_centroid{0, 0, 0};
    for (NodeId nid : mesh.cells[cell_idx]) cell_centroid = cell_centroid + mesh.nodes[nid];
    cell_centroid = 0.125 * cell_centroid;
    const Vec3 face_centroid = p0 + 0.5 * e1 + 0.5 * e2;
    if (dot(unit_normal, face_centroid - cell_centroid) < 0.0) {
      unit_normal = -1.0 * unit_normal;
    }
    BoundaryFaceQuadrature q;
    q.nodes = quad;
    q.unit_normal = unit_normal;
    q.area_m2 = area_mm2 * 1e-6;
    for (int k = 0; k < 4; ++k) {
      q.qpoints_mm[k] = p0 + st[k][0] * e1 + st[k][1] * e2;
    }
    out.push_back(q);
  }
  return out;
}

}  // namespace

FemSystem assemble(const HexMesh& mesh, const std::vector<double>& sigma) {
  if (sigma.size() != mesh.cell_count()) {
    throw Error(errc::length_mismatch, "sigma has " + std::to_string(sigma.size()) +
                                           " entries for " + std::to_string(mesh.cell_count()) +
                                           " cells");
  }
  const std::size_t n = mesh.node_count();

  // Sparsity pattern from the cell connectivity.
  std::vector<std::uint64_t> pairs;
  pairs.reserve(mesh.cell_count() * 64);
  for (const auto& cell : mesh.cells) {
    for (NodeId i : cell) {
      for (NodeId j : cell) {
        pairs.push_back((static_cast<std::uint64_t>(i) << 32) | j);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  FemSystem system;
  SparseMatrix& A = system.matrix;
  A.n = n;
  A.row_ptr.assign(n + 1, 0);
  A.col.resize(pairs.size());
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    const auto row = static_cast<std::size_t>(pairs[e] >> 32);
    A.col[e] = static_cast<NodeId>(pairs[e] & 0xFFFFFFFFu);
    ++A.row_ptr[row + 1];
  }
  for (std::size_t i = 0; i < n; ++i) A.row_ptr[i + 1] += A.row_ptr[i];
  A.val.assign(pairs.size(), 0.0);
  pairs.clear();
  pairs.shrink_to_fit();

  GeometryCache cache;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const auto& cell = mesh.cells[c];
    std::array<Vec3, 8> corners;
    for (int k = 0; k < 8; ++k) corners[k] = mesh.nodes[cell[k]];
    const auto& K_unit = cache.get(corners);
    const double s = sigma[c];
    for (int i = 0; i < 8; ++i) {
      const std::size_t row = cell[i];
      const auto begin = A.col.begin() + A.row_ptr[row];
      const auto end = A.col.begin() + A.row_ptr[row + 1];
      for (int j = 0; j < 8; ++j) {
        auto it = std::lower_bound(begin, end, cell[j]);
        A.val[it - A.col.begin()] += s * K_unit[i][j];
      }
    }
  }

  system.rhs.assign(n, 0.0);
  system.gauge = Gauge::pure_neumann_zero_mean;
  system.boundary = build_boundary_quadrature(mesh);
  return system;
}

}  // namespace atlasfem
