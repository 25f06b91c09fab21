#include "atlasfem/hexmesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>

#include "atlasfem/error.hpp"

namespace atlasfem {

namespace {

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_same_grid(const LabelVolume& a, const LabelVolume& b) {
  if (a.dims != b.dims) {
    throw Error(errc::grid_mismatch, "anatomy and property volumes have different dimensions");
  }
  for (int i = 0; i < 3; ++i) {
    bool ok = close(a.spacing[i], b.spacing[i]) && close(a.origin[i], b.origin[i]);
    for (int j = 0; j < 3; ++j) ok = ok && close(a.direction.col[i][j], b.direction.col[i][j]);
    if (!ok) {
      throw Error(errc::grid_mismatch, "anatomy and property volumes have different geometry");
    }
  }
}

/// Local corner offsets in lattice parity order matching VTK hexahedron
/// ordering: bottom quad CCW, then top quad CCW.
constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

/// Node ids of each local face, ordered so the quad edges p1-p0 and p3-p0
/// span the face. Faces: 0 -x, 1 +x, 2 -y, 3 +y, 4 -z, 5 +z.
constexpr int kFace[6][4] = {{0, 3, 7, 4}, {1, 2, 6, 5}, {0, 1, 5, 4},
                             {3, 2, 6, 7}, {0, 1, 2, 3}, {4, 5, 6, 7}};

/// Neighbor voxel step per face.
constexpr int kFaceStep[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};

}  // namespace

std::array<NodeId, 4> face_nodes(const std::array<NodeId, 8>& cell, int local_face) {
  return {cell[kFace[local_face][0]], cell[kFace[local_face][1]], cell[kFace[local_face][2]],
          cell[kFace[local_face][3]]};
}

HexMesh voxels_to_hexmesh(const LabelVolume& anatomy, const LabelVolume& property) {
  anatomy.validate();
  property.validate();
  check_same_grid(anatomy, property);

  const auto [nx, ny, nz] = property.dims;
  const std::size_t corner_nx = nx + 1, corner_ny = ny + 1, corner_nz = nz + 1;
  const std::size_t lattice = corner_nx * corner_ny * corner_nz;
  if (lattice > std::numeric_limits<NodeId>::max()) {
    throw Error(errc::invalid_geometry, "corner lattice exceeds the supported node count");
  }
  auto corner_index = [&](std::size_t i, std::size_t j, std::size_t k) {
    return i + corner_nx * (j + corner_ny * k);
  };

  // Pass 1: find domain voxels and mark their corners.
  std::vector<std::uint8_t> used(lattice, 0);
  std::size_t n_cells = 0;
  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t v = property.index(i, j, k);
        if (property.voxels[v] == 0) {
          if (anatomy.voxels[v] != 0) {
            throw Error(errc::uncovered_anatomy,
                        "anatomy label " + std::to_string(anatomy.voxels[v]) + " at voxel (" +
                            std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                            ") has no property label");
          }
          continue;
        }
        ++n_cells;
        for (const auto& c : kCorner) used[corner_index(i + c[0], j + c[1], k + c[2])] = 1;
      }
    }
  }
  if (n_cells == 0) {
    throw Error(errc::empty_domain, "no voxel carries a property label; nothing to mesh");
  }

  // Pass 2: compact node ids in ascending lattice order.
  std::vector<NodeId> compact(lattice, 0);
  NodeId next_id = 0;
  for (std::size_t idx = 0; idx < lattice; ++idx) {
    compact[idx] = next_id;
    next_id += used[idx];
  }
  const NodeId n_nodes = next_id;

  HexMesh mesh;
  mesh.nodes.resize(n_nodes);
  for (std::size_t k = 0; k < corner_nz; ++k) {
    for (std::size_t j = 0; j < corner_ny; ++j) {
      for (std::size_t i = 0; i < corner_nx; ++i) {
        const std::size_t idx = corner_index(i, j, k);
        if (used[idx]) mesh.nodes[compact[idx]] = property.node_position(i, j, k);
      }
    }
  }

  // Pass 3: cells in voxel x-fastest order, labels riding along.
  mesh.cells.reserve(n_cells);
  mesh.anatomy_label.reserve(n_cells);
  mesh.property_label.reserve(n_cells);
  mesh.cell_of_voxel.assign(property.voxel_count(), -1);
  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t v = property.index(i, j, k);
        if (property.voxels[v] == 0) continue;
        std::array<NodeId, 8> cell;
        for (int c = 0; c < 8; ++c) {
          cell[c] = compact[corner_index(i + kCorner[c][0], j + kCorner[c][1], k + kCorner[c][2])];
        }
        mesh.cell_of_voxel[v] = static_cast<std::int32_t>(mesh.cells.size());
        mesh.cells.push_back(cell);
        mesh.anatomy_label.push_back(anatomy.voxels[v]);
        mesh.property_label.push_back(property.voxels[v]);
      }
    }
  }

  mesh.provenance = GridProvenance{property.dims, property.spacing, property.origin, property.direction};
  return mesh;
}

double scaled_jacobian(const HexMesh& mesh, std::size_t cell_index) {
  const auto& cell = mesh.cells.at(cell_index);
  std::array<Vec3, 8> p;
  for (int c = 0; c < 8; ++c) p[c] = mesh.nodes[cell[c]];

  // Corner (a,b,c) in lattice parities; VTK index of a parity triple.
  constexpr int vtk_of_parity[2][2][2] = {{{0, 4}, {3, 7}}, {{1, 5}, {2, 6}}};
  double min_sj = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        const Vec3& x = p[vtk_of_parity[a][b][c]];
        Vec3 ex = p[vtk_of_parity[1 - a][b][c]] - x;
        Vec3 ey = p[vtk_of_parity[a][1 - b][c]] - x;
        Vec3 ez = p[vtk_of_parity[a][b][1 - c]] - x;
        const double lx = norm(ex), ly = norm(ey), lz = norm(ez);
        if (lx == 0.0 || ly == 0.0 || lz == 0.0) return 0.0;
        double det = dot(ex, cross(ey, ez)) / (lx * ly * lz);
        // Flipping an edge direction flips the sign; undo the parity.
        if ((a + b + c) % 2 == 1) det = -det;
        min_sj = std::min(min_sj, det);
      }
    }
  }
  return min_sj;
}

MeshStats mesh_stats(const HexMesh& mesh) {
  MeshStats stats;
  stats.cell_count = mesh.cell_count();
  stats.node_count = mesh.node_count();
  if (!mesh.nodes.empty()) {
    stats.bbox_min = stats.bbox_max = mesh.nodes[0];
    for (const Vec3& p : mesh.nodes) {
      for (int a = 0; a < 3; ++a) {
        stats.bbox_min[a] = std::min(stats.bbox_min[a], p[a]);
        stats.bbox_max[a] = std::max(stats.bbox_max[a], p[a]);
      }
    }
  }
  double min_sj = std::numeric_limits<double>::infinity();
  double sum_sj = 0.0;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const double sj = scaled_jacobian(mesh, c);
    min_sj = std::min(min_sj, sj);
    sum_sj += sj;
  }
  stats.min_scaled_jacobian = mesh.cell_count() ? min_sj : 0.0;
  stats.mean_scaled_jacobian = mesh.cell_count() ? sum_sj / static_cast<double>(mesh.cell_count()) : 0.0;
  for (Label l : mesh.anatomy_label) ++stats.anatomy_histogram[l];
  for (Label l : mesh.property_label) ++stats.property_histogram[l];
  return stats;
}

std::vector<std::pair<std::size_t, int>> boundary_faces(const HexMesh& mesh) {
  std::vector<std::pair<std::size_t, int>> out;
  if (mesh.provenance && !mesh.cell_of_voxel.empty()) {
    // Fast path: a face is on the boundary iff the face-adjacent voxel
    // carries no cell.
    const auto [nx, ny, nz] = mesh.provenance->dims;
    for (std::size_t k = 0; k < nz; ++k) {
      for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
          const std::size_t v = i + nx * (j + ny * k);
          const std::int32_t cell = mesh.cell_of_voxel[v];
          if (cell < 0) continue;
          for (int f = 0; f < 6; ++f) {
            const std::int64_t ni = static_cast<std::int64_t>(i) + kFaceStep[f][0];
            const std::int64_t nj = static_cast<std::int64_t>(j) + kFaceStep[f][1];
            const std::int64_t nk = static_cast<std::int64_t>(k) + kFaceStep[f][2];
            bool open = ni < 0 || nj < 0 || nk < 0 || ni >= static_cast<std::int64_t>(nx) ||
                        nj >= static_cast<std::int64_t>(ny) || nk >= static_cast<std::int64_t>(nz);
            if (!open) {
              const std::size_t nv = static_cast<std::size_t>(ni) +
                                     nx * (static_cast<std::size_t>(nj) + ny * static_cast<std::size_t>(nk));
              open = mesh.cell_of_voxel[nv] < 0;
            }
            if (open) out.emplace_back(static_cast<std::size_t>(cell), f);
          }
        }
      }
    }
    // cell_of_voxel scan order is x-fastest, same as cell order.
    return out;
  }

  // General path: faces referenced by exactly one cell are boundary.
  std::map<std::array<NodeId, 4>, std::pair<std::size_t, int>> seen;
  std::map<std::array<NodeId, 4>, int> counts;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    for (int f = 0; f < 6; ++f) {
      std::array<NodeId, 4> key = face_nodes(mesh.cells[c], f);
      std::sort(key.begin(), key.end());
      ++counts[key];
      seen.emplace(key, std::make_pair(c, f));
    }
  }
  for (const auto& [key, count] : counts) {
    if (count == 1) out.push_back(seen.at(key));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace atlasfem
