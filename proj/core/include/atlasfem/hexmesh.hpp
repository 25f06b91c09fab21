#ifndef ATLASFEM_HEXMESH_HPP
#define ATLASFEM_HEXMESH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "atlasfem/label_volume.hpp"
#include "atlasfem/types.hpp"

namespace atlasfem {

/// Geometry of the voxel lattice a mesh was built from. Needed to locate
/// points in cells (dipole placement) and for fast boundary extraction.
struct GridProvenance {
  std::array<std::size_t, 3> dims{0, 0, 0};
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin{0.0, 0.0, 0.0};
  Mat3 direction;
};

/// Node-deduplicated 8-node hexahedral mesh. Cells use VTK hexahedron
/// ordering (bottom quad counter-clockwise, then the vertically aligned
/// top quad). Node coordinates are exact lattice corner positions in mm.
struct HexMesh {
  std::vector<Vec3> nodes;
  std::vector<std::array<NodeId, 8>> cells;
  std::vector<Label> anatomy_label;   // per cell; 0 = anatomically unlabeled
  std::vector<Label> property_label;  // per cell; always > 0
  std::optional<GridProvenance> provenance;
  /// cell index per voxel (-1 where the voxel carries no cell); present
  /// only on meshes built by voxels_to_hexmesh.
  std::vector<std::int32_t> cell_of_voxel;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t cell_count() const { return cells.size(); }
};

/// Converts labeled voxels to hexahedral cells: one cell per voxel with
/// property != 0, carrying that voxel's property and anatomy labels. Nodes
/// shared by adjacent voxels appear exactly once; node ids are assigned by
/// compacted ascending lattice index and cells follow voxel x-fastest
/// order. Both volumes must live on the same grid and every anatomically
/// labeled voxel must be covered by a property label.
HexMesh voxels_to_hexmesh(const LabelVolume& anatomy, const LabelVolume& property);

/// Minimum over the 8 corners of the determinant of the normalized corner
/// edge-vector triple: 1 for a cube, smaller with distortion, negative for
/// inverted elements.
double scaled_jacobian(const HexMesh& mesh, std::size_t cell_index);

struct MeshStats {
  std::size_t cell_count = 0;
  std::size_t node_count = 0;
  Vec3 bbox_min{0, 0, 0};
  Vec3 bbox_max{0, 0, 0};
  double min_scaled_jacobian = 0.0;
  double mean_scaled_jacobian = 0.0;
  std::map<Label, std::size_t> anatomy_histogram;
  std::map<Label, std::size_t> property_histogram;
};

MeshStats mesh_stats(const HexMesh& mesh);

/// (cell index, local face 0..5) pairs of faces on the mesh boundary.
/// Local faces follow the VTK hexahedron: 0 -x, 1 +x, 2 -y, 3 +y, 4 -z, 5 +z.
std::vector<std::pair<std::size_t, int>> boundary_faces(const HexMesh& mesh);

/// Node ids of a cell's local face, ordered as a quad.
std::array<NodeId, 4> face_nodes(const std::array<NodeId, 8>& cell, int local_face);

}  // namespace atlasfem

#endif
