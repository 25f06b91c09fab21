#ifndef ATLASFEM_VTK_IO_HPP
#define ATLASFEM_VTK_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "atlasfem/hexmesh.hpp"

namespace atlasfem {

struct PointField {
  std::string name;
  std::vector<double> values;  // one per node
};

/// Writes the mesh as an ASCII VTK legacy unstructured grid: POINTS double,
/// CELLS with 8-node rows, CELL_TYPES all 12, CELL_DATA with integer
/// anatomy_label and property_label SCALARS, and optionally POINT_DATA with
/// one named double SCALARS array. Doubles use shortest round-trip decimal
/// formatting, so re-parsing recovers them bit-exactly.
std::string write_vtk_legacy(const HexMesh& mesh,
                             const std::optional<PointField>& point_field = std::nullopt);

struct VtkDataset {
  HexMesh mesh;  // no provenance
  std::optional<PointField> point_field;
};

/// Reads the subset of ASCII VTK legacy files produced by write_vtk_legacy.
VtkDataset read_vtk_legacy(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace atlasfem

#endif
