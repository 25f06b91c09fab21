#ifndef ATLASFEM_LABEL_VOLUME_HPP
#define ATLASFEM_LABEL_VOLUME_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "atlasfem/types.hpp"

namespace atlasfem {

/// A 3D integer label grid with physical geometry: the atlas label map.
/// Voxels are stored x-fastest; node/voxel (i,j,k) sits at
/// origin + direction * (i*sx, j*sy, k*sz) in millimetres.
struct LabelVolume {
  std::array<std::size_t, 3> dims{0, 0, 0};
  Vec3 spacing{1.0, 1.0, 1.0};  // mm, per logical axis
  Vec3 origin{0.0, 0.0, 0.0};   // mm
  Mat3 direction;               // unit-norm columns, positive determinant
  std::vector<Label> voxels;    // dims[0]*dims[1]*dims[2], x-fastest
  std::map<std::string, std::string> metadata;  // source header fields preserved

  std::size_t voxel_count() const { return dims[0] * dims[1] * dims[2]; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + dims[0] * (j + dims[1] * k);
  }

  Label at(std::size_t i, std::size_t j, std::size_t k) const { return voxels[index(i, j, k)]; }
  Label& at(std::size_t i, std::size_t j, std::size_t k) { return voxels[index(i, j, k)]; }

  /// Physical position of lattice corner (i,j,k) in mm.
  Vec3 node_position(std::size_t i, std::size_t j, std::size_t k) const {
    const Vec3 local{static_cast<double>(i) * spacing[0], static_cast<double>(j) * spacing[1],
                     static_cast<double>(k) * spacing[2]};
    return origin + direction.mul(local);
  }

  /// Throws Error if the structural invariants are violated.
  void validate() const;

  /// Per-label voxel counts.
  std::map<Label, std::size_t> histogram() const;
};

}  // namespace atlasfem

#endif
