#include "atlasfem/label_volume.hpp"

#include "atlasfem/error.hpp"

namespace atlasfem {

void LabelVolume::validate() const {
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) {
    throw Error(errc::invalid_geometry, "volume dimensions must be positive");
  }
  if (voxels.size() != voxel_count()) {
    throw Error(errc::truncated_data, "voxel array length does not match dimensions");
  }
  for (int a = 0; a < 3; ++a) {
    if (!(spacing[a] > 0.0)) {
      throw Error(errc::invalid_geometry, "spacing components must be positive");
    }
  }
  if (!(direction.det() > 0.0)) {
    throw Error(errc::invalid_geometry, "direction matrix must have positive determinant");
  }
}

std::map<Label, std::size_t> LabelVolume::histogram() const {
  std::map<Label, std::size_t> counts;
  for (Label v : voxels) ++counts[v];
  return counts;
}

}  // namespace atlasfem
