#ifndef ATLASFEM_TESTS_HELPERS_HPP
#define ATLASFEM_TESTS_HELPERS_HPP

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "atlasfem/label_volume.hpp"

namespace helpers {

inline atlasfem::LabelVolume make_volume(std::array<std::size_t, 3> dims,
                                         std::vector<atlasfem::Label> voxels,
                                         atlasfem::Vec3 spacing = {1, 1, 1},
                                         atlasfem::Vec3 origin = {0, 0, 0}) {
  atlasfem::LabelVolume vol;
  vol.dims = dims;
  vol.spacing = spacing;
  vol.origin = origin;
  vol.voxels = std::move(voxels);
  return vol;
}

inline atlasfem::LabelVolume uniform_volume(std::array<std::size_t, 3> dims, atlasfem::Label value,
                                            atlasfem::Vec3 spacing = {1, 1, 1}) {
  return make_volume(dims, std::vector<atlasfem::Label>(dims[0] * dims[1] * dims[2], value),
                     spacing);
}

inline atlasfem::LabelVolume random_volume(std::mt19937& rng, std::size_t max_extent,
                                           atlasfem::Label max_label) {
  std::uniform_int_distribution<std::size_t> extent(1, max_extent);
  std::uniform_int_distribution<atlasfem::Label> label(0, max_label);
  atlasfem::LabelVolume vol;
  vol.dims = {extent(rng), extent(rng), extent(rng)};
  vol.voxels.resize(vol.dims[0] * vol.dims[1] * vol.dims[2]);
  for (auto& v : vol.voxels) v = label(rng);
  std::uniform_real_distribution<double> sp(0.25, 3.0);
  vol.spacing = {sp(rng), sp(rng), sp(rng)};
  std::uniform_real_distribution<double> og(-10.0, 10.0);
  vol.origin = {og(rng), og(rng), og(rng)};
  return vol;
}

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    dir_ = base / ("atlasfem_test_" + std::to_string(rd()) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  std::filesystem::path dir_;
};

}  // namespace helpers

#endif
