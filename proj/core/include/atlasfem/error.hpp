#ifndef ATLASFEM_ERROR_HPP
#define ATLASFEM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace atlasfem {

/// Error codes for every failure the library reports. The CLI maps
/// no_convergence to exit code 1 and everything else to exit code 2.
enum class errc {
  // nrrd_io
  unsupported_encoding,
  unsupported_type,
  dimension_mismatch,
  truncated_data,
  negative_label,
  malformed_header,
  invalid_geometry,
  // atlas
  malformed_json,
  duplicate_name,
  duplicate_label,
  malformed_line,
  channel_out_of_range,
  unknown_structure,
  label_collision,
  // hexmesh
  grid_mismatch,
  uncovered_anatomy,
  empty_domain,
  inverted_element,
  field_length_mismatch,
  malformed_vtk,
  // material
  non_positive_sigma,
  unmapped_label,
  // fem
  length_mismatch,
  source_outside_domain,
  zero_separation,
  no_convergence,
  incompatible_source,
  singular_point,
  // query
  empty_region,
  // cli / io
  io_failure,
  invalid_config,
};

const char* to_string(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace atlasfem

#endif
