#include "atlasfem/error.hpp"

namespace atlasfem {

const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::unsupported_encoding: return "UnsupportedEncoding";
    case errc::unsupported_type: return "UnsupportedType";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::truncated_data: return "TruncatedData";
    case errc::negative_label: return "NegativeLabel";
    case errc::malformed_header: return "MalformedHeader";
    case errc::invalid_geometry: return "InvalidGeometry";
    case errc::malformed_json: return "MalformedJson";
    case errc::duplicate_name: return "DuplicateName";
    case errc::duplicate_label: return "DuplicateLabel";
    case errc::malformed_line: return "MalformedLine";
    case errc::channel_out_of_range: return "ChannelOutOfRange";
    case errc::unknown_structure: return "UnknownStructure";
    case errc::label_collision: return "LabelCollision";
    case errc::grid_mismatch: return "GridMismatch";
    case errc::uncovered_anatomy: return "UncoveredAnatomy";
    case errc::empty_domain: return "EmptyDomain";
    case errc::inverted_element: return "InvertedElement";
    case errc::field_length_mismatch: return "FieldLengthMismatch";
    case errc::malformed_vtk: return "MalformedVtk";
    case errc::non_positive_sigma: return "NonPositiveSigma";
    case errc::unmapped_label: return "UnmappedLabel";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::source_outside_domain: return "SourceOutsideDomain";
    case errc::zero_separation: return "ZeroSeparation";
    case errc::no_convergence: return "NoConvergence";
    case errc::incompatible_source: return "IncompatibleSource";
    case errc::singular_point: return "SingularPoint";
    case errc::empty_region: return "EmptyRegion";
    case errc::io_failure: return "IoFailure";
    case errc::invalid_config: return "InvalidConfig";
  }
  return "UnknownError";
}

}  // namespace atlasfem
