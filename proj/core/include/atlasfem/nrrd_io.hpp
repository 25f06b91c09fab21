#ifndef ATLASFEM_NRRD_IO_HPP
#define ATLASFEM_NRRD_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "atlasfem/label_volume.hpp"

namespace atlasfem {

/// NRRD reader for the label-map subset: magic NRRD0001..NRRD0005,
/// dimension 3, integral element types (uchar, short, ushort, int, uint),
/// raw or gzip encoding, single file (detached `data file:` headers are
/// rejected). Per-axis spacing is the Euclidean norm of each space
/// direction vector and the direction matrix holds the normalized columns;
/// both default to 1 mm / identity when the field is absent. Unrecognized
/// header fields and `key:=value` pairs are preserved in metadata.
LabelVolume read_nrrd(const std::vector<std::uint8_t>& bytes);

enum class NrrdEncoding { raw, gzip };

/// Emits an NRRD0004 file with fields in the fixed order
/// type, dimension, sizes, space directions, space origin, endian, encoding,
/// using the narrowest unsigned integer type that holds the maximum label
/// and little-endian data. Geometry round-trips exactly (shortest
/// round-trip decimal formatting), voxels bit-exactly.
std::vector<std::uint8_t> write_nrrd(const LabelVolume& vol, NrrdEncoding encoding);

/// File convenience wrappers; throw Error{errc::io_failure} on I/O trouble.
LabelVolume read_nrrd_file(const std::string& path);
void write_nrrd_file(const LabelVolume& vol, const std::string& path,
                     NrrdEncoding encoding = NrrdEncoding::gzip);

}  // namespace atlasfem

#endif
