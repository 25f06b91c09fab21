#include "atlasfem/nrrd_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "atlasfem/error.hpp"
#include "detail/format.hpp"

namespace atlasfem {

namespace {

enum class ElementType { u8, i16, u16, i32, u32 };

std::size_t element_size(ElementType t) {
  switch (t) {
    case ElementType::u8: return 1;
    case ElementType::i16:
    case ElementType::u16: return 2;
    case ElementType::i32:
    case ElementType::u32: return 4;
  }
  return 0;
}

ElementType parse_type(const std::string& s) {
  // Canonical NRRD names plus the standard aliases.
  if (s == "uchar" || s == "unsigned char" || s == "uint8" || s == "uint8_t") return ElementType::u8;
  if (s == "short" || s == "short int" || s == "signed short" || s == "signed short int" ||
      s == "int16" || s == "int16_t")
    return ElementType::i16;
  if (s == "ushort" || s == "unsigned short" || s == "unsigned short int" || s == "uint16" ||
      s == "uint16_t")
    return ElementType::u16;
  if (s == "int" || s == "signed int" || s == "int32" || s == "int32_t") return ElementType::i32;
  if (s == "uint" || s == "unsigned int" || s == "uint32" || s == "uint32_t") return ElementType::u32;
  throw Error(errc::unsupported_type, "label maps are integral; got type '" + s + "'");
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_real(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(errc::malformed_header, "expected a real number, got '" + s + "'");
  }
}

long long parse_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(errc::malformed_header, "expected an integer, got '" + s + "'");
  }
}

/// Parses one "(a,b,c)" vector.
Vec3 parse_vector(const std::string& tok) {
  std::string t = trim(tok);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') {
    throw Error(errc::malformed_header, "expected '(x,y,z)' vector, got '" + tok + "'");
  }
  std::string body = t.substr(1, t.size() - 2);
  Vec3 v{};
  int n = 0;
  std::size_t start = 0;
  while (n < 3) {
    std::size_t comma = body.find(',', start);
    std::string part = comma == std::string::npos ? body.substr(start) : body.substr(start, comma - start);
    v[n++] = parse_real(trim(part));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (n != 3) throw Error(errc::malformed_header, "expected 3 components in '" + tok + "'");
  return v;
}

/// Splits a space-directions value into its parenthesized groups.
std::vector<std::string> split_vectors(const std::string& value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < value.size()) {
    if (std::isspace(static_cast<unsigned char>(value[pos]))) {
      ++pos;
      continue;
    }
    if (value[pos] == '(') {
      std::size_t close = value.find(')', pos);
      if (close == std::string::npos) {
        throw Error(errc::malformed_header, "unterminated vector in 'space directions'");
      }
      out.push_back(value.substr(pos, close - pos + 1));
      pos = close + 1;
    } else {
      std::size_t end = pos;
      while (end < value.size() && !std::isspace(static_cast<unsigned char>(value[end]))) ++end;
      out.push_back(value.substr(pos, end - pos));
      pos = end;
    }
  }
  return out;
}

std::vector<std::uint8_t> gzip_inflate(const std::uint8_t* data, std::size_t size,
                                       std::size_t expected) {
  std::vector<std::uint8_t> out(expected);
  z_stream strm{};
  // 15 + 32: accept both zlib and gzip streams.
  if (inflateInit2(&strm, 15 + 32) != Z_OK) {
    throw Error(errc::io_failure, "zlib inflate initialization failed");
  }
  strm.next_in = const_cast<Bytef*>(data);
  strm.avail_in = static_cast<uInt>(size);
  strm.next_out = out.data();
  strm.avail_out = static_cast<uInt>(expected);
  int rc = inflate(&strm, Z_FINISH);
  std::size_t produced = expected - strm.avail_out;
  inflateEnd(&strm);
  if (produced < expected) {
    throw Error(errc::truncated_data, "gzip payload inflates to " + std::to_string(produced) +
                                          " bytes, need " + std::to_string(expected));
  }
  if (rc != Z_STREAM_END && rc != Z_OK && rc != Z_BUF_ERROR) {
    throw Error(errc::truncated_data, "corrupt gzip payload");
  }
  return out;
}

std::vector<std::uint8_t> gzip_deflate(const std::uint8_t* data, std::size_t size) {
  z_stream strm{};
  // 15 + 16: emit a gzip wrapper, which is what the NRRD gzip encoding means.
  if (deflateInit2(&strm, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) !=
      Z_OK) {
    throw Error(errc::io_failure, "zlib deflate initialization failed");
  }
  std::vector<std::uint8_t> out(deflateBound(&strm, static_cast<uLong>(size)));
  strm.next_in = const_cast<Bytef*>(data);
  strm.avail_in = static_cast<uInt>(size);
  strm.next_out = out.data();
  strm.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&strm, Z_FINISH);
  std::size_t produced = out.size() - strm.avail_out;
  deflateEnd(&strm);
  if (rc != Z_STREAM_END) throw Error(errc::io_failure, "gzip compression failed");
  out.resize(produced);
  return out;
}

}  // namespace

LabelVolume read_nrrd(const std::vector<std::uint8_t>& bytes) {
  // Magic line.
  std::size_t pos = 0;
  auto read_line = [&]() -> std::string {
    std::size_t nl = std::string::npos;
    for (std::size_t i = pos; i < bytes.size(); ++i) {
      if (bytes[i] == '\n') {
        nl = i;
        break;
      }
    }
    if (nl == std::string::npos) {
      throw Error(errc::malformed_header, "header not terminated by a blank line");
    }
    std::string line(reinterpret_cast<const char*>(bytes.data() + pos), nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  std::string magic = read_line();
  if (magic.size() != 8 || magic.rfind("NRRD000", 0) != 0 || magic[7] < '1' || magic[7] > '5') {
    throw Error(errc::malformed_header, "missing NRRD0001..NRRD0005 magic");
  }

  // Header fields until the blank separator line.
  std::map<std::string, std::string> fields;
  std::map<std::string, std::string> metadata;
  while (true) {
    std::string line = read_line();
    if (line.empty()) break;
    if (line[0] == '#') continue;
    std::size_t kv = line.find(":=");
    if (kv != std::string::npos) {
      metadata[trim(line.substr(0, kv))] = trim(line.substr(kv + 2));
      continue;
    }
    std::size_t colon = line.find(':');
    if (colon == std::string::npos || colon + 1 >= line.size() || line[colon + 1] != ' ') {
      throw Error(errc::malformed_header, "expected 'key: value', got '" + line + "'");
    }
    std::string key = to_lower(trim(line.substr(0, colon)));
    fields[key] = trim(line.substr(colon + 1));
  }

  auto field = [&](const char* key) -> const std::string* {
    auto it = fields.find(key);
    return it == fields.end() ? nullptr : &it->second;
  };

  if (field("data file") || field("datafile")) {
    throw Error(errc::unsupported_encoding, "detached-header NRRD is not supported");
  }

  const std::string* type_s = field("type");
  if (!type_s) throw Error(errc::malformed_header, "missing 'type' field");
  ElementType type = parse_type(*type_s);

  const std::string* dim_s = field("dimension");
  if (!dim_s) throw Error(errc::malformed_header, "missing 'dimension' field");
  if (parse_int(*dim_s) != 3) {
    throw Error(errc::dimension_mismatch, "only 3D label maps are supported, dimension is " + *dim_s);
  }

  const std::string* sizes_s = field("sizes");
  if (!sizes_s) throw Error(errc::malformed_header, "missing 'sizes' field");
  std::vector<std::string> size_toks = split_ws(*sizes_s);
  if (size_toks.size() != 3) {
    throw Error(errc::dimension_mismatch, "'sizes' must have 3 entries");
  }
  LabelVolume vol;
  for (int a = 0; a < 3; ++a) {
    long long n = parse_int(size_toks[a]);
    if (n <= 0) throw Error(errc::malformed_header, "sizes must be positive");
    vol.dims[a] = static_cast<std::size_t>(n);
  }
  // Guard the total allocation before touching the payload.
  constexpr std::size_t kMaxVoxels = std::size_t(1) << 28;
  if (vol.dims[0] > kMaxVoxels / vol.dims[1] / vol.dims[2]) {
    throw Error(errc::malformed_header, "volume exceeds the supported voxel count");
  }

  const std::string* enc_s = field("encoding");
  if (!enc_s) throw Error(errc::malformed_header, "missing 'encoding' field");
  std::string enc = to_lower(*enc_s);
  bool gz = false;
  if (enc == "gzip" || enc == "gz") {
    gz = true;
  } else if (enc != "raw") {
    throw Error(errc::unsupported_encoding, "encoding '" + *enc_s + "' is outside the raw/gzip subset");
  }

  // Little-endian is the default when the field is absent.
  bool big_endian = false;
  if (const std::string* en = field("endian")) {
    std::string e = to_lower(*en);
    if (e == "big") {
      big_endian = true;
    } else if (e != "little") {
      throw Error(errc::malformed_header, "endian must be 'little' or 'big'");
    }
  }

  if (const std::string* sd = field("space directions")) {
    std::vector<std::string> vecs = split_vectors(*sd);
    if (vecs.size() != 3) {
      throw Error(errc::malformed_header, "'space directions' must have 3 vectors for a 3D volume");
    }
    for (int a = 0; a < 3; ++a) {
      if (to_lower(trim(vecs[a])) == "none") {
        throw Error(errc::malformed_header, "non-spatial axes are not supported in a label map");
      }
      Vec3 v = parse_vector(vecs[a]);
      double len = norm(v);
      if (!(len > 0.0)) {
        throw Error(errc::invalid_geometry, "space direction vectors must be nonzero");
      }
      vol.spacing[a] = len;
      vol.direction.col[a] = (1.0 / len) * v;
    }
  } else if (const std::string* sp = field("spacings")) {
    std::vector<std::string> toks = split_ws(*sp);
    if (toks.size() != 3) throw Error(errc::malformed_header, "'spacings' must have 3 entries");
    for (int a = 0; a < 3; ++a) {
      double s = parse_real(toks[a]);
      if (!(s > 0.0)) throw Error(errc::invalid_geometry, "spacings must be positive");
      vol.spacing[a] = s;
    }
  }
  if (!(vol.direction.det() > 0.0)) {
    throw Error(errc::invalid_geometry, "direction matrix must have positive determinant");
  }

  if (const std::string* so = field("space origin")) {
    vol.origin = parse_vector(trim(*so));
  }

  // Everything we did not consume is preserved verbatim.
  static const char* kConsumed[] = {"type",   "dimension", "sizes",   "encoding",
                                    "endian", "space directions", "spacings", "space origin"};
  for (const auto& [key, value] : fields) {
    bool consumed = false;
    for (const char* c : kConsumed) consumed = consumed || key == c;
    if (!consumed) metadata[key] = value;
  }
  vol.metadata = std::move(metadata);

  // Payload.
  const std::size_t count = vol.voxel_count();
  const std::size_t esize = element_size(type);
  const std::size_t need = count * esize;
  std::vector<std::uint8_t> raw;
  const std::uint8_t* payload = bytes.data() + pos;
  const std::size_t available = bytes.size() - pos;
  if (gz) {
    raw = gzip_inflate(payload, available, need);
    payload = raw.data();
  } else if (available < need) {
    throw Error(errc::truncated_data, "raw payload has " + std::to_string(available) +
                                          " bytes, need " + std::to_string(need));
  }

  vol.voxels.resize(count);
  auto fetch = [&](std::size_t i) -> std::uint32_t {
    const std::uint8_t* p = payload + i * esize;
    std::uint32_t v = 0;
    if (big_endian) {
      for (std::size_t b = 0; b < esize; ++b) v = (v << 8) | p[b];
    } else {
      for (std::size_t b = esize; b-- > 0;) v = (v << 8) | p[b];
    }
    return v;
  };
  switch (type) {
    case ElementType::u8:
      for (std::size_t i = 0; i < count; ++i) vol.voxels[i] = payload[i];
      break;
    case ElementType::u16:
    case ElementType::u32:
      for (std::size_t i = 0; i < count; ++i) vol.voxels[i] = fetch(i);
      break;
    case ElementType::i16:
      for (std::size_t i = 0; i < count; ++i) {
        auto v = static_cast<std::int16_t>(static_cast<std::uint16_t>(fetch(i)));
        if (v < 0) {
          throw Error(errc::negative_label, "voxel " + std::to_string(i) + " has negative label " +
                                                std::to_string(v));
        }
        vol.voxels[i] = static_cast<Label>(v);
      }
      break;
    case ElementType::i32:
      for (std::size_t i = 0; i < count; ++i) {
        auto v = static_cast<std::int32_t>(fetch(i));
        if (v < 0) {
          throw Error(errc::negative_label, "voxel " + std::to_string(i) + " has negative label " +
                                                std::to_string(v));
        }
        vol.voxels[i] = static_cast<Label>(v);
      }
      break;
  }

  vol.validate();
  return vol;
}

std::vector<std::uint8_t> write_nrrd(const LabelVolume& vol, NrrdEncoding encoding) {
  vol.validate();

  Label max_label = 0;
  for (Label v : vol.voxels) max_label = std::max(max_label, v);
  const char* type_name = "uchar";
  std::size_t esize = 1;
  if (max_label > 0xFFFF) {
    type_name = "uint";
    esize = 4;
  } else if (max_label > 0xFF) {
    type_name = "ushort";
    esize = 2;
  }

  std::ostringstream header;
  header << "NRRD0004\n";
  header << "type: " << type_name << "\n";
  header << "dimension: 3\n";
  header << "sizes: " << vol.dims[0] << " " << vol.dims[1] << " " << vol.dims[2] << "\n";
  header << "space directions:";
  for (int a = 0; a < 3; ++a) {
    Vec3 v = vol.spacing[a] * vol.direction.col[a];
    header << " (" << detail::format_double(v[0]) << "," << detail::format_double(v[1]) << ","
           << detail::format_double(v[2]) << ")";
  }
  header << "\n";
  header << "space origin: (" << detail::format_double(vol.origin[0]) << ","
         << detail::format_double(vol.origin[1]) << "," << detail::format_double(vol.origin[2])
         << ")\n";
  header << "endian: little\n";
  header << "encoding: " << (encoding == NrrdEncoding::gzip ? "gzip" : "raw") << "\n";
  header << "\n";

  std::vector<std::uint8_t> data(vol.voxels.size() * esize);
  for (std::size_t i = 0; i < vol.voxels.size(); ++i) {
    Label v = vol.voxels[i];
    for (std::size_t b = 0; b < esize; ++b) {
      data[i * esize + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
  }
  if (encoding == NrrdEncoding::gzip) data = gzip_deflate(data.data(), data.size());

  const std::string h = header.str();
  std::vector<std::uint8_t> out(h.begin(), h.end());
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

LabelVolume read_nrrd_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_failure, "cannot open '" + path + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return read_nrrd(bytes);
}

void write_nrrd_file(const LabelVolume& vol, const std::string& path, NrrdEncoding encoding) {
  std::vector<std::uint8_t> bytes = write_nrrd(vol, encoding);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::io_failure, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(errc::io_failure, "failed writing '" + path + "'");
}

}  // namespace atlasfem
