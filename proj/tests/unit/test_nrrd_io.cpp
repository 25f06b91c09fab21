#include <doctest.h>

#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "atlasfem/error.hpp"
#include "atlasfem/nrrd_io.hpp"
#include "test_helpers.hpp"

using namespace atlasfem;

namespace {

std::vector<std::uint8_t> file_bytes(const std::string& header,
                                     const std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

errc code_of(const std::vector<std::uint8_t>& bytes) {
  try {
    read_nrrd(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return errc::io_failure;
}

}  // namespace

TEST_CASE("minimal conforming file") {
  const auto bytes = file_bytes(
      "NRRD0004\ntype: uchar\ndimension: 3\nsizes: 1 1 1\nencoding: raw\n\n", {0x07});
  const LabelVolume vol = read_nrrd(bytes);
  CHECK(vol.dims == std::array<std::size_t, 3>{1, 1, 1});
  CHECK(vol.voxels == std::vector<Label>{7});
  CHECK(vol.spacing == Vec3{1.0, 1.0, 1.0});
  CHECK(vol.origin == Vec3{0.0, 0.0, 0.0});
  CHECK(vol.direction == Mat3::identity());
}

TEST_CASE("gzip all-background volume") {
  LabelVolume zeros = helpers::uniform_volume({2, 2, 2}, 0);
  // Build the gzip payload with the writer, then splice it under a
  // hand-written header so the reader is exercised on foreign bytes.
  const auto written = write_nrrd(zeros, NrrdEncoding::gzip);
  const std::string all(written.begin(), written.end());
  const auto split = all.find("\n\n");
  REQUIRE(split != std::string::npos);
  const std::string header =
      "NRRD0004\ntype: uchar\ndimension: 3\nsizes: 2 2 2\nencoding: gzip\n\n";
  const std::vector<std::uint8_t> payload(written.begin() + split + 2, written.end());
  const LabelVolume vol = read_nrrd(file_bytes(header, payload));
  CHECK(vol.voxels == std::vector<Label>(8, 0));
}

TEST_CASE("typed parse errors") {
  CHECK(code_of(file_bytes("NRRD0004\ntype: uchar\ndimension: 3\nsizes: 1 1 1\nencoding: bzip2\n\n",
                           {0})) == errc::unsupported_encoding);
  CHECK(code_of(file_bytes("NRRD0004\ntype: float\ndimension: 3\nsizes: 1 1 1\nencoding: raw\n\n",
                           {0, 0, 0, 0})) == errc::unsupported_type);
  CHECK(code_of(file_bytes("NRRD0004\ntype: uchar\ndimension: 2\nsizes: 1 1\nencoding: raw\n\n",
                           {0})) == errc::dimension_mismatch);
  CHECK(code_of(file_bytes("NRRD0004\ntype: uchar\ndimension: 3\nsizes: 2 2 2\nencoding: raw\n\n",
                           {0, 0, 0})) == errc::truncated_data);
  // -1 as little-endian short.
  CHECK(code_of(file_bytes("NRRD0004\ntype: short\ndimension: 3\nsizes: 1 1 1\nencoding: raw\n\n",
                           {0xFF, 0xFF})) == errc::negative_label);
  CHECK(code_of(file_bytes("NRRD0001\ntype: uchar\ndimension: 3\nsizes: 1 1 1\nencoding: raw\n"
                           "data file: other.raw\n\n",
                           {0})) == errc::unsupported_encoding);
  CHECK(code_of({'N', 'O', 'P', 'E'}) == errc::malformed_header);
}

TEST_CASE("spacing extraction from diagonal space directions") {
  const auto bytes = file_bytes(
      "NRRD0005\ntype: uchar\ndimension: 3\nsizes: 1 1 1\n"
      "space directions: (0.75,0,0) (0,0.5,0) (0,0,2)\nspace origin: (1,2,3)\nencoding: raw\n\n",
      {1});
  const LabelVolume vol = read_nrrd(bytes);
  CHECK(vol.spacing == Vec3{0.75, 0.5, 2.0});
  CHECK(vol.origin == Vec3{1.0, 2.0, 3.0});
  CHECK(vol.direction == Mat3::identity());
}

TEST_CASE("oblique space directions normalize to unit columns") {
  const auto bytes = file_bytes(
      "NRRD0004\ntype: uchar\ndimension: 3\nsizes: 1 1 1\n"
      "space directions: (3,4,0) (0,2,0) (0,0,1)\nencoding: raw\n\n",
      {1});
  const LabelVolume vol = read_nrrd(bytes);
  CHECK(vol.spacing[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(vol.direction.col[0][0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(vol.direction.col[0][1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(norm(vol.direction.col[0]) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("big endian and default little endian") {
  const auto big = file_bytes(
      "NRRD0004\ntype: ushort\ndimension: 3\nsizes: 1 1 1\nendian: big\nencoding: raw\n\n",
      {0x01, 0x2C});
  CHECK(read_nrrd(big).voxels == std::vector<Label>{300});
  const auto little_default = file_bytes(
      "NRRD0004\ntype: ushort\ndimension: 3\nsizes: 1 1 1\nencoding: raw\n\n", {0x2C, 0x01});
  CHECK(read_nrrd(little_default).voxels == std::vector<Label>{300});
}

TEST_CASE("CRLF line endings are tolerated") {
  const auto bytes = file_bytes(
      "NRRD0004\r\ntype: uchar\r\ndimension: 3\r\nsizes: 1 1 1\r\nencoding: raw\r\n\r\n", {5});
  CHECK(read_nrrd(bytes).voxels == std::vector<Label>{5});
}

TEST_CASE("legacy spacings field without space directions") {
  const auto bytes = file_bytes(
      "NRRD0002\ntype: uchar\ndimension: 3\nsizes: 1 1 1\nspacings: 0.5 1.25 2\nencoding: raw\n\n",
      {1});
  const LabelVolume vol = read_nrrd(bytes);
  CHECK(vol.spacing == Vec3{0.5, 1.25, 2.0});
  CHECK(vol.direction == Mat3::identity());
}

TEST_CASE("type aliases and comments") {
  const auto bytes = file_bytes(
      "NRRD0004\n# a comment line\ntype: unsigned char\ndimension: 3\nsizes: 1 1 1\n"
      "encoding: raw\nkinds: domain domain domain\nmodality:=label\n\n",
      {9});
  const LabelVolume vol = read_nrrd(bytes);
  CHECK(vol.voxels == std::vector<Label>{9});
  CHECK(vol.metadata.at("kinds") == "domain domain domain");
  CHECK(vol.metadata.at("modality") == "label");
}

TEST_CASE("writer picks the narrowest type") {
  LabelVolume vol = helpers::uniform_volume({1, 1, 1}, 200);
  auto text = [](const std::vector<std::uint8_t>& b) { return std::string(b.begin(), b.end()); };
  CHECK(text(write_nrrd(vol, NrrdEncoding::raw)).find("type: uchar\n") != std::string::npos);
  vol.voxels[0] = 300;
  CHECK(text(write_nrrd(vol, NrrdEncoding::raw)).find("type: ushort\n") != std::string::npos);
  vol.voxels[0] = 70000;
  CHECK(text(write_nrrd(vol, NrrdEncoding::raw)).find("type: uint\n") != std::string::npos);
}

TEST_CASE("writer emits fields in the documented order") {
  const auto bytes = write_nrrd(helpers::uniform_volume({2, 1, 1}, 1), NrrdEncoding::raw);
  const std::string text(bytes.begin(), bytes.end());
  const char* keys[] = {"NRRD0004\n", "type: ",   "dimension: ", "sizes: ",
                        "space directions: ",     "space origin: ", "endian: little\n",
                        "encoding: "};
  std::size_t pos = 0;
  for (const char* key : keys) {
    const std::size_t found = text.find(key, pos);
    REQUIRE(found != std::string::npos);
    pos = found;
  }
}

TEST_CASE("round trip reproduces volume exactly") {
  std::mt19937 rng(20240811);
  for (int trial = 0; trial < 8; ++trial) {
    const LabelVolume vol = helpers::random_volume(rng, 6, trial % 2 ? 70000 : 300);
    for (NrrdEncoding enc : {NrrdEncoding::raw, NrrdEncoding::gzip}) {
      const LabelVolume back = read_nrrd(write_nrrd(vol, enc));
      CHECK(back.dims == vol.dims);
      CHECK(back.voxels == vol.voxels);
      for (int a = 0; a < 3; ++a) {
        CHECK(back.spacing[a] == doctest::Approx(vol.spacing[a]).epsilon(1e-13));
        CHECK(back.origin[a] == doctest::Approx(vol.origin[a]).epsilon(1e-13));
        for (int b = 0; b < 3; ++b) {
          CHECK(back.direction.col[a][b] ==
                doctest::Approx(vol.direction.col[a][b]).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("parser totality under random corruption") {
  const LabelVolume vol = helpers::uniform_volume({3, 2, 2}, 5);
  std::mt19937 rng(7);
  for (NrrdEncoding enc : {NrrdEncoding::raw, NrrdEncoding::gzip}) {
    const auto valid = write_nrrd(vol, enc);
    for (int trial = 0; trial < 300; ++trial) {
      auto bytes = valid;
      std::uniform_int_distribution<std::size_t> pos(0, bytes.size() - 1);
      std::uniform_int_distribution<int> byte(0, 255);
      const int mode = trial % 3;
      if (mode == 0) bytes[pos(rng)] = static_cast<std::uint8_t>(byte(rng));
      if (mode == 1) bytes.resize(pos(rng));
      if (mode == 2) bytes.insert(bytes.begin() + pos(rng), static_cast<std::uint8_t>(byte(rng)));
      try {
        const LabelVolume parsed = read_nrrd(bytes);
        parsed.validate();  // either a fully valid volume ...
      } catch (const Error&) {
        // ... or a typed error; anything else fails the test.
      }
    }
  }
}

TEST_CASE("file round trip") {
  helpers::TempDir tmp;
  const LabelVolume vol = helpers::uniform_volume({2, 3, 4}, 7);
  write_nrrd_file(vol, tmp.path("v.nrrd"));
  CHECK(read_nrrd_file(tmp.path("v.nrrd")).voxels == vol.voxels);
  CHECK_THROWS_AS(read_nrrd_file(tmp.path("missing.nrrd")), Error);
}
