#include <doctest.h>

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "atlasfem/error.hpp"
#include "atlasfem/material.hpp"
#include "atlasfem/nrrd_io.hpp"
#include "atlasfem/pipeline.hpp"
#include "atlasfem/vtk_io.hpp"
#include "test_helpers.hpp"

using namespace atlasfem;

namespace {

const char* kHierarchy = R"({
  "name": "head",
  "children": [
    {"name": "brain", "children": [
      {"name": "left_gyrus", "label": 2},
      {"name": "right_gyrus", "label": 3}
    ]}
  ]
})";

/// 4x4x4 anatomy: a 2x2x2 blob of label 2 next to a 2x2x2 blob of label 3.
LabelVolume demo_anatomy() {
  LabelVolume vol = helpers::uniform_volume({4, 4, 4}, 0);
  for (std::size_t k = 1; k <= 2; ++k) {
    for (std::size_t j = 1; j <= 2; ++j) {
      vol.at(1, j, k) = 2;
      vol.at(2, j, k) = 3;
    }
  }
  return vol;
}

std::string demo_config(helpers::TempDir& tmp) {
  std::ostringstream cfg;
  cfg << R"({
  "inputs": {
    "anatomy": ")" << tmp.path("anatomy.nrrd") << R"(",
    "hierarchy": ")" << tmp.path("hierarchy.json") << R"("
  },
  "edit": {
    "source": "anatomy",
    "directives": [
      {"op": "merge", "structures": ["brain"], "target": 1},
      {"op": "shells", "shells": [{"thickness_mm": 1.0, "label": 5}]}
    ]
  },
  "dipole": {"position_mm": [2.0, 2.0, 2.0], "moment_Am": [1e-8, 0.0, 0.0], "separation_mm": 1.0},
  "solver": {"tol": 1e-10},
  "query": {"structures": ["left_gyrus", "right_gyrus", "brain"]},
  "outputs": {
    "edited": ")" << tmp.path("edited.nrrd") << R"(",
    "mesh_vtk": ")" << tmp.path("mesh.vtk") << R"(",
    "mesh_stats": ")" << tmp.path("mesh_stats.json") << R"(",
    "field_vtk": ")" << tmp.path("field.vtk") << R"(",
    "solve_report": ")" << tmp.path("solve_report.json") << R"(",
    "report": ")" << tmp.path("report.csv") << R"("
  }
})";
  return cfg.str();
}

}  // namespace

TEST_CASE("run config parsing and defaults") {
  const RunConfig cfg = parse_run_config(R"({
    "inputs": {"anatomy": "a.nrrd", "property": "p.nrrd"},
    "dipole": {"position_mm": [1, 2, 3], "direction": [0, 0, 2]},
    "query": {"structures": ["x"]}
  })");
  CHECK(cfg.inputs.anatomy == "a.nrrd");
  CHECK(cfg.has_dipole);
  CHECK(cfg.dipole.moment_Am == Vec3{0.0, 0.0, 1e-8});  // default magnitude
  CHECK(!cfg.dipole.separation_mm.has_value());
  CHECK(cfg.solver.tol == 1e-8);
  CHECK(cfg.outputs.mesh_vtk == "mesh.vtk");
  CHECK(cfg.outputs.report == "report.csv");
  CHECK(cfg.query.format == ReportFormat::csv);

  const RunConfig json_report = parse_run_config(R"({
    "query": {"structures": ["x"]},
    "outputs": {"report": "out.json"}
  })");
  CHECK(json_report.query.format == ReportFormat::json);
}

TEST_CASE("run config rejects malformed sections") {
  auto code = [](const std::string& text) {
    try {
      parse_run_config(text);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("expected a config error");
    return errc::io_failure;
  };
  CHECK(code("{nope") == errc::invalid_config);
  CHECK(code(R"({"dipole": {"position_mm": [1, 2]}})") == errc::invalid_config);
  CHECK(code(R"({"dipole": {"position_mm": [1,2,3]}})") == errc::invalid_config);
  CHECK(code(R"({"edit": {"directives": [{"op": "merge", "target": 1}]}})") ==
        errc::invalid_config);
  CHECK(code(R"({"edit": {"directives": [{"op": "warp"}]}})") == errc::invalid_config);
  CHECK(code(R"({"solver": {"tol": 0}})") == errc::invalid_config);
  CHECK(code(R"({"query": {"structures": ["x"], "format": "xml"}})") == errc::invalid_config);
}

TEST_CASE("run_info reports dims and a brute-force label histogram") {
  helpers::TempDir tmp;
  const LabelVolume vol = demo_anatomy();
  write_nrrd_file(vol, tmp.path("a.nrrd"));
  write_text_file(tmp.path("colors.txt"), "2 left_gyrus 255 0 0 255\n3 right_gyrus 0 255 0 255\n");

  std::ostringstream out;
  run_info(tmp.path("a.nrrd"), tmp.path("colors.txt"), out);
  const std::string text = out.str();
  CHECK(text.find("dims: 4x4x4") != std::string::npos);
  CHECK(text.find("voxels: 64") != std::string::npos);

  std::map<Label, std::size_t> expected;
  for (Label v : vol.voxels) ++expected[v];
  for (const auto& [label, count] : expected) {
    const std::string row = "  " + std::to_string(label) + ": " + std::to_string(count);
    CHECK(text.find(row) != std::string::npos);
  }
  CHECK(text.find("(left_gyrus)") != std::string::npos);
}

TEST_CASE("file pipeline equals the in-memory module calls") {
  helpers::TempDir tmp;
  const LabelVolume anatomy = demo_anatomy();
  write_nrrd_file(anatomy, tmp.path("anatomy.nrrd"));
  write_text_file(tmp.path("hierarchy.json"), kHierarchy);
  const RunConfig cfg = parse_run_config(demo_config(tmp));

  // File route.
  run_edit(cfg);
  run_mesh(cfg);
  run_solve(cfg);
  run_query(cfg);

  // In-memory route with the module operations directly.
  const AtlasHierarchy hierarchy = parse_hierarchy(kHierarchy);
  LabelVolume property = merge_labels(anatomy, labels_under(hierarchy, "brain"), 1);
  property = generate_shells(property, {{1.0, 5}});
  const HexMesh mesh = voxels_to_hexmesh(anatomy, property);
  FemSystem system = assemble(mesh, assign_conductivity(mesh, default_conductivity_table()));
  DipoleSource dipole;
  dipole.position_mm = {2.0, 2.0, 2.0};
  dipole.moment_Am = {1e-8, 0.0, 0.0};
  dipole.separation_mm = 1.0;
  system.rhs = dipole_rhs(mesh, dipole);
  const SolveResult result = solve(system, BoundaryConditions{}, 1e-10);
  std::vector<RegionStats> stats;
  for (const char* name : {"left_gyrus", "right_gyrus", "brain"}) {
    stats.push_back(region_stats(mesh, result.field, hierarchy, name));
  }

  // Byte-for-byte: the stages round-trip through NRRD/VTK without loss.
  const auto edited_bytes = write_nrrd(property, NrrdEncoding::gzip);
  std::ifstream edited_file(tmp.path("edited.nrrd"), std::ios::binary);
  const std::vector<std::uint8_t> edited_disk((std::istreambuf_iterator<char>(edited_file)),
                                              std::istreambuf_iterator<char>());
  CHECK(edited_disk == edited_bytes);

  CHECK(read_text_file(tmp.path("mesh.vtk")) == write_vtk_legacy(mesh));
  CHECK(read_text_file(tmp.path("field.vtk")) ==
        write_vtk_legacy(mesh, PointField{"potential", result.field.values_uV}));
  CHECK(read_text_file(tmp.path("report.csv")) == report(stats, ReportFormat::csv));

  // Sanity on the report itself: four lines, header first.
  std::istringstream report_text(read_text_file(tmp.path("report.csv")));
  std::string line;
  std::getline(report_text, line);
  CHECK(line == "structure,node_count,max_uV,mean_uV,min_uV");
  std::size_t rows = 0;
  while (std::getline(report_text, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("run_all chains the stages") {
  helpers::TempDir tmp;
  write_nrrd_file(demo_anatomy(), tmp.path("anatomy.nrrd"));
  write_text_file(tmp.path("hierarchy.json"), kHierarchy);
  const RunConfig cfg = parse_run_config(demo_config(tmp));
  run_all(cfg);
  CHECK(read_text_file(tmp.path("field.vtk")).find("SCALARS potential double 1") !=
        std::string::npos);
  CHECK(read_text_file(tmp.path("report.csv")).find("left_gyrus") != std::string::npos);
  const auto report_json = read_text_file(tmp.path("solve_report.json"));
  CHECK(report_json.find("\"converged\": true") != std::string::npos);
  CHECK(report_json.find("pure-neumann-zero-mean") != std::string::npos);
}

TEST_CASE("empty edit script round-trips the volume bytes") {
  helpers::TempDir tmp;
  const LabelVolume vol = demo_anatomy();
  write_nrrd_file(vol, tmp.path("anatomy.nrrd"));
  RunConfig cfg;
  cfg.inputs.anatomy = tmp.path("anatomy.nrrd");
  cfg.outputs.edited = tmp.path("edited.nrrd");
  run_edit(cfg);
  // Input and output are both in the writer's canonical encoding, so an
  // empty script reproduces the file byte for byte.
  CHECK(read_text_file(tmp.path("edited.nrrd")) == read_text_file(tmp.path("anatomy.nrrd")));
  const LabelVolume back = read_nrrd_file(tmp.path("edited.nrrd"));
  CHECK(back.voxels == vol.voxels);
  CHECK(back.dims == vol.dims);
}

TEST_CASE("merge-then-remove script composes the module operations") {
  helpers::TempDir tmp;
  const LabelVolume vol = demo_anatomy();
  write_nrrd_file(vol, tmp.path("anatomy.nrrd"));
  RunConfig cfg;
  cfg.inputs.anatomy = tmp.path("anatomy.nrrd");
  cfg.outputs.edited = tmp.path("edited.nrrd");
  EditDirective merge;
  merge.kind = EditDirective::Kind::merge;
  merge.labels = {2, 3};
  merge.target = 2;
  EditDirective remove;
  remove.kind = EditDirective::Kind::remove;
  remove.labels = {2};
  cfg.edit.directives = {merge, remove};
  run_edit(cfg);

  const LabelVolume expected = remove_labels(merge_labels(vol, {2, 3}, 2), {2});
  CHECK(read_nrrd_file(tmp.path("edited.nrrd")).voxels == expected.voxels);
}

TEST_CASE("mesh stage writes the expected stats JSON") {
  helpers::TempDir tmp;
  const LabelVolume block = helpers::uniform_volume({2, 2, 2}, 1);
  write_nrrd_file(block, tmp.path("block.nrrd"));
  RunConfig cfg;
  cfg.inputs.anatomy = tmp.path("block.nrrd");
  cfg.inputs.property = tmp.path("block.nrrd");
  cfg.outputs.mesh_vtk = tmp.path("mesh.vtk");
  cfg.outputs.mesh_stats = tmp.path("stats.json");
  run_mesh(cfg);
  const auto stats = nlohmann::json::parse(read_text_file(tmp.path("stats.json")));
  CHECK(stats["cells"] == 8);
  CHECK(stats["nodes"] == 27);
  CHECK(stats["min_scaled_jacobian"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stats["property_histogram"]["1"] == 8);
}

TEST_CASE("empty mesh domain is a typed failure") {
  helpers::TempDir tmp;
  write_nrrd_file(helpers::uniform_volume({2, 2, 2}, 0), tmp.path("zeros.nrrd"));
  RunConfig cfg;
  cfg.inputs.anatomy = tmp.path("zeros.nrrd");
  cfg.inputs.property = tmp.path("zeros.nrrd");
  cfg.outputs.mesh_vtk = tmp.path("mesh.vtk");
  cfg.outputs.mesh_stats = tmp.path("stats.json");
  try {
    run_mesh(cfg);
    FAIL("expected EmptyDomain");
  } catch (const Error& e) {
    CHECK(e.code() == errc::empty_domain);
  }
}

TEST_CASE("pipeline configuration errors surface as typed errors") {
  helpers::TempDir tmp;
  write_nrrd_file(demo_anatomy(), tmp.path("anatomy.nrrd"));
  write_text_file(tmp.path("hierarchy.json"), kHierarchy);

  RunConfig cfg = parse_run_config(demo_config(tmp));
  cfg.edit.directives[0].structures = {"no_such_structure"};
  CHECK_THROWS_AS(run_edit(cfg), Error);

  RunConfig no_property = parse_run_config(demo_config(tmp));
  no_property.edit.directives.clear();
  CHECK_THROWS_AS(run_mesh(no_property), Error);

  RunConfig no_dipole = parse_run_config(demo_config(tmp));
  no_dipole.has_dipole = false;
  CHECK_THROWS_AS(run_solve(no_dipole), Error);

  RunConfig missing_field = parse_run_config(demo_config(tmp));
  CHECK_THROWS_AS(run_query(missing_field), Error);
}
