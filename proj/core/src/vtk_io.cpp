#include "atlasfem/vtk_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "atlasfem/error.hpp"
#include "detail/format.hpp"

namespace atlasfem {

std::string write_vtk_legacy(const HexMesh& mesh, const std::optional<PointField>& point_field) {
  if (point_field && point_field->values.size() != mesh.node_count()) {
    throw Error(errc::field_length_mismatch,
                "point field '" + point_field->name + "' has " +
                    std::to_string(point_field->values.size()) + " values for " +
                    std::to_string(mesh.node_count()) + " nodes");
  }
  if (mesh.anatomy_label.size() != mesh.cell_count() ||
      mesh.property_label.size() != mesh.cell_count()) {
    throw Error(errc::field_length_mismatch, "cell label arrays must match the cell count");
  }

  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\n";
  out << "labeled hexahedral mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.node_count() << " double\n";
  for (const Vec3& p : mesh.nodes) {
    out << detail::format_double(p[0]) << " " << detail::format_double(p[1]) << " "
        << detail::format_double(p[2]) << "\n";
  }
  out << "CELLS " << mesh.cell_count() << " " << 9 * mesh.cell_count() << "\n";
  for (const auto& cell : mesh.cells) {
    out << "8";
    for (NodeId n : cell) out << " " << n;
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.cell_count() << "\n";
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) out << "12\n";
  out << "CELL_DATA " << mesh.cell_count() << "\n";
  out << "SCALARS anatomy_label int 1\n";
  out << "LOOKUP_TABLE default\n";
  for (Label l : mesh.anatomy_label) out << l << "\n";
  out << "SCALARS property_label int 1\n";
  out << "LOOKUP_TABLE default\n";
  for (Label l : mesh.property_label) out << l << "\n";
  if (point_field) {
    out << "POINT_DATA " << mesh.node_count() << "\n";
    out << "SCALARS " << point_field->name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : point_field->values) out << detail::format_double(v) << "\n";
  }
  return out.str();
}

namespace {

[[noreturn]] void bad_vtk(const std::string& what) { throw Error(errc::malformed_vtk, what); }

}  // namespace

VtkDataset read_vtk_legacy(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# vtk DataFile", 0) != 0) bad_vtk("missing VTK header line");
  if (!std::getline(in, line)) bad_vtk("missing title line");
  std::string format;
  if (!(in >> format) || format != "ASCII") bad_vtk("only ASCII files are supported");
  std::string kw, dataset;
  if (!(in >> kw >> dataset) || kw != "DATASET" || dataset != "UNSTRUCTURED_GRID") {
    bad_vtk("expected DATASET UNSTRUCTURED_GRID");
  }

  VtkDataset ds;
  HexMesh& mesh = ds.mesh;
  std::size_t n_points = 0, n_cells = 0;
  std::string pending;
  auto next_keyword = [&](std::string& out_kw) {
    if (!pending.empty()) {
      out_kw = std::move(pending);
      pending.clear();
      return true;
    }
    return static_cast<bool>(in >> out_kw);
  };
  while (next_keyword(kw)) {
    if (kw == "POINTS") {
      std::string vtype;
      if (!(in >> n_points >> vtype)) bad_vtk("malformed POINTS header");
      if (vtype != "double" && vtype != "float") bad_vtk("POINTS must be float or double");
      mesh.nodes.resize(n_points);
      for (auto& p : mesh.nodes) {
        if (!(in >> p[0] >> p[1] >> p[2])) bad_vtk("truncated POINTS block");
      }
    } else if (kw == "CELLS") {
      std::size_t total = 0;
      if (!(in >> n_cells >> total)) bad_vtk("malformed CELLS header");
      if (total != 9 * n_cells) bad_vtk("only 8-node hexahedra are supported");
      mesh.cells.resize(n_cells);
      for (auto& cell : mesh.cells) {
        std::size_t n = 0;
        if (!(in >> n) || n != 8) bad_vtk("only 8-node hexahedra are supported");
        for (auto& id : cell) {
          if (!(in >> id)) bad_vtk("truncated CELLS block");
          if (id >= n_points) bad_vtk("cell references node " + std::to_string(id));
        }
      }
    } else if (kw == "CELL_TYPES") {
      std::size_t n = 0;
      if (!(in >> n) || n != n_cells) bad_vtk("CELL_TYPES count mismatch");
      for (std::size_t c = 0; c < n; ++c) {
        int t = 0;
        if (!(in >> t) || t != 12) bad_vtk("only VTK_HEXAHEDRON (12) cells are supported");
      }
    } else if (kw == "CELL_DATA" || kw == "POINT_DATA") {
      const bool cell_data = kw == "CELL_DATA";
      std::size_t n = 0;
      if (!(in >> n) || n != (cell_data ? n_cells : n_points)) bad_vtk(kw + " count mismatch");
      // One or more SCALARS arrays follow.
      std::string token;
      while (in >> token) {
        if (token != "SCALARS") {
          pending = token;  // next section keyword, handled by the outer loop
          break;
        }
        std::string name, vtype;
        int comps = 1;
        if (!(in >> name >> vtype >> comps) || comps != 1) bad_vtk("malformed SCALARS header");
        std::string lt, lt_name;
        if (!(in >> lt >> lt_name) || lt != "LOOKUP_TABLE") bad_vtk("expected LOOKUP_TABLE");
        if (cell_data) {
          std::vector<Label>* target = nullptr;
          if (name == "anatomy_label") target = &mesh.anatomy_label;
          else if (name == "property_label") target = &mesh.property_label;
          if (target) {
            target->resize(n);
            for (auto& v : *target) {
              if (!(in >> v)) bad_vtk("truncated " + name + " block");
            }
          } else {
            double skip;
            for (std::size_t i = 0; i < n; ++i) {
              if (!(in >> skip)) bad_vtk("truncated cell array " + name);
            }
          }
        } else {
          PointField field;
          field.name = name;
          field.values.resize(n);
          for (auto& v : field.values) {
            if (!(in >> v)) bad_vtk("truncated point array " + name);
          }
          ds.point_field = std::move(field);
        }
      }
    } else {
      bad_vtk("unexpected section '" + kw + "'");
    }
  }

  if (mesh.nodes.empty() || mesh.cells.empty()) bad_vtk("file has no mesh");
  if (mesh.anatomy_label.size() != n_cells || mesh.property_label.size() != n_cells) {
    bad_vtk("missing anatomy_label/property_label cell arrays");
  }
  return ds;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_failure, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::io_failure, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error(errc::io_failure, "failed writing '" + path + "'");
}

}  // namespace atlasfem
