#include "atlasfem/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>

#include "atlasfem/error.hpp"
#include "atlasfem/material.hpp"
#include "atlasfem/nrrd_io.hpp"
#include "atlasfem/vtk_io.hpp"
#include "detail/format.hpp"

namespace atlasfem {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(errc::invalid_config, std::string(what) + ": " + e.what());
  }
}

std::string get_string(const json& j, const char* key, const std::string& fallback = "") {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string()) throw Error(errc::invalid_config, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

Vec3 get_vec3(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != 3) {
    throw Error(errc::invalid_config, std::string("'") + key + "' must be an array of 3 numbers");
  }
  Vec3 v{};
  for (int a = 0; a < 3; ++a) {
    if (!(*it)[a].is_number()) {
      throw Error(errc::invalid_config, std::string("'") + key + "' must be an array of 3 numbers");
    }
    v[a] = (*it)[a].get<double>();
  }
  return v;
}

LabelSet get_label_set(const json& j, const char* key) {
  LabelSet out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  if (!it->is_array()) throw Error(errc::invalid_config, std::string("'") + key + "' must be an array");
  for (const json& v : *it) {
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      throw Error(errc::invalid_config, std::string("'") + key + "' entries must be positive integers");
    }
    out.insert(static_cast<Label>(v.get<long long>()));
  }
  return out;
}

EditDirective parse_directive(const json& j) {
  if (!j.is_object()) throw Error(errc::invalid_config, "edit directive must be an object");
  EditDirective d;
  const std::string op = get_string(j, "op");
  d.labels = get_label_set(j, "labels");
  if (auto it = j.find("structures"); it != j.end()) {
    if (!it->is_array()) throw Error(errc::invalid_config, "'structures' must be an array");
    for (const json& s : *it) d.structures.push_back(s.get<std::string>());
  }
  if (auto it = j.find("structure"); it != j.end()) {
    d.structures.push_back(it->get<std::string>());
  }
  if (op == "merge") {
    d.kind = EditDirective::Kind::merge;
    auto it = j.find("target");
    if (it == j.end() || !it->is_number_integer() || it->get<long long>() <= 0) {
      throw Error(errc::invalid_config, "merge directive needs a positive integer 'target'");
    }
    d.target = static_cast<Label>(it->get<long long>());
    if (d.labels.empty() && d.structures.empty()) {
      throw Error(errc::invalid_config, "merge directive needs 'labels' or 'structures'");
    }
  } else if (op == "remove") {
    d.kind = EditDirective::Kind::remove;
    if (d.labels.empty() && d.structures.empty()) {
      throw Error(errc::invalid_config, "remove directive needs 'labels' or 'structures'");
    }
  } else if (op == "shells") {
    d.kind = EditDirective::Kind::shells;
    auto it = j.find("shells");
    if (it == j.end() || !it->is_array() || it->empty()) {
      throw Error(errc::invalid_config, "shells directive needs a non-empty 'shells' array");
    }
    for (const json& s : *it) {
      ShellSpec spec;
      if (!s.is_object() || !s.contains("thickness_mm") || !s.contains("label")) {
        throw Error(errc::invalid_config, "each shell needs 'thickness_mm' and 'label'");
      }
      spec.thickness_mm = s["thickness_mm"].get<double>();
      spec.new_label = static_cast<Label>(s["label"].get<long long>());
      d.shells.push_back(spec);
    }
  } else {
    throw Error(errc::invalid_config, "unknown edit op '" + op + "'");
  }
  return d;
}

AtlasHierarchy load_hierarchy(const RunConfig& cfg) {
  if (cfg.inputs.hierarchy.empty()) {
    throw Error(errc::invalid_config, "this configuration requires 'inputs.hierarchy'");
  }
  return parse_hierarchy(read_text_file(cfg.inputs.hierarchy));
}

/// Property volume path: explicit input, or the edit stage's output when an
/// edit script is configured.
std::string effective_property_path(const RunConfig& cfg) {
  if (!cfg.inputs.property.empty()) return cfg.inputs.property;
  if (!cfg.edit.directives.empty()) return cfg.outputs.edited;
  throw Error(errc::invalid_config, "no property volume: set 'inputs.property' or an edit script");
}

HexMesh build_mesh(const RunConfig& cfg) {
  if (cfg.inputs.anatomy.empty()) {
    throw Error(errc::invalid_config, "'inputs.anatomy' is required");
  }
  const LabelVolume anatomy = read_nrrd_file(cfg.inputs.anatomy);
  const LabelVolume property = read_nrrd_file(effective_property_path(cfg));
  return voxels_to_hexmesh(anatomy, property);
}

ConductivityTable load_conductivity(const RunConfig& cfg) {
  if (cfg.inputs.conductivity.empty()) return default_conductivity_table();
  return parse_conductivity_table(read_text_file(cfg.inputs.conductivity));
}

std::string stats_to_json(const MeshStats& stats) {
  json j;
  j["cells"] = stats.cell_count;
  j["nodes"] = stats.node_count;
  j["bbox_min_mm"] = {stats.bbox_min[0], stats.bbox_min[1], stats.bbox_min[2]};
  j["bbox_max_mm"] = {stats.bbox_max[0], stats.bbox_max[1], stats.bbox_max[2]};
  j["min_scaled_jacobian"] = stats.min_scaled_jacobian;
  j["mean_scaled_jacobian"] = stats.mean_scaled_jacobian;
  json anat = json::object(), prop = json::object();
  for (const auto& [label, count] : stats.anatomy_histogram) anat[std::to_string(label)] = count;
  for (const auto& [label, count] : stats.property_histogram) prop[std::to_string(label)] = count;
  j["anatomy_histogram"] = anat;
  j["property_histogram"] = prop;
  return j.dump(2) + "\n";
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  const json j = parse_json(json_text, "run config");
  if (!j.is_object()) throw Error(errc::invalid_config, "run config must be a JSON object");
  RunConfig cfg;

  if (auto it = j.find("inputs"); it != j.end()) {
    cfg.inputs.anatomy = get_string(*it, "anatomy");
    cfg.inputs.property = get_string(*it, "property");
    cfg.inputs.hierarchy = get_string(*it, "hierarchy");
    cfg.inputs.color_table = get_string(*it, "color_table");
    cfg.inputs.conductivity = get_string(*it, "conductivity");
  }

  if (auto it = j.find("edit"); it != j.end()) {
    cfg.edit.source = get_string(*it, "source", "anatomy");
    if (auto d = it->find("directives"); d != it->end()) {
      if (!d->is_array()) throw Error(errc::invalid_config, "'edit.directives' must be an array");
      for (const json& dir : *d) cfg.edit.directives.push_back(parse_directive(dir));
    }
  }

  if (auto it = j.find("dipole"); it != j.end()) {
    cfg.has_dipole = true;
    cfg.dipole.position_mm = get_vec3(*it, "position_mm");
    if (it->contains("moment_Am")) {
      cfg.dipole.moment_Am = get_vec3(*it, "moment_Am");
    } else if (it->contains("direction")) {
      const Vec3 dir = get_vec3(*it, "direction");
      const double len = norm(dir);
      if (len == 0.0) throw Error(errc::invalid_config, "dipole 'direction' must be nonzero");
      double magnitude = 1e-8;  // 10 nA*m, a typical cortical source scale
      if (it->contains("magnitude_Am")) magnitude = (*it)["magnitude_Am"].get<double>();
      cfg.dipole.moment_Am = (magnitude / len) * dir;
    } else {
      throw Error(errc::invalid_config, "dipole needs 'moment_Am' or 'direction'");
    }
    if (it->contains("separation_mm")) {
      cfg.dipole.separation_mm = (*it)["separation_mm"].get<double>();
    }
  }

  if (auto it = j.find("solver"); it != j.end()) {
    if (it->contains("tol")) cfg.solver.tol = (*it)["tol"].get<double>();
    if (it->contains("maxit")) cfg.solver.maxit = (*it)["maxit"].get<std::size_t>();
    if (!(cfg.solver.tol > 0.0)) throw Error(errc::invalid_config, "'solver.tol' must be positive");
  }

  if (auto it = j.find("outputs"); it != j.end()) {
    cfg.outputs.edited = get_string(*it, "edited");
    cfg.outputs.mesh_vtk = get_string(*it, "mesh_vtk");
    cfg.outputs.mesh_stats = get_string(*it, "mesh_stats");
    cfg.outputs.field_vtk = get_string(*it, "field_vtk");
    cfg.outputs.solve_report = get_string(*it, "solve_report");
    cfg.outputs.report = get_string(*it, "report");
  }
  if (cfg.outputs.edited.empty()) cfg.outputs.edited = "edited.nrrd";
  if (cfg.outputs.mesh_vtk.empty()) cfg.outputs.mesh_vtk = "mesh.vtk";
  if (cfg.outputs.mesh_stats.empty()) cfg.outputs.mesh_stats = "mesh_stats.json";
  if (cfg.outputs.field_vtk.empty()) cfg.outputs.field_vtk = "field.vtk";
  if (cfg.outputs.solve_report.empty()) cfg.outputs.solve_report = "solve_report.json";

  if (auto it = j.find("query"); it != j.end()) {
    if (auto s = it->find("structures"); s != it->end()) {
      if (!s->is_array()) throw Error(errc::invalid_config, "'query.structures' must be an array");
      for (const json& name : *s) cfg.query.structures.push_back(name.get<std::string>());
    }
    const std::string fmt = get_string(*it, "format");
    if (fmt == "json") {
      cfg.query.format = ReportFormat::json;
    } else if (fmt == "csv") {
      cfg.query.format = ReportFormat::csv;
    } else if (!fmt.empty()) {
      throw Error(errc::invalid_config, "'query.format' must be 'csv' or 'json'");
    } else if (cfg.outputs.report.size() >= 5 &&
               cfg.outputs.report.substr(cfg.outputs.report.size() - 5) == ".json") {
      cfg.query.format = ReportFormat::json;
    }
  }
  if (cfg.outputs.report.empty()) {
    cfg.outputs.report = cfg.query.format == ReportFormat::json ? "report.json" : "report.csv";
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(read_text_file(path));
}

void run_info(const std::string& volume_path, const std::string& color_table_path,
              std::ostream& out) {
  const LabelVolume vol = read_nrrd_file(volume_path);
  ColorTable colors;
  if (!color_table_path.empty()) colors = parse_color_table(read_text_file(color_table_path));

  out << "file: " << volume_path << "\n";
  out << "dims: " << vol.dims[0] << "x" << vol.dims[1] << "x" << vol.dims[2] << "\n";
  out << "spacing: " << detail::format_double(vol.spacing[0]) << " "
      << detail::format_double(vol.spacing[1]) << " " << detail::format_double(vol.spacing[2])
      << " mm\n";
  out << "origin: " << detail::format_double(vol.origin[0]) << " "
      << detail::format_double(vol.origin[1]) << " " << detail::format_double(vol.origin[2])
      << " mm\n";
  out << "voxels: " << vol.voxel_count() << "\n";
  out << "labels:\n";
  for (const auto& [label, count] : vol.histogram()) {
    out << "  " << label << ": " << count;
    if (auto it = colors.entries.find(label); it != colors.entries.end()) {
      out << " (" << it->second.name << ")";
    }
    out << "\n";
  }
}

std::string run_edit(const RunConfig& cfg, const std::string& output_override) {
  std::string source_path = cfg.edit.source;
  if (source_path == "anatomy") {
    source_path = cfg.inputs.anatomy;
  } else if (source_path == "property") {
    source_path = cfg.inputs.property;
  }
  if (source_path.empty()) {
    throw Error(errc::invalid_config, "edit source volume is not configured");
  }
  LabelVolume vol = read_nrrd_file(source_path);

  bool needs_hierarchy = false;
  for (const EditDirective& d : cfg.edit.directives) needs_hierarchy |= !d.structures.empty();
  AtlasHierarchy hierarchy;
  if (needs_hierarchy) hierarchy = load_hierarchy(cfg);

  for (const EditDirective& d : cfg.edit.directives) {
    LabelSet labels = d.labels;
    for (const std::string& name : d.structures) {
      const LabelSet resolved = labels_under(hierarchy, name);
      labels.insert(resolved.begin(), resolved.end());
    }
    switch (d.kind) {
      case EditDirective::Kind::merge:
        vol = merge_labels(vol, labels, d.target);
        break;
      case EditDirective::Kind::remove:
        vol = remove_labels(vol, labels);
        break;
      case EditDirective::Kind::shells:
        vol = generate_shells(vol, d.shells);
        break;
    }
  }

  const std::string out_path = output_override.empty() ? cfg.outputs.edited : output_override;
  write_nrrd_file(vol, out_path);
  return out_path;
}

MeshOutputs run_mesh(const RunConfig& cfg, const std::string& output_override) {
  const HexMesh mesh = build_mesh(cfg);
  MeshOutputs out;
  out.mesh_vtk = output_override.empty() ? cfg.outputs.mesh_vtk : output_override;
  out.mesh_stats = cfg.outputs.mesh_stats;
  write_text_file(out.mesh_vtk, write_vtk_legacy(mesh));
  write_text_file(out.mesh_stats, stats_to_json(mesh_stats(mesh)));
  return out;
}

SolveOutputs run_solve(const RunConfig& cfg, const std::string& output_override) {
  if (!cfg.has_dipole) {
    throw Error(errc::invalid_config, "solve requires a 'dipole' section");
  }
  const HexMesh mesh = build_mesh(cfg);
  const std::vector<double> sigma = assign_conductivity(mesh, load_conductivity(cfg));
  FemSystem system = assemble(mesh, sigma);
  system.rhs = dipole_rhs(mesh, cfg.dipole);
  const SolveResult result = solve(system, BoundaryConditions{}, cfg.solver.tol, cfg.solver.maxit);

  SolveOutputs out;
  out.field_vtk = output_override.empty() ? cfg.outputs.field_vtk : output_override;
  out.solve_report = cfg.outputs.solve_report;
  write_text_file(out.field_vtk,
                  write_vtk_legacy(mesh, PointField{"potential", result.field.values_uV}));
  json report;
  report["iterations"] = result.report.iterations;
  report["relative_residual"] = result.report.relative_residual;
  report["wall_seconds"] = result.report.wall_seconds;
  report["gauge"] = to_string(result.report.gauge);
  report["converged"] = true;
  write_text_file(out.solve_report, report.dump(2) + "\n");
  return out;
}

std::string run_query(const RunConfig& cfg, const std::string& output_override) {
  if (cfg.query.structures.empty()) {
    throw Error(errc::invalid_config, "query requires 'query.structures'");
  }
  const VtkDataset ds = read_vtk_legacy(read_text_file(cfg.outputs.field_vtk));
  if (!ds.point_field || ds.point_field->name != "potential") {
    throw Error(errc::invalid_config,
                "'" + cfg.outputs.field_vtk + "' carries no potential point data; run solve first");
  }
  const AtlasHierarchy hierarchy = load_hierarchy(cfg);
  PotentialField field;
  field.values_uV = ds.point_field->values;

  std::vector<RegionStats> stats;
  stats.reserve(cfg.query.structures.size());
  for (const std::string& name : cfg.query.structures) {
    stats.push_back(region_stats(ds.mesh, field, hierarchy, name));
  }
  const std::string out_path = output_override.empty() ? cfg.outputs.report : output_override;
  write_text_file(out_path, report(stats, cfg.query.format));
  return out_path;
}

void run_all(const RunConfig& cfg) {
  if (!cfg.edit.directives.empty()) run_edit(cfg);
  run_mesh(cfg);
  run_solve(cfg);
  if (!cfg.query.structures.empty()) run_query(cfg);
}

}  // namespace atlasfem
