#ifndef ATLASFEM_PIPELINE_HPP
#define ATLASFEM_PIPELINE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "atlasfem/atlas.hpp"
#include "atlasfem/fem.hpp"
#include "atlasfem/query.hpp"

namespace atlasfem {

/// One step of an edit script. Label operands may be given directly or as
/// hierarchy structure names (resolved via labels_under); both are merged.
struct EditDirective {
  enum class Kind { merge, remove, shells };
  Kind kind = Kind::merge;
  LabelSet labels;
  std::vector<std::string> structures;
  Label target = 0;                // merge only
  std::vector<ShellSpec> shells;   // shells only
};

/// JSON run configuration driving the file pipeline.
struct RunConfig {
  struct Inputs {
    std::string anatomy;
    std::string property;
    std::string hierarchy;
    std::string color_table;
    std::string conductivity;  // empty = bundled default table
  } inputs;

  struct Edit {
    std::string source = "anatomy";  // "anatomy", "property" or a path
    std::vector<EditDirective> directives;
  } edit;

  DipoleSource dipole;
  bool has_dipole = false;

  struct Solver {
    double tol = 1e-8;
    std::size_t maxit = 0;  // 0 = 10 * node count
  } solver;

  struct Query {
    std::vector<std::string> structures;
    ReportFormat format = ReportFormat::csv;
  } query;

  struct Outputs {
    std::string edited;
    std::string mesh_vtk;
    std::string mesh_stats;
    std::string field_vtk;
    std::string solve_report;
    std::string report;
  } outputs;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// `info`: prints dims, spacing, origin and the label histogram, with
/// structure names when a color table is given.
void run_info(const std::string& volume_path, const std::string& color_table_path,
              std::ostream& out);

/// `edit`: applies the edit script in order and writes the edited NRRD.
/// Returns the written path.
std::string run_edit(const RunConfig& cfg, const std::string& output_override = "");

/// `mesh`: builds the hex mesh and writes mesh VTK + stats JSON.
struct MeshOutputs {
  std::string mesh_vtk;
  std::string mesh_stats;
};
MeshOutputs run_mesh(const RunConfig& cfg, const std::string& output_override = "");

/// `solve`: assembles and solves the forward problem, writes the potential
/// field VTK and the solve report JSON.
struct SolveOutputs {
  std::string field_vtk;
  std::string solve_report;
};
SolveOutputs run_solve(const RunConfig& cfg, const std::string& output_override = "");

/// `query`: reads the solved field VTK, computes per-structure statistics
/// and writes the report. Returns the written path.
std::string run_query(const RunConfig& cfg, const std::string& output_override = "");

/// `run-all`: edit (when directives are present), mesh, solve, query (when
/// structures are present).
void run_all(const RunConfig& cfg);

}  // namespace atlasfem

#endif
