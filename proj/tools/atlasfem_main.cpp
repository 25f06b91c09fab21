#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "atlasfem/error.hpp"
#include "atlasfem/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoConvergence = 1;
constexpr int kExitInputError = 2;

int map_error(const atlasfem::Error& e) {
  std::cerr << "error: " << e.what() << "\n";
  return e.code() == atlasfem::errc::no_convergence ? kExitNoConvergence : kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label maps to hexahedral FE meshes, dipole Poisson solves and anatomical queries"};
  app.require_subcommand(1);

  std::string volume_path, color_table_path, config_path, output_path;

  CLI::App* info = app.add_subcommand("info", "Summarize an NRRD label volume");
  info->add_option("volume", volume_path, "NRRD file")->required();
  info->add_option("--color-table", color_table_path, "color table for label names");

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")->required();
    cmd->add_option("--output", output_path, "override the command's primary output path");
  };
  add_config(app.add_subcommand("edit", "Apply the config's edit script and write the edited NRRD"));
  add_config(app.add_subcommand("mesh", "Build the hexahedral mesh, write VTK and stats"));
  add_config(app.add_subcommand("solve", "Solve the dipole forward problem, write the field VTK"));
  add_config(app.add_subcommand("query", "Per-structure potential statistics from the field VTK"));
  add_config(app.add_subcommand("run-all", "edit (if configured), mesh, solve, query"));

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("info")) {
      atlasfem::run_info(volume_path, color_table_path, std::cout);
      return kExitOk;
    }
    const atlasfem::RunConfig cfg = atlasfem::load_run_config(config_path);
    if (app.got_subcommand("edit")) {
      std::cout << "wrote " << atlasfem::run_edit(cfg, output_path) << "\n";
    } else if (app.got_subcommand("mesh")) {
      const auto out = atlasfem::run_mesh(cfg, output_path);
      std::cout << "wrote " << out.mesh_vtk << " and " << out.mesh_stats << "\n";
    } else if (app.got_subcommand("solve")) {
      const auto out = atlasfem::run_solve(cfg, output_path);
      std::cout << "wrote " << out.field_vtk << " and " << out.solve_report << "\n";
    } else if (app.got_subcommand("query")) {
      std::cout << "wrote " << atlasfem::run_query(cfg, output_path) << "\n";
    } else if (app.got_subcommand("run-all")) {
      atlasfem::run_all(cfg);
      std::cout << "pipeline complete\n";
    }
    return kExitOk;
  } catch (const atlasfem::Error& e) {
    return map_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
