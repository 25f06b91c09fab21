#ifndef ATLASFEM_MATERIAL_HPP
#define ATLASFEM_MATERIAL_HPP

#include <map>
#include <string>
#include <vector>

#include "atlasfem/hexmesh.hpp"
#include "atlasfem/types.hpp"

namespace atlasfem {

/// Property label -> tissue conductivity (S/m, scalar isotropic).
struct ConductivityTable {
  struct Entry {
    std::string name;
    double sigma = 0.0;  // S/m, > 0
  };
  std::map<Label, Entry> entries;
};

/// Parses a JSON object mapping property label to {"name", "sigma"}.
ConductivityTable parse_conductivity_table(const std::string& json_text);

/// The bundled five-compartment head model: gray matter (1) and white
/// matter (2) at 0.33, CSF (3) at 1.79, skull (4) at 0.012 and scalp (5)
/// at 0.33 S/m.
ConductivityTable default_conductivity_table();

/// JSON text of default_conductivity_table(); also shipped as
/// core/data/default_conductivities.json.
std::string default_conductivity_json();

/// sigma[c] = table[property_label[c]].sigma for every cell c. Reports all
/// property labels missing from the table at once.
std::vector<double> assign_conductivity(const HexMesh& mesh, const ConductivityTable& table);

}  // namespace atlasfem

#endif
