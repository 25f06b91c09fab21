#include "atlasfem/material.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

#include "atlasfem/error.hpp"

namespace atlasfem {

namespace {

using nlohmann::json;

}  // namespace

ConductivityTable parse_conductivity_table(const std::string& json_text) {
  // A duplicate label can only appear as a duplicate JSON key, which the
  // DOM parser would silently collapse; catch it during the parse.
  std::set<std::string> root_keys;
  auto no_dup_keys = [&](int depth, json::parse_event_t event, json& parsed) {
    if (depth == 1 && event == json::parse_event_t::key) {
      if (!root_keys.insert(parsed.get<std::string>()).second) {
        throw Error(errc::duplicate_label, "label " + parsed.get<std::string>() + " appears twice");
      }
    }
    return true;
  };
  json j;
  try {
    j = json::parse(json_text, no_dup_keys);
  } catch (const json::exception& e) {
    throw Error(errc::malformed_json, e.what());
  }
  if (!j.is_object()) {
    throw Error(errc::malformed_json, "conductivity table must be a JSON object");
  }
  ConductivityTable table;
  for (const auto& [key, value] : j.items()) {
    long long label = 0;
    try {
      std::size_t pos = 0;
      label = std::stoll(key, &pos);
      if (pos != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw Error(errc::malformed_json, "conductivity key '" + key + "' is not an integer label");
    }
    if (label <= 0) {
      throw Error(errc::malformed_json, "conductivity labels must be positive, got " + key);
    }
    if (!value.is_object() || !value.contains("sigma")) {
      throw Error(errc::malformed_json, "entry '" + key + "' needs an object with 'sigma'");
    }
    ConductivityTable::Entry entry;
    if (value.contains("name")) {
      if (!value["name"].is_string()) {
        throw Error(errc::malformed_json, "entry '" + key + "': 'name' must be a string");
      }
      entry.name = value["name"].get<std::string>();
    }
    if (!value["sigma"].is_number()) {
      throw Error(errc::malformed_json, "entry '" + key + "': 'sigma' must be a number");
    }
    entry.sigma = value["sigma"].get<double>();
    if (!(entry.sigma > 0.0)) {
      throw Error(errc::non_positive_sigma,
                  "entry '" + key + "' has sigma " + std::to_string(entry.sigma) + " S/m");
    }
    if (!table.entries.emplace(static_cast<Label>(label), std::move(entry)).second) {
      throw Error(errc::duplicate_label, "label " + key + " appears twice");
    }
  }
  return table;
}

std::string default_conductivity_json() {
  return R"({
  "1": {"name": "gray_matter", "sigma": 0.33},
  "2": {"name": "white_matter", "sigma": 0.33},
  "3": {"name": "csf", "sigma": 1.79},
  "4": {"name": "skull", "sigma": 0.012},
  "5": {"name": "scalp", "sigma": 0.33}
}
)";
}

ConductivityTable default_conductivity_table() {
  return parse_conductivity_table(default_conductivity_json());
}

std::vector<double> assign_conductivity(const HexMesh& mesh, const ConductivityTable& table) {
  std::set<Label> missing;
  for (Label l : mesh.property_label) {
    if (!table.entries.count(l)) missing.insert(l);
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "no conductivity for property label(s)";
    for (Label l : missing) msg << " " << l;
    throw Error(errc::unmapped_label, msg.str());
  }
  std::vector<double> sigma(mesh.cell_count());
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    sigma[c] = table.entries.at(mesh.property_label[c]).sigma;
  }
  return sigma;
}

}  // namespace atlasfem
