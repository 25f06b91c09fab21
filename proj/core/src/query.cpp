#include "atlasfem/query.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <sstream>

#include "atlasfem/error.hpp"
#include "detail/format.hpp"

namespace atlasfem {

std::vector<NodeId> region_nodes(const HexMesh& mesh, const LabelSet& labels) {
  std::vector<NodeId> out;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    if (labels.count(mesh.anatomy_label[c])) {
      for (NodeId n : mesh.cells[c]) out.push_back(n);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RegionStats region_stats(const HexMesh& mesh, const PotentialField& field,
                         const AtlasHierarchy& hierarchy, const std::string& structure_name) {
  if (field.values_uV.size() != mesh.node_count()) {
    throw Error(errc::field_length_mismatch, "field length does not match the node count");
  }
  RegionStats stats;
  stats.structure_name = structure_name;
  stats.labels = labels_under(hierarchy, structure_name);
  const std::vector<NodeId> nodes = region_nodes(mesh, stats.labels);
  if (nodes.empty()) {
    throw Error(errc::empty_region, "structure '" + structure_name + "' has no voxels in this mesh");
  }
  stats.node_count = nodes.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (NodeId n : nodes) {
    const double v = field.values_uV[n];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  stats.max_uV = hi;
  stats.mean_uV = sum / static_cast<double>(nodes.size());
  stats.min_uV = lo;
  return stats;
}

std::string report(const std::vector<RegionStats>& stats, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::ostringstream out;
    out << "structure,node_count,max_uV,mean_uV,min_uV\n";
    for (const RegionStats& s : stats) {
      out << s.structure_name << "," << s.node_count << "," << detail::format_double(s.max_uV)
          << "," << detail::format_double(s.mean_uV) << "," << detail::format_double(s.min_uV)
          << "\n";
    }
    return out.str();
  }
  nlohmann::json j = nlohmann::json::array();
  for (const RegionStats& s : stats) {
    nlohmann::json labels = nlohmann::json::array();
    for (Label l : s.labels) labels.push_back(l);
    j.push_back({{"structure", s.structure_name},
                 {"labels", labels},
                 {"node_count", s.node_count},
                 {"max_uV", s.max_uV},
                 {"mean_uV", s.mean_uV},
                 {"min_uV", s.min_uV}});
  }
  return j.dump(2) + "\n";
}

}  // namespace atlasfem
