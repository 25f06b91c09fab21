#ifndef ATLASFEM_QUERY_HPP
#define ATLASFEM_QUERY_HPP

#include <string>
#include <vector>

#include "atlasfem/atlas.hpp"
#include "atlasfem/fem.hpp"
#include "atlasfem/hexmesh.hpp"

namespace atlasfem {

/// Per-structure potential statistics (one report row).
struct RegionStats {
  std::string structure_name;
  LabelSet labels;
  std::size_t node_count = 0;
  double max_uV = 0.0;
  double mean_uV = 0.0;
  double min_uV = 0.0;
};

/// Sorted ids of all nodes incident to at least one cell whose anatomy
/// label is in the set. Boundary nodes shared between structures belong to
/// every adjacent region.
std::vector<NodeId> region_nodes(const HexMesh& mesh, const LabelSet& labels);

/// Unweighted max/mean/min of the nodal field over the structure's region,
/// with labels resolved hierarchy-aware via labels_under.
RegionStats region_stats(const HexMesh& mesh, const PotentialField& field,
                         const AtlasHierarchy& hierarchy, const std::string& structure_name);

enum class ReportFormat { csv, json };

/// CSV (`structure,node_count,max_uV,mean_uV,min_uV` header) or JSON array,
/// rows in input order, shortest round-trip number formatting.
std::string report(const std::vector<RegionStats>& stats, ReportFormat format);

}  // namespace atlasfem

#endif
