#ifndef ATLASFEM_ATLAS_HPP
#define ATLASFEM_ATLAS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "atlasfem/label_volume.hpp"
#include "atlasfem/types.hpp"

namespace atlasfem {

/// Node of the anatomical structure tree. Names are unique across the tree
/// (case-sensitive) and every label appears on at most one node.
struct HierarchyNode {
  std::string name;
  std::optional<Label> label;
  std::vector<HierarchyNode> children;
};

struct AtlasHierarchy {
  HierarchyNode root;

  /// Returns the node with the given name, or nullptr.
  const HierarchyNode* find(const std::string& structure_name) const;
};

/// Label lookup table: label -> structure name + RGBA color.
struct ColorTable {
  struct Entry {
    std::string name;
    std::array<int, 4> rgba{0, 0, 0, 255};
  };
  std::map<Label, Entry> entries;
};

/// Parses the canonical hierarchy JSON schema: an object with "name"
/// (string), optional "label" (integer >= 0) and optional "children"
/// (array of the same shape). The root node must not carry a label.
AtlasHierarchy parse_hierarchy(const std::string& json_text);

/// Parses Slicer-style color table text: `<id> <name> <R> <G> <B> <A>`
/// lines, `#` comments and blank lines.
ColorTable parse_color_table(const std::string& text);

/// All labels on the named node and its descendants. Background label 0 is
/// never part of a LabelSet and is skipped if a node carries it.
LabelSet labels_under(const AtlasHierarchy& hierarchy, const std::string& structure_name);

/// Every voxel whose label is in `source` becomes `target`; geometry and
/// all other voxels are unchanged.
LabelVolume merge_labels(const LabelVolume& vol, const LabelSet& source, Label target);

/// Voxels with a label in `victims` become background (0).
LabelVolume remove_labels(const LabelVolume& vol, const LabelSet& victims);

struct ShellSpec {
  double thickness_mm = 0.0;
  Label new_label = 0;
};

/// Grows enclosing shells around the nonzero mask, one spec at a time:
/// each shell dilates the running mask by ceil(thickness / min(spacing))
/// iterations of 6-connected dilation and stamps newly covered background
/// voxels with the shell's label. Existing labels are never overwritten;
/// growth is clipped at the volume boundary.
LabelVolume generate_shells(const LabelVolume& vol, const std::vector<ShellSpec>& shells);

}  // namespace atlasfem

#endif
