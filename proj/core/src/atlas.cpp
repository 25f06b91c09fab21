#include "atlasfem/atlas.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "atlasfem/error.hpp"

namespace atlasfem {

namespace {

using nlohmann::json;

HierarchyNode parse_node(const json& j, std::set<std::string>& names, std::set<Label>& labels) {
  if (!j.is_object()) throw Error(errc::malformed_json, "hierarchy node must be an object");
  HierarchyNode node;
  auto name_it = j.find("name");
  if (name_it == j.end() || !name_it->is_string()) {
    throw Error(errc::malformed_json, "hierarchy node needs a string 'name'");
  }
  node.name = name_it->get<std::string>();
  if (!names.insert(node.name).second) {
    throw Error(errc::duplicate_name, "structure '" + node.name + "' appears more than once");
  }
  if (auto it = j.find("label"); it != j.end()) {
    if (!it->is_number_integer()) {
      throw Error(errc::malformed_json, "'label' of '" + node.name + "' must be an integer");
    }
    long long v = it->get<long long>();
    if (v < 0) {
      throw Error(errc::negative_label, "'" + node.name + "' has negative label " + std::to_string(v));
    }
    node.label = static_cast<Label>(v);
    if (!labels.insert(*node.label).second) {
      throw Error(errc::duplicate_label,
                  "label " + std::to_string(v) + " appears on more than one structure");
    }
  }
  if (auto it = j.find("children"); it != j.end()) {
    if (!it->is_array()) {
      throw Error(errc::malformed_json, "'children' of '" + node.name + "' must be an array");
    }
    node.children.reserve(it->size());
    for (const json& child : *it) node.children.push_back(parse_node(child, names, labels));
  }
  return node;
}

const HierarchyNode* find_node(const HierarchyNode& node, const std::string& name) {
  if (node.name == name) return &node;
  for (const HierarchyNode& child : node.children) {
    if (const HierarchyNode* hit = find_node(child, name)) return hit;
  }
  return nullptr;
}

void collect_labels(const HierarchyNode& node, LabelSet& out) {
  // Background (0) is never a queryable label.
  if (node.label && *node.label > 0) out.insert(*node.label);
  for (const HierarchyNode& child : node.children) collect_labels(child, out);
}

}  // namespace

const HierarchyNode* AtlasHierarchy::find(const std::string& structure_name) const {
  return find_node(root, structure_name);
}

AtlasHierarchy parse_hierarchy(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(errc::malformed_json, e.what());
  }
  std::set<std::string> names;
  std::set<Label> labels;
  AtlasHierarchy h{parse_node(j, names, labels)};
  if (h.root.label) {
    throw Error(errc::malformed_json, "the hierarchy root must not carry a label");
  }
  return h;
}

ColorTable parse_color_table(const std::string& text) {
  ColorTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;        // blank
    if (first[0] == '#') continue;       // comment
    long long id = 0;
    try {
      std::size_t pos = 0;
      id = std::stoll(first, &pos);
      if (pos != first.size()) throw std::invalid_argument(first);
    } catch (const std::exception&) {
      throw Error(errc::malformed_line, "line " + std::to_string(line_no) + ": bad label id '" + first + "'");
    }
    if (id < 0) {
      throw Error(errc::negative_label, "line " + std::to_string(line_no) + ": negative label id");
    }
    ColorTable::Entry entry;
    std::array<long long, 4> rgba{};
    if (!(ls >> entry.name >> rgba[0] >> rgba[1] >> rgba[2] >> rgba[3])) {
      throw Error(errc::malformed_line,
                  "line " + std::to_string(line_no) + ": expected '<id> <name> <R> <G> <B> <A>'");
    }
    std::string extra;
    if (ls >> extra) {
      throw Error(errc::malformed_line, "line " + std::to_string(line_no) + ": trailing tokens");
    }
    for (int c = 0; c < 4; ++c) {
      if (rgba[c] < 0 || rgba[c] > 255) {
        throw Error(errc::channel_out_of_range,
                    "line " + std::to_string(line_no) + ": channel value " + std::to_string(rgba[c]));
      }
      entry.rgba[c] = static_cast<int>(rgba[c]);
    }
    if (!table.entries.emplace(static_cast<Label>(id), std::move(entry)).second) {
      throw Error(errc::duplicate_label,
                  "line " + std::to_string(line_no) + ": label " + std::to_string(id) + " repeated");
    }
  }
  return table;
}

LabelSet labels_under(const AtlasHierarchy& hierarchy, const std::string& structure_name) {
  const HierarchyNode* node = hierarchy.find(structure_name);
  if (!node) {
    throw Error(errc::unknown_structure, "no structure named '" + structure_name + "'");
  }
  LabelSet out;
  collect_labels(*node, out);
  return out;
}

LabelVolume merge_labels(const LabelVolume& vol, const LabelSet& source, Label target) {
  if (target == 0) throw Error(errc::label_collision, "merge target must be a positive label");
  LabelVolume out = vol;
  for (Label& v : out.voxels) {
    if (source.count(v)) v = target;
  }
  return out;
}

LabelVolume remove_labels(const LabelVolume& vol, const LabelSet& victims) {
  LabelVolume out = vol;
  for (Label& v : out.voxels) {
    if (victims.count(v)) v = 0;
  }
  return out;
}

LabelVolume generate_shells(const LabelVolume& vol, const std::vector<ShellSpec>& shells) {
  vol.validate();
  LabelVolume out = vol;
  const auto [nx, ny, nz] = out.dims;
  const double min_spacing = std::min({out.spacing[0], out.spacing[1], out.spacing[2]});

  // Frontier of the running mask: nonzero voxels with at least one
  // 6-connected background neighbor. One dilation iteration advances the
  // frontier by one voxel layer.
  std::vector<std::size_t> frontier;
  auto neighbor_scan = [&](std::size_t idx, auto&& visit) {
    const std::size_t i = idx % nx;
    const std::size_t j = (idx / nx) % ny;
    const std::size_t k = idx / (nx * ny);
    if (i > 0) visit(idx - 1);
    if (i + 1 < nx) visit(idx + 1);
    if (j > 0) visit(idx - nx);
    if (j + 1 < ny) visit(idx + nx);
    if (k > 0) visit(idx - nx * ny);
    if (k + 1 < nz) visit(idx + nx * ny);
  };
  for (std::size_t idx = 0; idx < out.voxels.size(); ++idx) {
    if (out.voxels[idx] == 0) continue;
    bool boundary = false;
    neighbor_scan(idx, [&](std::size_t n) { boundary = boundary || out.voxels[n] == 0; });
    if (boundary) frontier.push_back(idx);
  }

  for (const ShellSpec& shell : shells) {
    if (shell.new_label == 0) {
      throw Error(errc::label_collision, "shell labels must be positive");
    }
    if (shell.thickness_mm < 0.0) {
      throw Error(errc::invalid_geometry, "shell thickness must be non-negative");
    }
    for (Label v : out.voxels) {
      if (v == shell.new_label) {
        throw Error(errc::label_collision,
                    "shell label " + std::to_string(shell.new_label) + " already present");
      }
    }
    const auto iterations =
        static_cast<std::size_t>(std::ceil(shell.thickness_mm / min_spacing));
    for (std::size_t it = 0; it < iterations; ++it) {
      std::vector<std::size_t> next;
      for (std::size_t idx : frontier) {
        neighbor_scan(idx, [&](std::size_t n) {
          if (out.voxels[n] == 0) {
            out.voxels[n] = shell.new_label;
            next.push_back(n);
          }
        });
      }
      frontier = std::move(next);
      if (frontier.empty()) break;
    }
  }
  return out;
}

}  // namespace atlasfem
