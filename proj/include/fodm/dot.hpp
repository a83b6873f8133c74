#pragma once

#include <string>
#include <vector>

#include "fodm/lattice.hpp"
#include "fodm/ontology.hpp"
#include "fodm/owl.hpp"

namespace fodm {
namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string extent_summary(const FuzzyConcept& c, const std::vector<std::string>& object_ids) {
  std::string out;
  std::size_t shown = 0;
  for (std::size_t o = 0; o < c.extent.size(); ++o) {
    if (c.extent[o] <= 0.0) continue;
    if (shown == 8) {
      out += " ...";
      break;
    }
    if (!out.empty()) out += ' ';
    out += object_ids[o] + ":" + format_double(c.extent[o]);
    ++shown;
  }
  return out;
}

}  // namespace detail

/// Flat line diagram of the concept lattice: nodes carry the concept name
/// and an extent summary, edges are the covers (general above specific).
/// With group_by_attribute, single-attribute concepts are clustered per
/// attribute, which renders TAH views grouped.
inline std::string export_dot(const ConceptLattice& lattice,
                              const std::vector<ScaleAttribute>& bindings,
                              const std::vector<std::string>& object_ids,
                              bool group_by_attribute = false) {
  std::vector<std::string> names;
  std::vector<std::string> ids;
  for (const auto& c : lattice.concepts) {
    names.push_back(name_concept(c.intent, bindings, c.support_size() == 0));
    ids.push_back(detail::sanitize_iri(names.back()));
  }

  std::string dot = "digraph lattice {\n  rankdir=TB;\n  node [shape=box];\n";
  auto node_line = [&](std::size_t i, const std::string& indent) {
    const auto& c = lattice.concepts[i];
    std::string label = names[i];
    const std::string extent = detail::extent_summary(c, object_ids);
    if (!extent.empty()) label += "\\n" + extent;
    return indent + detail::dot_quote(ids[i]) + " [label=" + detail::dot_quote(label) + "];\n";
  };

  if (group_by_attribute) {
    // cluster the single-attribute concepts under their attribute
    std::vector<std::string> attr_order;
    for (const auto& b : bindings)
      if (std::find(attr_order.begin(), attr_order.end(), b.attribute) == attr_order.end())
        attr_order.push_back(b.attribute);
    std::vector<bool> grouped(lattice.concepts.size(), false);
    for (const auto& attr : attr_order) {
      std::string block;
      for (std::size_t i = 0; i < lattice.concepts.size(); ++i) {
        const auto members = lattice.concepts[i].intent.members();
        if (members.empty()) continue;
        bool all_here = true;
        for (std::size_t a : members)
          if (bindings[a].attribute != attr) all_here = false;
        if (!all_here) continue;
        block += node_line(i, "    ");
        grouped[i] = true;
      }
      if (!block.empty()) {
        dot += "  subgraph cluster_" + detail::sanitize_iri(attr) + " {\n";
        dot += "    label=" + detail::dot_quote(attr) + ";\n";
        dot += block;
        dot += "  }\n";
      }
    }
    for (std::size_t i = 0; i < lattice.concepts.size(); ++i)
      if (!grouped[i]) dot += node_line(i, "  ");
  } else {
    for (std::size_t i = 0; i < lattice.concepts.size(); ++i) dot += node_line(i, "  ");
  }

  for (const auto& [parent, child] : lattice.covers)
    dot += "  " + detail::dot_quote(ids[parent]) + " -> " + detail::dot_quote(ids[child]) + ";\n";
  dot += "}\n";
  return dot;
}

/// Intent-only view: nodes are cluster-id sets.
inline std::string export_dot(const FuzzyClusterLattice& fcl,
                              const std::vector<ScaleAttribute>& bindings) {
  auto node_id = [&](const AttrSet& intent) {
    const auto members = intent.members();
    if (members.empty()) return std::string("Top");
    std::string id;
    for (std::size_t a : members) {
      if (!id.empty()) id += '_';
      id += bindings[a].cluster_id;
    }
    return id;
  };
  auto node_label = [&](const AttrSet& intent) {
    const auto members = intent.members();
    std::string label = "{";
    for (std::size_t i = 0; i < members.size(); ++i)
      label += (i ? "," : "") + bindings[members[i]].cluster_id;
    return label + "}";
  };

  std::string dot = "digraph fcl {\n  rankdir=TB;\n  node [shape=ellipse];\n";
  for (const auto& intent : fcl.nodes)
    dot += "  " + detail::dot_quote(node_id(intent)) +
           " [label=" + detail::dot_quote(node_label(intent)) + "];\n";
  for (const auto& [parent, child] : fcl.covers)
    dot += "  " + detail::dot_quote(node_id(fcl.nodes[parent])) + " -> " +
           detail::dot_quote(node_id(fcl.nodes[child])) + ";\n";
  dot += "}\n";
  return dot;
}

/// Concept hierarchy with its assigned names.
inline std::string export_dot(const ConceptHierarchy& hierarchy) {
  std::string dot = "digraph hierarchy {\n  rankdir=TB;\n  node [shape=box];\n";
  for (const auto& name : hierarchy.names)
    dot += "  " + detail::dot_quote(detail::sanitize_iri(name)) +
           " [label=" + detail::dot_quote(name) + "];\n";
  for (const auto& [parent, child] : hierarchy.edges)
    dot += "  " + detail::dot_quote(detail::sanitize_iri(hierarchy.names[parent])) + " -> " +
           detail::dot_quote(detail::sanitize_iri(hierarchy.names[child])) + ";\n";
  dot += "}\n";
  return dot;
}

}  // namespace fodm
