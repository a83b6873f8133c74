#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fodm/error.hpp"
#include "fodm/lattice.hpp"
#include "fodm/scaling.hpp"
#include "fodm/util.hpp"

namespace fodm {

enum class RelationKind { kTaxonomy, kNontaxonomy };

/// A graded edge of the ontology. Taxonomy edges whose similarity is zero
/// carry no confidence rather than violating the (0,1] range.
struct Relation {
  RelationKind kind = RelationKind::kTaxonomy;
  std::string source;
  std::string target;
  std::optional<double> confidence;

  bool operator==(const Relation&) const = default;
};

/// Records that one attribute's labels partition its domain: the pre-cut
/// memberships over these members sum to 1 per object.
struct PartitionAxiom {
  std::string attribute;              // display name
  std::vector<std::string> members;   // display names, label order

  bool operator==(const PartitionAxiom&) const = default;
};

struct OntologyConcept {
  AttrSet intent;
  std::string name;
  std::vector<std::string> attributes;                     // A^C: display names, sorted
  std::vector<std::pair<std::string, double>> instances;   // object id -> degree in (0,1]
};

struct ConceptHierarchy {
  std::vector<std::string> names;           // one per lattice concept, same order
  std::vector<std::pair<int, int>> edges;   // cover edges (parent, child)
  int thing = 0;
  int nothing = 0;
};

struct FuzzyOntology {
  std::vector<OntologyConcept> concepts;
  std::vector<Relation> taxonomy;
  std::vector<Relation> nontaxonomy;
  std::vector<PartitionAxiom> axioms;
  std::vector<std::string> object_ids;
};

namespace detail {

inline std::vector<std::string> sorted_display_names(const AttrSet& intent,
                                                     const std::vector<ScaleAttribute>& bindings) {
  std::vector<std::pair<std::string, std::string>> keys;
  for (std::size_t a : intent.members()) {
    if (a >= bindings.size()) throw ValidationError("intent member without a binding");
    keys.emplace_back(bindings[a].attribute, bindings[a].label);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::string> names;
  names.reserve(keys.size());
  for (const auto& [attr, label] : keys) names.push_back(attr + "(" + label + ")");
  return names;
}

inline std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += "_AND_";
    out += n;
  }
  return out;
}

}  // namespace detail

/// Deterministic concept name: "Thing" for the empty intent, "Nothing" for
/// the empty-extent bottom, otherwise the display names of the intent
/// sorted by (attribute, label) and joined with "_AND_".
inline std::string name_concept(const AttrSet& intent, const std::vector<ScaleAttribute>& bindings,
                                bool extent_empty = false) {
  if (intent.empty()) return "Thing";
  if (extent_empty) return "Nothing";
  return detail::join_names(detail::sorted_display_names(intent, bindings));
}

/// name_concept with the intent given as cluster ids.
inline std::string name_concept(const std::vector<std::string>& cluster_ids,
                                const std::vector<ScaleAttribute>& bindings,
                                bool extent_empty = false) {
  AttrSet intent(bindings.size());
  for (const auto& id : cluster_ids) {
    bool found = false;
    for (std::size_t a = 0; a < bindings.size(); ++a)
      if (bindings[a].cluster_id == id) {
        intent.set(a);
        found = true;
      }
    if (!found) throw ValidationError("unbound cluster id: " + id);
  }
  return name_concept(intent, bindings, extent_empty);
}

/// Names every lattice node and keeps the cover edges; top becomes Thing,
/// bottom Nothing (they coincide in a one-node hierarchy).
inline ConceptHierarchy build_hierarchy(const ConceptLattice& lattice,
                                        const std::vector<ScaleAttribute>& bindings) {
  ConceptHierarchy h;
  h.names.reserve(lattice.concepts.size());
  for (const auto& c : lattice.concepts)
    h.names.push_back(name_concept(c.intent, bindings, c.support_size() == 0));
  std::set<std::string> unique(h.names.begin(), h.names.end());
  if (unique.size() != h.names.size())
    throw InternalError("concept names collide; display names are not distinct");
  h.edges = lattice.covers;
  h.thing = lattice.top;
  h.nothing = lattice.bottom;
  return h;
}

/// One relation per cover edge, graded by the similarity of the two
/// extents. A zero similarity (edge into an empty-extent bottom) is emitted
/// without a degree.
inline std::vector<Relation> taxonomy_relations(const ConceptLattice& lattice,
                                                const ConceptHierarchy& hierarchy) {
  if (hierarchy.names.size() != lattice.concepts.size())
    throw ValidationError("hierarchy was not built from this lattice");
  std::vector<Relation> out;
  out.reserve(lattice.covers.size());
  for (const auto& [parent, child] : lattice.covers) {
    const double s = similarity(lattice.concepts[parent].extent, lattice.concepts[child].extent);
    Relation r;
    r.kind = RelationKind::kTaxonomy;
    r.source = hierarchy.names[parent];
    r.target = hierarchy.names[child];
    if (s > 0.0) r.confidence = s;
    out.push_back(std::move(r));
  }
  return out;
}

/// Graded cluster associations: for a body B of 1..max_body clusters and a
/// head h whose attribute differs from every body member's,
///   conf(B -> h) = sum_o min(mu_B(o), mu_h(o)) / sum_o mu_B(o)
/// with mu_B the pointwise min over the body and absent cells read as 0.
/// Rules at or above min_confidence are emitted; zero-support bodies are
/// skipped. Within-attribute rules are artifacts of partition overlap and
/// are not emitted.
inline std::vector<Relation> association_rules(const FuzzyFormalContext& ctx,
                                               double min_confidence, int max_body = 2) {
  if (max_body < 1 || max_body > 2) throw ValidationError("max_body must be 1 or 2");
  if (!(min_confidence > 0.0 && min_confidence <= 1.0))
    throw ValidationError("min_confidence must lie in (0,1]");
  const std::size_t m = ctx.scale_attributes.size();
  const std::size_t n = ctx.object_ids.size();

  auto column = [&](std::size_t a) {
    std::vector<double> col(n, 0.0);
    for (std::size_t o = 0; o < n; ++o)
      if (const auto& cell = ctx.at(o, a)) col[o] = *cell;
    return col;
  };

  std::vector<std::vector<double>> cols(m);
  for (std::size_t a = 0; a < m; ++a) cols[a] = column(a);

  std::vector<Relation> out;
  auto emit_rules_for_body = [&](const std::vector<std::size_t>& body) {
    std::vector<double> body_mu(n, 1.0);
    for (std::size_t o = 0; o < n; ++o)
      for (std::size_t b : body) body_mu[o] = std::min(body_mu[o], cols[b][o]);
    double body_sum = 0.0;
    for (double v : body_mu) body_sum += v;
    if (body_sum == 0.0) return;

    std::set<std::string> body_attrs;
    for (std::size_t b : body) body_attrs.insert(ctx.scale_attributes[b].attribute);
    std::vector<std::string> body_names;
    for (std::size_t b : body) body_names.push_back(ctx.scale_attributes[b].display_name());
    std::sort(body_names.begin(), body_names.end());
    const std::string source = detail::join_names(body_names);

    for (std::size_t h = 0; h < m; ++h) {
      if (body_attrs.count(ctx.scale_attributes[h].attribute)) continue;
      double num = 0.0;
      for (std::size_t o = 0; o < n; ++o) num += std::min(body_mu[o], cols[h][o]);
      const double conf = num / body_sum;
      if (conf < min_confidence) continue;
      Relation r;
      r.kind = RelationKind::kNontaxonomy;
      r.source = source;
      r.target = ctx.scale_attributes[h].display_name();
      r.confidence = conf;
      out.push_back(std::move(r));
    }
  };

  for (std::size_t a = 0; a < m; ++a) emit_rules_for_body({a});
  if (max_body >= 2)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) emit_rules_for_body({a, b});
  return out;
}

/// Human-readable form of a graded relation, degree at 2 decimals.
inline std::string render_relation(const Relation& r) {
  std::string out = "r(" + r.source + ", " + r.target;
  if (r.confidence) out += ", " + format_fixed(*r.confidence, 2);
  return out + ")";
}

namespace detail {

inline bool names_existing_clusters(const std::string& endpoint,
                                    const std::set<std::string>& display_names) {
  std::size_t start = 0;
  while (start <= endpoint.size()) {
    const auto pos = endpoint.find("_AND_", start);
    const std::string part =
        pos == std::string::npos ? endpoint.substr(start) : endpoint.substr(start, pos - start);
    if (!display_names.count(part)) return false;
    if (pos == std::string::npos) break;
    start = pos + 5;
  }
  return true;
}

}  // namespace detail

/// Assembles the four-part ontology: named concepts with their attribute
/// sets and graded instances, both relation families, and one partition
/// axiom per clustered attribute.
inline FuzzyOntology assemble_ontology(const ConceptLattice& lattice,
                                       const ConceptHierarchy& hierarchy,
                                       std::vector<Relation> taxonomy,
                                       std::vector<Relation> nontaxonomy,
                                       const FuzzyFormalContext& ctx) {
  if (hierarchy.names.size() != lattice.concepts.size())
    throw ValidationError("hierarchy does not match the lattice");

  FuzzyOntology onto;
  onto.object_ids = ctx.object_ids;
  const std::set<std::string> hierarchy_names(hierarchy.names.begin(), hierarchy.names.end());
  std::set<std::string> display_names;
  for (const auto& sa : ctx.scale_attributes) display_names.insert(sa.display_name());

  for (const Relation& r : taxonomy)
    if (!hierarchy_names.count(r.source) || !hierarchy_names.count(r.target))
      throw ValidationError("taxonomy relation names a concept outside the hierarchy: " +
                            render_relation(r));
  for (const Relation& r : nontaxonomy) {
    if (!detail::names_existing_clusters(r.source, display_names) ||
        !display_names.count(r.target))
      throw ValidationError("association endpoints must name labeled clusters: " +
                            render_relation(r));
    if (!r.confidence || !(*r.confidence > 0.0 && *r.confidence <= 1.0))
      throw ValidationError("association confidence outside (0,1]: " + render_relation(r));
  }

  for (std::size_t i = 0; i < lattice.concepts.size(); ++i) {
    const FuzzyConcept& fc = lattice.concepts[i];
    OntologyConcept oc;
    oc.intent = fc.intent;
    oc.name = hierarchy.names[i];
    oc.attributes = detail::sorted_display_names(fc.intent, ctx.scale_attributes);
    for (std::size_t o = 0; o < fc.extent.size(); ++o)
      if (fc.extent[o] > 0.0) oc.instances.emplace_back(ctx.object_ids[o], fc.extent[o]);
    onto.concepts.push_back(std::move(oc));
  }
  onto.taxonomy = std::move(taxonomy);
  onto.nontaxonomy = std::move(nontaxonomy);

  // partition axioms, one per attribute in column order
  std::vector<std::string> attr_order;
  for (const auto& sa : ctx.scale_attributes)
    if (std::find(attr_order.begin(), attr_order.end(), sa.attribute) == attr_order.end())
      attr_order.push_back(sa.attribute);
  for (const auto& attr : attr_order) {
    PartitionAxiom ax;
    ax.attribute = attr;
    for (const auto& sa : ctx.scale_attributes)
      if (sa.attribute == attr) ax.members.push_back(sa.display_name());
    onto.axioms.push_back(std::move(ax));
  }
  return onto;
}

}  // namespace fodm
