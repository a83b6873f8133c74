#pragma once

// Shared machinery for the suites: seeded random contexts, full ontology
// assembly from a context, and a canonical ontology form for round-trip
// comparisons.

#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fodm/lattice.hpp"
#include "fodm/ontology.hpp"
#include "fodm/owl.hpp"
#include "fodm/scaling.hpp"
#include "fodm/util.hpp"

namespace fodm_test {

/// Random context: 2..max_objects objects, 1..max_attrs scale attributes
/// spread over up to three attribute groups, cell density 0.3..0.8.
inline fodm::FuzzyFormalContext random_context(std::mt19937_64& rng, std::size_t max_objects = 10,
                                               std::size_t max_attrs = 10) {
  std::uniform_int_distribution<std::size_t> obj_dist(2, max_objects);
  std::uniform_int_distribution<std::size_t> attr_dist(1, max_attrs);
  std::uniform_real_distribution<double> density_dist(0.3, 0.8);
  std::uniform_real_distribution<double> degree_dist(0.01, 1.0);

  fodm::FuzzyFormalContext ctx;
  const std::size_t n = obj_dist(rng);
  const std::size_t m = attr_dist(rng);
  const double density = density_dist(rng);
  std::uniform_int_distribution<std::size_t> group_dist(0, std::min<std::size_t>(2, m - 1));

  for (std::size_t o = 0; o < n; ++o) ctx.object_ids.push_back("o" + std::to_string(o + 1));
  for (std::size_t a = 0; a < m; ++a) {
    fodm::ScaleAttribute sa;
    sa.attribute = std::string("Attr") + static_cast<char>('A' + group_dist(rng));
    sa.label = "L" + std::to_string(a + 1);
    sa.cluster_id = "C" + std::to_string(a + 1);
    ctx.scale_attributes.push_back(std::move(sa));
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t o = 0; o < n; ++o)
    for (std::size_t a = 0; a < m; ++a)
      ctx.cells.push_back(coin(rng) < density ? std::optional<double>(degree_dist(rng))
                                              : std::nullopt);
  return ctx;
}

/// Runs the lattice/ontology chain over an existing context.
inline fodm::FuzzyOntology build_ontology_from_context(const fodm::FuzzyFormalContext& ctx,
                                                       double min_confidence = 0.5,
                                                       int max_body = 2) {
  const fodm::ConceptLattice lattice = fodm::enumerate_concepts(ctx);
  const fodm::ConceptHierarchy hierarchy = fodm::build_hierarchy(lattice, ctx.scale_attributes);
  std::vector<fodm::Relation> taxonomy = fodm::taxonomy_relations(lattice, hierarchy);
  std::vector<fodm::Relation> rules = fodm::association_rules(ctx, min_confidence, max_body);
  return fodm::assemble_ontology(lattice, hierarchy, std::move(taxonomy), std::move(rules), ctx);
}

/// Ontology reduced to the exact information the OWL document carries,
/// with names in IRI form and degrees at the export precision.
struct CanonOntology {
  std::set<std::string> classes;
  std::set<std::tuple<std::string, std::string, std::string>> taxonomy;   // (sub, super, degree)
  std::set<std::tuple<std::string, std::string, std::string>> rules;      // (source, target, degree)
  std::set<std::tuple<std::string, std::string, std::string>> instances;  // (object, class, degree)
  std::set<std::string> axioms;

  bool operator==(const CanonOntology&) const = default;
};

inline CanonOntology canonicalize(const fodm::FuzzyOntology& onto, int precision, bool sanitize) {
  auto name_of = [&](const std::string& s) {
    return sanitize ? fodm::detail::sanitize_iri(s) : s;
  };
  auto degree_of = [&](double d) { return fodm::detail::format_degree(d, precision); };
  CanonOntology canon;
  for (const auto& c : onto.concepts) {
    canon.classes.insert(name_of(c.name));
    for (const auto& [obj, degree] : c.instances)
      canon.instances.insert({name_of(obj), name_of(c.name), degree_of(degree)});
  }
  for (const auto& r : onto.taxonomy)
    canon.taxonomy.insert({name_of(r.target), name_of(r.source),
                           r.confidence ? degree_of(*r.confidence) : "-"});
  for (const auto& r : onto.nontaxonomy)
    canon.rules.insert({name_of(r.source), name_of(r.target),
                        r.confidence ? degree_of(*r.confidence) : "-"});
  for (const auto& ax : onto.axioms) {
    std::string s = "partition(" + ax.attribute + ")=";
    for (std::size_t i = 0; i < ax.members.size(); ++i) s += (i ? "+" : "") + ax.members[i];
    canon.axioms.insert(s);
  }
  return canon;
}

}  // namespace fodm_test
