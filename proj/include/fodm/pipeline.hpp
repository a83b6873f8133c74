#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fodm/config.hpp"
#include "fodm/dataset.hpp"
#include "fodm/dot.hpp"
#include "fodm/fcm.hpp"
#include "fodm/lattice.hpp"
#include "fodm/membership.hpp"
#include "fodm/ontology.hpp"
#include "fodm/owl.hpp"
#include "fodm/query.hpp"
#include "fodm/scaling.hpp"
#include "fodm/util.hpp"

namespace fodm {

struct PipelineArtifacts {
  std::vector<std::filesystem::path> scale_csvs;  // one per attribute
  std::filesystem::path context_csv;
  std::vector<std::filesystem::path> tah_dots;    // one per attribute
  std::filesystem::path mtah_dot;
  std::filesystem::path fcl_dot;
  std::filesystem::path ontology_xml;
  std::filesystem::path report_json;

  std::vector<std::filesystem::path> all() const {
    std::vector<std::filesystem::path> out = scale_csvs;
    out.insert(out.end(), tah_dots.begin(), tah_dots.end());
    out.push_back(context_csv);
    out.push_back(mtah_dot);
    out.push_back(fcl_dot);
    out.push_back(ontology_xml);
    out.push_back(report_json);
    return out;
  }
};

struct PipelineResult {
  PipelineArtifacts artifacts;
  FuzzyFormalContext context;
  ConceptLattice lattice;
  FuzzyOntology ontology;
  std::vector<ClusterModel> models;  // empty when memberships came from a fixture
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed while writing " + path.string());
}

class StageTimer {
 public:
  explicit StageTimer(std::string name)
      : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                        std::chrono::steady_clock::now() - start_)
                        .count();
    log_info("stage " + name_ + ": " + std::to_string(us) + " us");
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Per-attribute scaling products plus the combined context.
struct ScaledData {
  std::vector<AttributeScale> scales;   // config order
  FuzzyFormalContext context;
  std::vector<ClusterModel> models;     // empty in fixture mode
};

/// Clusters (or adopts fixture memberships for) every configured attribute,
/// applies its alpha-cut, binds labels, and builds the combined context.
/// Cluster ids number the columns consecutively in config order.
inline ScaledData build_scaled_data(const Dataset& dataset, const ValidatedConfig& validated,
                                    const std::optional<std::vector<AttributeMemberships>>& fixture) {
  ScaledData out;
  if (fixture) {
    for (const auto& am : *fixture) {
      bool known = false;
      for (const auto& spec : validated.config.specs)
        if (spec.attribute == am.attribute) known = true;
      if (!known)
        throw ValidationError("memberships fixture covers unconfigured attribute " + am.attribute);
    }
  }
  int next_ordinal = 1;
  for (const AttributeSpec& spec : validated.config.specs) {
    AttributeScale scale;
    if (fixture) {
      const AttributeMemberships* slice = nullptr;
      for (const auto& am : *fixture)
        if (am.attribute == spec.attribute) slice = &am;
      if (slice == nullptr)
        throw ValidationError("memberships fixture lacks attribute " + spec.attribute);
      if (slice->table.object_ids != dataset.object_ids)
        throw ValidationError("memberships fixture objects do not match the dataset for " +
                              spec.attribute);
      if (slice->table.cluster_ids.size() != static_cast<std::size_t>(spec.k))
        throw ValidationError(spec.attribute + ": fixture has " +
                              std::to_string(slice->table.cluster_ids.size()) +
                              " clusters, config says " + std::to_string(spec.k));
      scale.binding = bind_labels(slice->table.cluster_ids, spec);
      scale.cut = apply_alpha_cut(slice->table, spec.alpha);
    } else {
      const int attr = dataset.attribute_index(spec.attribute);
      if (attr < 0) throw ValidationError("unknown attribute " + spec.attribute);
      ClusterModel model =
          cluster_attribute(dataset.column(static_cast<std::size_t>(attr)), spec,
                            dataset.object_ids, next_ordinal);
      scale.binding = bind_labels(model, spec);
      scale.cut = apply_alpha_cut(model.memberships, spec.alpha);
      out.models.push_back(std::move(model));
    }
    next_ordinal += spec.k;
    out.scales.push_back(std::move(scale));
  }
  out.context = build_context(out.scales);
  return out;
}

namespace detail {

inline nlohmann::ordered_json relation_json(const Relation& r) {
  nlohmann::ordered_json j;
  j["source"] = r.source;
  j["target"] = r.target;
  if (r.confidence) {
    j["confidence"] = *r.confidence;
    j["confidence_2dp"] = format_fixed(*r.confidence, 2);
  } else {
    j["confidence"] = nullptr;
  }
  j["rendered"] = render_relation(r);
  return j;
}

inline std::string build_report(const Dataset& dataset, const ValidatedConfig& validated,
                                const ConceptLattice& lattice, const FuzzyOntology& onto) {
  nlohmann::ordered_json report;
  report["objects"] = dataset.object_ids.size();
  report["attributes"] = nlohmann::ordered_json::array();
  for (const auto& spec : validated.config.specs) {
    nlohmann::ordered_json a;
    a["name"] = spec.attribute;
    a["display"] = spec.display;
    a["k"] = spec.k;
    a["alpha"] = spec.alpha;
    a["labels"] = spec.labels;
    report["attributes"].push_back(std::move(a));
  }
  report["concept_count"] = onto.concepts.size();
  report["cover_count"] = lattice.covers.size();
  report["concepts"] = nlohmann::ordered_json::array();
  for (const auto& c : onto.concepts) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["attributes"] = c.attributes;
    nlohmann::ordered_json inst = nlohmann::ordered_json::object();
    for (const auto& [obj, degree] : c.instances) inst[obj] = degree;
    jc["instances"] = std::move(inst);
    report["concepts"].push_back(std::move(jc));
  }
  report["taxonomy"] = nlohmann::ordered_json::array();
  for (const auto& r : onto.taxonomy) report["taxonomy"].push_back(relation_json(r));
  report["nontaxonomy"] = nlohmann::ordered_json::array();
  for (const auto& r : onto.nontaxonomy) report["nontaxonomy"].push_back(relation_json(r));
  return report.dump(2) + "\n";
}

}  // namespace detail

/// Runs ingest -> clustering/fixture -> scaling -> lattice -> ontology ->
/// exports. Artifacts are staged in memory and written only after every
/// stage has succeeded, so a failed run leaves no partial ontology behind.
inline PipelineResult run_pipeline(const std::filesystem::path& config_path,
                                   const std::filesystem::path& data_path,
                                   const std::filesystem::path& out_dir,
                                   const std::optional<std::filesystem::path>& memberships_path =
                                       std::nullopt) {
  PipelineResult result;

  Dataset dataset;
  ValidatedConfig validated;
  std::optional<std::vector<AttributeMemberships>> fixture;
  {
    detail::StageTimer timer("ingest");
    const PipelineConfig config = parse_config_string(detail::read_file(config_path));
    std::ifstream data_in(data_path, std::ios::binary);
    if (!data_in) throw Error("cannot open " + data_path.string());
    dataset = load_dataset(data_in);
    validated = validate_config(dataset, config);
    if (memberships_path) {
      std::ifstream m_in(*memberships_path, std::ios::binary);
      if (!m_in) throw Error("cannot open " + memberships_path->string());
      fixture = load_memberships_csv(m_in);
    }
  }

  ScaledData scaled;
  {
    detail::StageTimer timer("scaling");
    scaled = build_scaled_data(dataset, validated, fixture);
  }
  result.context = scaled.context;
  result.models = std::move(scaled.models);

  std::vector<ConceptLattice> tahs;
  FuzzyClusterLattice fcl;
  {
    detail::StageTimer timer("lattice");
    result.lattice = enumerate_concepts(result.context);
    for (const auto& spec : validated.config.specs)
      tahs.push_back(enumerate_concepts(result.context.subcontext(spec.display)));
    fcl = to_fcl(result.lattice);
  }

  ConceptHierarchy hierarchy;
  {
    detail::StageTimer timer("ontology");
    hierarchy = build_hierarchy(result.lattice, result.context.scale_attributes);
    std::vector<Relation> taxonomy = taxonomy_relations(result.lattice, hierarchy);
    std::vector<Relation> rules = association_rules(result.context, validated.config.min_confidence,
                                                    validated.config.max_body);
    result.ontology = assemble_ontology(result.lattice, hierarchy, std::move(taxonomy),
                                        std::move(rules), result.context);
  }

  // stage every artifact in memory, then write
  struct Staged {
    std::filesystem::path path;
    std::string content;
  };
  std::vector<Staged> staged;
  PipelineArtifacts& artifacts = result.artifacts;
  {
    detail::StageTimer timer("export");
    for (std::size_t i = 0; i < validated.config.specs.size(); ++i) {
      const auto& spec = validated.config.specs[i];
      const std::string tag = detail::sanitize_iri(spec.attribute);
      std::ostringstream scale_csv;
      write_context_csv(scale_csv, result.context.subcontext(spec.display));
      artifacts.scale_csvs.push_back(out_dir / ("scale_" + tag + ".csv"));
      staged.push_back({artifacts.scale_csvs.back(), scale_csv.str()});
      artifacts.tah_dots.push_back(out_dir / ("tah_" + tag + ".dot"));
      staged.push_back({artifacts.tah_dots.back(),
                        export_dot(tahs[i], result.context.subcontext(spec.display).scale_attributes,
                                   result.context.object_ids, true)});
    }
    std::ostringstream context_csv;
    write_context_csv(context_csv, result.context);
    artifacts.context_csv = out_dir / "context.csv";
    staged.push_back({artifacts.context_csv, context_csv.str()});
    artifacts.mtah_dot = out_dir / "mtah.dot";
    staged.push_back({artifacts.mtah_dot,
                      export_dot(result.lattice, result.context.scale_attributes,
                                 result.context.object_ids, false)});
    artifacts.fcl_dot = out_dir / "fcl.dot";
    staged.push_back({artifacts.fcl_dot, export_dot(fcl, result.context.scale_attributes)});
    artifacts.report_json = out_dir / "report.json";
    staged.push_back({artifacts.report_json,
                      detail::build_report(dataset, validated, result.lattice, result.ontology)});
    artifacts.ontology_xml = out_dir / "ontology.xml";
    staged.push_back(
        {artifacts.ontology_xml, export_fuzzy_owl2(result.ontology, validated.config.degree_precision)});
  }

  {
    detail::StageTimer timer("write");
    std::filesystem::create_directories(out_dir);
    for (const auto& [path, content] : staged) {
      if (path == artifacts.ontology_xml) {
        const std::filesystem::path tmp = path.string() + ".tmp";
        detail::write_file(tmp, content);
        std::filesystem::rename(tmp, path);
      } else {
        detail::write_file(path, content);
      }
    }
  }
  return result;
}

}  // namespace fodm
