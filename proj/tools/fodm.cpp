// Command-line front end: runs the ontology pipeline and evaluates graded
// queries over its artifacts.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fodm/fodm.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

int run_pipeline_cmd(const std::string& config, const std::string& input, const std::string& out,
                     const std::string& memberships) {
  std::optional<std::filesystem::path> fixture;
  if (!memberships.empty()) fixture = memberships;
  const fodm::PipelineResult result = fodm::run_pipeline(config, input, out, fixture);
  std::printf("concepts: %zu\n", result.ontology.concepts.size());
  std::printf("taxonomy relations: %zu\n", result.ontology.taxonomy.size());
  std::printf("associations: %zu\n", result.ontology.nontaxonomy.size());
  for (const auto& path : result.artifacts.all()) std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_query_cmd(const std::string& input, const std::string& where, double alpha, bool has_alpha,
                  std::size_t top, bool has_top) {
  std::filesystem::path path = input;
  if (std::filesystem::is_directory(path)) path /= "context.csv";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fodm::Error("cannot open " + path.string());
  const fodm::FuzzyFormalContext ctx = fodm::read_context_csv(in);

  fodm::Query query = fodm::parse_query(where);
  if (has_alpha) query.threshold = alpha;
  if (has_top) query.top_k = top;
  const fodm::QueryResult result = fodm::evaluate_query(ctx, query);
  for (const auto& [object, degree] : result.rows)
    std::printf("%s\t%s\n", object.c_str(), fodm::format_fixed(degree, 4).c_str());
  return 0;
}

int run_cluster_cmd(const std::string& config_path, const std::string& input,
                    const std::string& out_dir) {
  const fodm::PipelineConfig config =
      fodm::parse_config_string(fodm::detail::read_file(config_path));
  std::ifstream in(input, std::ios::binary);
  if (!in) throw fodm::Error("cannot open " + input);
  const fodm::Dataset dataset = fodm::load_dataset(in);
  const fodm::ValidatedConfig validated = fodm::validate_config(dataset, config);

  std::filesystem::create_directories(out_dir);
  int next_ordinal = 1;
  for (const auto& spec : validated.config.specs) {
    const int attr = dataset.attribute_index(spec.attribute);
    const fodm::ClusterModel model = fodm::cluster_attribute(
        dataset.column(static_cast<std::size_t>(attr)), spec, dataset.object_ids, next_ordinal);
    next_ordinal += spec.k;

    const std::filesystem::path path =
        std::filesystem::path(out_dir) /
        ("memberships_" + fodm::detail::sanitize_iri(spec.attribute) + ".csv");
    std::ofstream csv(path, std::ios::binary | std::ios::trunc);
    fodm::write_memberships_csv(csv, spec.attribute, model.memberships);

    std::printf("%s: k=%d iterations=%d objective=%s\n", spec.attribute.c_str(), spec.k,
                model.iterations, fodm::format_double(model.objective).c_str());
    std::printf("  centers:");
    for (double c : model.centers) std::printf(" %s", fodm::format_double(c).c_str());
    std::printf("\n  wrote %s\n", path.c_str());
  }
  return 0;
}

int run_lattice_cmd(const std::string& config_path, const std::string& input,
                    const std::string& memberships) {
  const fodm::PipelineConfig config =
      fodm::parse_config_string(fodm::detail::read_file(config_path));
  std::ifstream in(input, std::ios::binary);
  if (!in) throw fodm::Error("cannot open " + input);
  const fodm::Dataset dataset = fodm::load_dataset(in);
  const fodm::ValidatedConfig validated = fodm::validate_config(dataset, config);

  std::optional<std::vector<fodm::AttributeMemberships>> fixture;
  if (!memberships.empty()) {
    std::ifstream m_in(memberships, std::ios::binary);
    if (!m_in) throw fodm::Error("cannot open " + memberships);
    fixture = fodm::load_memberships_csv(m_in);
  }
  const fodm::ScaledData scaled = fodm::build_scaled_data(dataset, validated, fixture);
  const fodm::ConceptLattice lattice = fodm::enumerate_concepts(scaled.context);

  std::printf("# %zu concepts, %zu covers\n", lattice.concepts.size(), lattice.covers.size());
  for (const auto& c : lattice.concepts) {
    const std::string name =
        fodm::name_concept(c.intent, scaled.context.scale_attributes, c.support_size() == 0);
    std::string intent = "{";
    const auto members = c.intent.members();
    for (std::size_t i = 0; i < members.size(); ++i)
      intent += (i ? "," : "") + scaled.context.scale_attributes[members[i]].cluster_id;
    intent += "}";
    std::printf("%s\tintent=%s\textent=", name.c_str(), intent.c_str());
    bool first = true;
    for (std::size_t o = 0; o < c.extent.size(); ++o) {
      if (c.extent[o] <= 0.0) continue;
      std::printf("%s%s:%s", first ? "" : " ", scaled.context.object_ids[o].c_str(),
                  fodm::format_double(c.extent[o]).c_str());
      first = false;
    }
    std::printf("\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fodm: fuzzy ontology generation from numeric tables"};
  app.require_subcommand(1);

  std::string config, input, out = ".", memberships, where;
  double alpha = 0.0;
  std::size_t top = 0;

  CLI::App* pipeline = app.add_subcommand("pipeline", "run the full generation pipeline");
  pipeline->add_option("--config", config, "pipeline config (JSON)")->required();
  pipeline->add_option("--input", input, "dataset CSV")->required();
  pipeline->add_option("--out", out, "output directory")->required();
  pipeline->add_option("--memberships", memberships,
                       "memberships CSV that bypasses the clustering stage");

  CLI::App* query = app.add_subcommand("query", "evaluate a graded conjunctive query");
  query->add_option("--input", input, "pipeline output directory or context CSV")->required();
  CLI::Option* where_opt = query->add_option("--where", where, "comma-separated Attribute=Label terms");
  where_opt->expected(0, 1);
  CLI::Option* alpha_opt = query->add_option("--alpha", alpha, "minimum degree to report")
                               ->check(CLI::Range(0.0, 1.0));
  CLI::Option* top_opt = query->add_option("--top", top, "keep only the k best rows")
                             ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));

  CLI::App* cluster = app.add_subcommand("cluster", "dump per-attribute membership matrices");
  cluster->add_option("--config", config, "pipeline config (JSON)")->required();
  cluster->add_option("--input", input, "dataset CSV")->required();
  cluster->add_option("--out", out, "output directory");

  CLI::App* lattice = app.add_subcommand("lattice", "dump the concepts of the combined context");
  lattice->add_option("--config", config, "pipeline config (JSON)")->required();
  lattice->add_option("--input", input, "dataset CSV")->required();
  lattice->add_option("--memberships", memberships,
                      "memberships CSV that bypasses the clustering stage");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (pipeline->parsed()) return run_pipeline_cmd(config, input, out, memberships);
    if (query->parsed())
      return run_query_cmd(input, where, alpha, alpha_opt->count() > 0, top, top_opt->count() > 0);
    if (cluster->parsed()) return run_cluster_cmd(config, input, out);
    if (lattice->parsed()) return run_lattice_cmd(config, input, memberships);
  } catch (const fodm::InternalError& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  } catch (const fodm::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}
