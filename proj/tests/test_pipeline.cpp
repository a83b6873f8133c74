#include <doctest.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fodm/pipeline.hpp"
#include "fixtures.hpp"

using namespace fodm;
namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = FODM_TEST_DATA_DIR;
const std::string kCliPath = FODM_CLI_PATH;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fodm_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& cmd) {
  CommandResult result;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 512> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) result.output += buf.data();
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace

TEST_CASE("fixture-mode pipeline emits every declared artifact") {
  const fs::path out = fresh_dir("fixture_run");
  const PipelineResult result =
      run_pipeline(kDataDir / "employees_config.json", kDataDir / "employees.csv", out,
                   kDataDir / "employees_memberships.csv");

  for (const auto& path : result.artifacts.all()) {
    CAPTURE(path.string());
    CHECK(fs::exists(path));
    CHECK(fs::file_size(path) > 0);
  }
  CHECK(result.ontology.concepts.size() == 15);
  CHECK(result.models.empty());  // clustering was bypassed

  const std::string report_text = slurp(result.artifacts.report_json);
  const nlohmann::json report = nlohmann::json::parse(report_text);
  CHECK(report.at("concept_count") == 15);
  CHECK(report.at("cover_count") == 25);
  CHECK(report.at("objects") == 6);

  bool found_assoc = false;
  for (const auto& r : report.at("nontaxonomy")) {
    if (r.at("source") == "Age(Adult)" && r.at("target") == "Salary(Medium)") {
      found_assoc = true;
      CHECK(r.at("confidence_2dp") == "0.83");
      CHECK(r.at("rendered") == "r(Age(Adult), Salary(Medium), 0.83)");
      CHECK(std::abs(r.at("confidence").get<double>() - 2.0 / 2.4) < 1e-9);
    }
  }
  CHECK(found_assoc);

  const std::string xml = slurp(result.artifacts.ontology_xml);
  CHECK(xml.find("Degree value=\"0.833333\"") != std::string::npos);
}

TEST_CASE("two fixture-mode runs are byte-identical") {
  const fs::path out1 = fresh_dir("fixture_a");
  const fs::path out2 = fresh_dir("fixture_b");
  const PipelineResult r1 =
      run_pipeline(kDataDir / "employees_config.json", kDataDir / "employees.csv", out1,
                   kDataDir / "employees_memberships.csv");
  const PipelineResult r2 =
      run_pipeline(kDataDir / "employees_config.json", kDataDir / "employees.csv", out2,
                   kDataDir / "employees_memberships.csv");
  const auto paths1 = r1.artifacts.all();
  const auto paths2 = r2.artifacts.all();
  REQUIRE(paths1.size() == paths2.size());
  for (std::size_t i = 0; i < paths1.size(); ++i) CHECK(slurp(paths1[i]) == slurp(paths2[i]));
}

TEST_CASE("clustering-mode pipeline is deterministic end to end") {
  const fs::path out1 = fresh_dir("fcm_a");
  const fs::path out2 = fresh_dir("fcm_b");
  const PipelineResult r1 =
      run_pipeline(kDataDir / "employees_config.json", kDataDir / "employees.csv", out1);
  const PipelineResult r2 =
      run_pipeline(kDataDir / "employees_config.json", kDataDir / "employees.csv", out2);
  REQUIRE(r1.models.size() == 2);
  for (std::size_t o = 0; o < 6; ++o) {
    double row = 0.0;
    for (std::size_t c = 0; c < 3; ++c) row += r1.models[0].memberships.at(o, c);
    CHECK(row == doctest::Approx(1.0).epsilon(1e-9));
  }
  const auto paths1 = r1.artifacts.all();
  const auto paths2 = r2.artifacts.all();
  for (std::size_t i = 0; i < paths1.size(); ++i) CHECK(slurp(paths1[i]) == slurp(paths2[i]));
}

TEST_CASE("a missing config aborts before any artifact is written") {
  const fs::path out = fresh_dir("missing_config");
  CHECK_THROWS_AS(run_pipeline(out / "nope.json", kDataDir / "employees.csv", out), Error);
  CHECK(!fs::exists(out / "ontology.xml"));
  CHECK(!fs::exists(out / "report.json"));
}

TEST_CASE("a failing stage leaves no partial ontology behind") {
  const fs::path out = fresh_dir("failing_stage");
  const fs::path bad_config = out / "bad.json";
  {
    std::ofstream cfg(bad_config);
    // k = 6 on six objects violates the cluster-count bound
    cfg << R"({"attributes":[{"name":"SALARY","k":6,"alpha":0.3,)"
        << R"("labels":["a","b","c","d","e","f"]}]})";
  }
  CHECK_THROWS_AS(run_pipeline(bad_config, kDataDir / "employees.csv", out), ValidationError);
  CHECK(!fs::exists(out / "ontology.xml"));
}

TEST_CASE("a config may cover a subset of the dataset columns") {
  const fs::path out = fresh_dir("subset_config");
  const fs::path cfg_path = out / "salary_only.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"attributes":[{"name":"SALARY","display":"Salary","k":3,"alpha":0.3,)"
        << R"("labels":["Low","Medium","High"]}]})";
  }
  const PipelineResult result = run_pipeline(cfg_path, kDataDir / "employees.csv", out);
  CHECK(result.context.scale_attributes.size() == 3);
  CHECK(result.artifacts.scale_csvs.size() == 1);
  CHECK(result.artifacts.tah_dots.size() == 1);
  CHECK(fs::exists(out / "scale_SALARY.csv"));
}

TEST_CASE("three clustered attributes number their scale columns consecutively") {
  const fs::path out = fresh_dir("three_attrs");
  const fs::path data_path = out / "data.csv";
  const fs::path cfg_path = out / "cfg.json";
  {
    std::ofstream data(data_path);
    data << "id,A,B,C\n";
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> v(0.0, 100.0);
    for (int i = 0; i < 60; ++i)
      data << "r" << i << ',' << v(rng) << ',' << v(rng) << ',' << v(rng) << '\n';
  }
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"attributes":[)"
        << R"({"name":"A","k":4,"alpha":0.3,"labels":["a1","a2","a3","a4"]},)"
        << R"({"name":"B","k":2,"alpha":0.4,"labels":["b1","b2"]},)"
        << R"({"name":"C","k":3,"alpha":0.3,"labels":["c1","c2","c3"]}]})";
  }
  const auto started = std::chrono::steady_clock::now();
  const PipelineResult result = run_pipeline(cfg_path, data_path, out);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  CHECK(seconds < 5.0);

  REQUIRE(result.context.scale_attributes.size() == 9);
  CHECK(result.context.scale_attributes[0].cluster_id == "C1");
  CHECK(result.context.scale_attributes[4].cluster_id == "C5");  // B starts after A's four
  CHECK(result.context.scale_attributes[8].cluster_id == "C9");
  REQUIRE(result.models.size() == 3);
  for (const auto& model : result.models)
    for (std::size_t o = 0; o < 60; ++o) {
      double row = 0.0;
      for (std::size_t c = 0; c < model.centers.size(); ++c) row += model.memberships.at(o, c);
      CHECK(row == doctest::Approx(1.0).epsilon(1e-9));
    }
  const std::size_t dim = std::min<std::size_t>(60, 9);
  CHECK(result.lattice.concepts.size() <= (std::size_t{1} << dim));
  CHECK(result.ontology.axioms.size() == 3);
}

TEST_CASE("the CLI pipeline and query commands work end to end") {
  const fs::path out = fresh_dir("cli_run");
  const std::string base = "\"" + kCliPath + "\"";

  const CommandResult pipeline = run_command(
      base + " pipeline --config " + (kDataDir / "employees_config.json").string() + " --input " +
      (kDataDir / "employees.csv").string() + " --out " + out.string() + " --memberships " +
      (kDataDir / "employees_memberships.csv").string());
  REQUIRE(pipeline.exit_code == 0);
  CHECK(pipeline.output.find("concepts: 15") != std::string::npos);
  CHECK(fs::exists(out / "ontology.xml"));
  CHECK(fs::exists(out / "context.csv"));

  const CommandResult query = run_command(
      base + " query --input " + out.string() + " --where Age=Young,Salary=Low");
  REQUIRE(query.exit_code == 0);
  CHECK(query.output == "t3\t0.7000\nt6\t0.5000\n");

  const CommandResult empty_where =
      run_command(base + " query --input " + out.string() + " --where ''");
  REQUIRE(empty_where.exit_code == 0);
  CHECK(empty_where.output.find("t1\t1.0000") != std::string::npos);
  CHECK(empty_where.output.find("t6\t1.0000") != std::string::npos);

  const CommandResult unknown_label =
      run_command(base + " query --input " + out.string() + " --where Age=Old");
  CHECK(unknown_label.exit_code == 2);

  const CommandResult top = run_command(
      base + " query --input " + out.string() + " --where Salary=Medium --alpha 0.5 --top 2");
  REQUIRE(top.exit_code == 0);
  CHECK(top.output == "t2\t0.6000\nt1\t0.5000\n");
}

TEST_CASE("the CLI reports usage and data errors with distinct codes") {
  const std::string base = "\"" + kCliPath + "\"";
  CHECK(run_command(base).exit_code == 1);                       // missing subcommand
  CHECK(run_command(base + " pipeline").exit_code == 1);         // missing required flags
  const fs::path out = fresh_dir("cli_missing");
  const CommandResult missing = run_command(
      base + " pipeline --config /nonexistent.json --input /nonexistent.csv --out " + out.string());
  CHECK(missing.exit_code == 2);
  CHECK(!fs::exists(out / "ontology.xml"));
}

TEST_CASE("the CLI cluster and lattice diagnostics run") {
  const fs::path out = fresh_dir("cli_diag");
  const std::string base = "\"" + kCliPath + "\"";

  const CommandResult cluster = run_command(
      base + " cluster --config " + (kDataDir / "employees_config.json").string() + " --input " +
      (kDataDir / "employees.csv").string() + " --out " + out.string());
  REQUIRE(cluster.exit_code == 0);
  CHECK(fs::exists(out / "memberships_SALARY.csv"));
  CHECK(fs::exists(out / "memberships_AGE.csv"));
  CHECK(cluster.output.find("SALARY: k=3") != std::string::npos);

  // the dumped memberships feed straight back in as a fixture
  std::ifstream dumped(out / "memberships_SALARY.csv");
  const auto slices = load_memberships_csv(dumped);
  REQUIRE(slices.size() == 1);
  CHECK(slices[0].attribute == "SALARY");
  CHECK(slices[0].table.cluster_ids == std::vector<std::string>{"C1", "C2", "C3"});

  const CommandResult lattice = run_command(
      base + " lattice --config " + (kDataDir / "employees_config.json").string() + " --input " +
      (kDataDir / "employees.csv").string() + " --memberships " +
      (kDataDir / "employees_memberships.csv").string());
  REQUIRE(lattice.exit_code == 0);
  CHECK(lattice.output.find("# 15 concepts, 25 covers") != std::string::npos);
  CHECK(lattice.output.find("Salary(Medium)\tintent={C2}") != std::string::npos);
}
