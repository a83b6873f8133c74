#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fodm/fcm.hpp"
#include "fixtures.hpp"
#include "reference_fcm.hpp"

using namespace fodm;

namespace {

const std::vector<double> kSalary{800, 600, 400, 900, 1000, 500};
const std::vector<std::string> kIds{"t1", "t2", "t3", "t4", "t5", "t6"};

AttributeSpec salary_spec(double tol) {
  AttributeSpec spec;
  spec.attribute = "SALARY";
  spec.display = "Salary";
  spec.k = 3;
  spec.alpha = 0.3;
  spec.labels = {"Low", "Medium", "High"};
  spec.tol = tol;
  return spec;
}

// Frozen from the straight-line reference in reference_fcm.hpp, run on the
// SALARY column with k=3, m=2, seed=0, tol=1e-9 (15 iterations).
const std::vector<double> kFrozenCenters{458.15875246091923, 699.99999999986562,
                                         941.84124753904359};
const double kFrozenMemberships[6][3] = {
    {0.054072250618950532, 0.63186364607654799, 0.31406410330450157},
    {0.31406410330376455, 0.63186364607738676, 0.054072250618848662},
    {0.95319473842160884, 0.035823608521871948, 0.010981653056519249},
    {0.0085183932628182975, 0.04157480322687674, 0.9499068035103051},
    {0.010981653056527107, 0.03582360852186068, 0.95319473842161229},
    {0.94990680351018519, 0.041574803226987166, 0.0085183932628275609},
};
const double kFrozenObjective = 22411.50671362982;
const int kFrozenIterations = 15;

}  // namespace

TEST_CASE("membership_of matches the closed form") {
  const std::vector<double> centers{0.0, 10.0};

  SUBCASE("midpoint splits evenly") {
    const auto u = membership_of(5.0, centers, 2.0);
    CHECK(u[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(u[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("a value on a center is crisp") {
    const auto u = membership_of(0.0, centers, 2.0);
    CHECK(u[0] == 1.0);
    CHECK(u[1] == 0.0);
  }
  SUBCASE("x=2 against {0,10}") {
    const auto u = membership_of(2.0, centers, 2.0);
    CHECK(u[0] == doctest::Approx(16.0 / 17.0).epsilon(1e-12));
    CHECK(u[1] == doctest::Approx(1.0 / 17.0).epsilon(1e-12));
    CHECK(u[0] + u[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("fcm_objective closed cases") {
  MembershipMatrix crisp;
  crisp.object_ids = {"a", "b"};
  crisp.cluster_ids = {"C1", "C2"};
  crisp.mu = {1.0, 0.0, 0.0, 1.0};
  const std::vector<double> values{0.0, 10.0};
  CHECK(fcm_objective(values, std::vector<double>{0.0, 10.0}, crisp, 2.0) == 0.0);

  MembershipMatrix half = crisp;
  half.mu = {0.5, 0.5, 0.5, 0.5};
  CHECK(fcm_objective(values, std::vector<double>{5.0, 5.0}, half, 2.0) ==
        doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("points sitting on the centers form a crisp fixed point") {
  AttributeSpec spec;
  spec.attribute = "X";
  spec.display = "X";
  spec.k = 2;
  spec.labels = {"lo", "hi"};
  spec.tol = 1e-12;
  const ClusterModel model =
      cluster_attribute(std::vector<double>{0.0, 0.0, 10.0, 10.0}, spec, {"a", "b", "c", "d"});
  REQUIRE(model.centers.size() == 2);
  CHECK(model.centers[0] == 0.0);
  CHECK(model.centers[1] == 10.0);
  for (int o = 0; o < 4; ++o) {
    const int own = o < 2 ? 0 : 1;
    CHECK(model.memberships.at(o, own) == 1.0);
    CHECK(model.memberships.at(o, 1 - own) == 0.0);
  }
  CHECK(model.objective == 0.0);
}

TEST_CASE("SALARY clustering reproduces the frozen reference run") {
  const ClusterModel model = cluster_attribute(kSalary, salary_spec(1e-9), kIds);
  REQUIRE(model.centers.size() == 3);
  CHECK(model.iterations == kFrozenIterations);
  for (int c = 0; c < 3; ++c)
    CHECK(model.centers[c] == doctest::Approx(kFrozenCenters[c]).epsilon(1e-9));
  for (int o = 0; o < 6; ++o)
    for (int c = 0; c < 3; ++c)
      CHECK(model.memberships.at(o, c) == doctest::Approx(kFrozenMemberships[o][c]).epsilon(1e-9));
  CHECK(model.objective == doctest::Approx(kFrozenObjective).epsilon(1e-9));

  // and the live oracle still agrees with its own frozen output
  const fodm_test::RefFcmResult ref = fodm_test::ref_fcm(kSalary, 3, 2.0, 0, 1e-9, 300);
  CHECK(ref.iterations == kFrozenIterations);
  for (int c = 0; c < 3; ++c)
    CHECK(ref.centers[c] == doctest::Approx(kFrozenCenters[c]).epsilon(1e-12));
  for (int o = 0; o < 6; ++o)
    for (int c = 0; c < 3; ++c)
      CHECK(ref.u[o][c] == doctest::Approx(kFrozenMemberships[o][c]).epsilon(1e-12));
}

TEST_CASE("stored memberships agree with membership_of at the final centers") {
  // the last membership update precedes the last center update, so the two
  // views differ only by the final center move, bounded by the tolerance
  const ClusterModel model = cluster_attribute(kSalary, salary_spec(1e-9), kIds);
  for (int o = 0; o < 6; ++o) {
    const auto u = membership_of(kSalary[o], model.centers, 2.0);
    for (int c = 0; c < 3; ++c)
      CHECK(u[c] == doctest::Approx(model.memberships.at(o, c)).epsilon(1e-6));
  }
}

TEST_CASE("objective trace is non-increasing on the SALARY run") {
  const ClusterModel model = cluster_attribute(kSalary, salary_spec(1e-9), kIds);
  REQUIRE(model.objective_trace.size() >= 2);
  for (std::size_t i = 1; i < model.objective_trace.size(); ++i)
    CHECK(model.objective_trace[i] <= model.objective_trace[i - 1] + 1e-12);
}

TEST_CASE("degenerate data and bad cluster counts are rejected") {
  AttributeSpec spec;
  spec.attribute = "X";
  spec.display = "X";
  spec.k = 2;
  spec.labels = {"a", "b"};
  CHECK_THROWS_AS(
      cluster_attribute(std::vector<double>{1, 1, 1, 1}, spec, {"a", "b", "c", "d"}),
      DegenerateDataError);
  spec.k = 4;
  CHECK_THROWS_AS(cluster_attribute(std::vector<double>{1, 2, 3, 4}, spec, {"a", "b", "c", "d"}),
                  ValidationError);
  spec.k = 5;
  CHECK_THROWS_AS(cluster_attribute(std::vector<double>{1, 2, 3, 4}, spec, {"a", "b", "c", "d"}),
                  ValidationError);
}

TEST_CASE("coincident centers are re-seeded at the farthest point") {
  std::vector<double> centers{5.0, 5.0};
  const std::vector<double> values{0.0, 4.0, 10.0};
  const int repairs = detail::repair_coincident_centers(values, centers, 10.0);
  CHECK(repairs == 1);
  CHECK(centers[0] == 5.0);
  CHECK(centers[1] == 0.0);  // farthest from its nearest center
  CHECK(detail::repair_coincident_centers(values, centers, 10.0) == 0);
}

TEST_CASE("duplicate quantile seeds are jittered deterministically") {
  // four equal low values put both initial quantiles on the same point
  const std::vector<double> values{1, 1, 1, 1, 2};
  AttributeSpec spec;
  spec.attribute = "X";
  spec.display = "X";
  spec.k = 2;
  spec.labels = {"a", "b"};
  const std::vector<std::string> ids{"o1", "o2", "o3", "o4", "o5"};
  const ClusterModel model = cluster_attribute(values, spec, ids);
  CHECK(model.centers[0] < model.centers[1]);
  for (int o = 0; o < 5; ++o)
    CHECK(model.memberships.at(o, 0) + model.memberships.at(o, 1) ==
          doctest::Approx(1.0).epsilon(1e-9));
  const ClusterModel again = cluster_attribute(values, spec, ids);
  CHECK(again.centers == model.centers);
  CHECK(again.memberships.mu == model.memberships.mu);
}

TEST_CASE("cluster ids honor the ordinal offset") {
  AttributeSpec spec;
  spec.attribute = "AGE";
  spec.display = "Age";
  spec.k = 2;
  spec.labels = {"Young", "Adult"};
  const ClusterModel model =
      cluster_attribute(std::vector<double>{30, 35, 26, 40, 27, 30}, spec, kIds, 4);
  CHECK(model.memberships.cluster_ids == std::vector<std::string>{"C4", "C5"});
  CHECK(model.centers[0] < model.centers[1]);
}

TEST_CASE("fixed seed makes clustering bit-identical") {
  const ClusterModel a = cluster_attribute(kSalary, salary_spec(1e-9), kIds);
  const ClusterModel b = cluster_attribute(kSalary, salary_spec(1e-9), kIds);
  CHECK(a.centers == b.centers);
  CHECK(a.memberships.mu == b.memberships.mu);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("random datasets keep the partition and monotonicity invariants") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> n_dist(3, 50);
  std::uniform_real_distribution<double> value_dist(-100.0, 100.0);

  for (int round = 0; round < 40; ++round) {
    const int n = n_dist(rng);
    std::uniform_int_distribution<int> k_dist(2, std::min(5, n - 1));
    const int k = k_dist(rng);
    std::vector<double> values(n);
    std::vector<std::string> ids(n);
    for (int i = 0; i < n; ++i) {
      values[i] = value_dist(rng);
      ids[i] = "o" + std::to_string(i);
    }
    AttributeSpec spec;
    spec.attribute = "X";
    spec.display = "X";
    spec.k = k;
    for (int i = 0; i < k; ++i) spec.labels.push_back("L" + std::to_string(i));
    spec.seed = round;

    const ClusterModel model = cluster_attribute(values, spec, ids);
    REQUIRE(static_cast<int>(model.centers.size()) == k);
    for (int c = 1; c < k; ++c) CHECK(model.centers[c - 1] < model.centers[c]);
    for (int o = 0; o < n; ++o) {
      double row = 0.0;
      for (int c = 0; c < k; ++c) {
        const double u = model.memberships.at(o, c);
        CHECK(u >= 0.0);
        CHECK(u <= 1.0);
        row += u;
      }
      CHECK(std::fabs(row - 1.0) <= 1e-9);
    }
    for (std::size_t i = 1; i < model.objective_trace.size(); ++i)
      CHECK(model.objective_trace[i] <= model.objective_trace[i - 1] + 1e-12);

    const ClusterModel again = cluster_attribute(values, spec, ids);
    CHECK(again.memberships.mu == model.memberships.mu);
    CHECK(again.centers == model.centers);
  }
}
