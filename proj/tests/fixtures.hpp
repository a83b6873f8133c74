#pragma once

// The employee worked example shared across the test suites: a six-row
// SALARY/AGE table, its authored membership grid (with two absent cells),
// and the expected post-cut context.

#include <optional>
#include <string>
#include <vector>

#include "fodm/config.hpp"
#include "fodm/dataset.hpp"
#include "fodm/lattice.hpp"
#include "fodm/membership.hpp"
#include "fodm/scaling.hpp"

namespace fodm_test {

inline const char* kEmployeesCsv =
    "id,SALARY,AGE\n"
    "t1,800,30\n"
    "t2,600,35\n"
    "t3,400,26\n"
    "t4,900,40\n"
    "t5,1000,27\n"
    "t6,500,30\n";

inline const char* kMembershipsCsv =
    "object,SALARY:C1,SALARY:C2,SALARY:C3,AGE:C4,AGE:C5\n"
    "t1,0.1,0.5,0.4,0.5,0.5\n"
    "t2,0.3,0.6,0.1,0.4,0.6\n"
    "t3,0.7,0.2,0.1,0.7,0.3\n"
    "t4,0.1,0.4,0.5,0.2,0.8\n"
    "t5,-,0.5,0.5,0.6,0.4\n"
    "t6,0.5,0.5,-,0.5,0.5\n";

inline const char* kConfigJson = R"({
  "min_confidence": 0.5,
  "degree_precision": 6,
  "attributes": [
    {"name": "SALARY", "display": "Salary", "k": 3, "alpha": 0.3,
     "labels": ["Low", "Medium", "High"]},
    {"name": "AGE", "display": "Age", "k": 2, "alpha": 0.5,
     "labels": ["Young", "Adult"]}
  ]
})";

constexpr double kAbsent = -1.0;  // marker in the expectation tables below

// Post-cut cells (SALARY alpha 0.3, AGE alpha 0.5), columns C1..C5.
inline const double kCutExpected[6][5] = {
    {kAbsent, 0.5, 0.4, 0.5, 0.5},
    {0.3, 0.6, kAbsent, kAbsent, 0.6},
    {0.7, kAbsent, kAbsent, 0.7, kAbsent},
    {kAbsent, 0.4, 0.5, kAbsent, 0.8},
    {kAbsent, 0.5, 0.5, 0.6, kAbsent},
    {0.5, 0.5, kAbsent, 0.5, 0.5},
};

inline fodm::PipelineConfig employee_config() {
  return fodm::parse_config_string(kConfigJson);
}

inline fodm::Dataset employee_dataset() { return fodm::load_dataset_string(kEmployeesCsv); }

/// The post-cut employee context (the fixture memberships with both cuts
/// applied), scale attributes C1..C5 bound to Salary/Age labels.
inline fodm::FuzzyFormalContext employee_context() {
  const fodm::PipelineConfig config = employee_config();
  const auto slices = fodm::load_memberships_csv_string(kMembershipsCsv);
  std::vector<fodm::AttributeScale> scales;
  for (const auto& spec : config.specs) {
    for (const auto& slice : slices) {
      if (slice.attribute != spec.attribute) continue;
      fodm::AttributeScale scale;
      scale.binding = fodm::bind_labels(slice.table.cluster_ids, spec);
      scale.cut = fodm::apply_alpha_cut(slice.table, spec.alpha);
      scales.push_back(std::move(scale));
    }
  }
  return fodm::build_context(scales);
}

}  // namespace fodm_test
