#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fodm/error.hpp"
#include "fodm/lattice.hpp"
#include "fodm/scaling.hpp"

namespace fodm {

/// A conjunction of linguistic-label predicates, at most one per attribute.
struct Query {
  std::vector<std::pair<std::string, std::string>> predicates;  // (attribute, label)
  std::optional<double> threshold;
  std::optional<std::size_t> top_k;
};

struct QueryResult {
  std::vector<std::pair<std::string, double>> rows;  // degree descending, id ascending on ties
};

/// Parses "Attr=Label,Attr=Label"; empty text means the empty conjunction.
inline Query parse_query(std::string_view text) {
  Query q;
  if (trim(text).empty()) return q;
  for (const std::string& term : split(text, ',')) {
    const std::string_view t = trim(term);
    if (t.empty()) throw ValidationError("empty query term");
    const auto eq = t.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == t.size())
      throw ValidationError("query term is not Attribute=Label: \"" + std::string(t) + "\"");
    q.predicates.emplace_back(std::string(trim(t.substr(0, eq))), std::string(trim(t.substr(eq + 1))));
  }
  return q;
}

/// Graded conjunctive evaluation: an object's degree is the min of its
/// cells over the predicates; objects missing any predicate cell drop out.
inline QueryResult evaluate_query(const FuzzyFormalContext& ctx, const Query& q) {
  std::set<std::string> seen_attrs;
  std::vector<std::size_t> columns;
  for (const auto& [attr, label] : q.predicates) {
    if (!seen_attrs.insert(attr).second)
      throw ValidationError("more than one label for attribute " + attr + " in one query");
    const int col = ctx.column_of(attr, label);
    if (col < 0) {
      bool attr_known = false;
      for (const auto& sa : ctx.scale_attributes)
        if (sa.attribute == attr) attr_known = true;
      throw ValidationError(attr_known ? "unknown label " + label + " for attribute " + attr
                                       : "unknown attribute " + attr);
    }
    columns.push_back(static_cast<std::size_t>(col));
  }
  if (q.threshold && (*q.threshold < 0.0 || *q.threshold > 1.0))
    throw ValidationError("query threshold must lie in [0,1]");

  QueryResult result;
  for (std::size_t o = 0; o < ctx.object_ids.size(); ++o) {
    double degree = 1.0;
    bool in = true;
    for (std::size_t col : columns) {
      const auto& cell = ctx.at(o, col);
      if (!cell) {
        in = false;
        break;
      }
      degree = std::min(degree, *cell);
    }
    if (!in) continue;
    if (q.threshold && degree < *q.threshold) continue;
    result.rows.emplace_back(ctx.object_ids[o], degree);
  }
  std::sort(result.rows.begin(), result.rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (q.top_k && result.rows.size() > *q.top_k) result.rows.resize(*q.top_k);
  return result;
}

}  // namespace fodm
