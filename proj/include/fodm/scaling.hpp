#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fodm/error.hpp"
#include "fodm/fcm.hpp"
#include "fodm/membership.hpp"
#include "fodm/util.hpp"

namespace fodm {

/// A labeled cluster acting as one column of the fuzzy formal context.
struct ScaleAttribute {
  std::string attribute;   // display attribute name, e.g. "Salary"
  std::string label;       // e.g. "Low"
  std::string cluster_id;  // e.g. "C1"

  std::string display_name() const { return attribute + "(" + label + ")"; }

  bool operator==(const ScaleAttribute&) const = default;
};

/// Objects x labeled clusters with optional membership cells. An absent
/// cell means the membership fell below the owning attribute's alpha (or
/// was absent in the source) and counts as zero downstream.
struct FuzzyFormalContext {
  std::vector<std::string> object_ids;
  std::vector<ScaleAttribute> scale_attributes;
  std::vector<std::optional<double>> cells;  // row-major

  const std::optional<double>& at(std::size_t obj, std::size_t attr) const {
    return cells[obj * scale_attributes.size() + attr];
  }
  std::optional<double>& at(std::size_t obj, std::size_t attr) {
    return cells[obj * scale_attributes.size() + attr];
  }

  /// Index of the column for (attribute, label), or -1.
  int column_of(std::string_view attribute, std::string_view label) const {
    for (std::size_t i = 0; i < scale_attributes.size(); ++i)
      if (scale_attributes[i].attribute == attribute && scale_attributes[i].label == label)
        return static_cast<int>(i);
    return -1;
  }

  /// The single-attribute subcontext used to build that attribute's TAH.
  FuzzyFormalContext subcontext(std::string_view attribute) const {
    FuzzyFormalContext sub;
    sub.object_ids = object_ids;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < scale_attributes.size(); ++i)
      if (scale_attributes[i].attribute == attribute) {
        keep.push_back(i);
        sub.scale_attributes.push_back(scale_attributes[i]);
      }
    sub.cells.reserve(object_ids.size() * keep.size());
    for (std::size_t o = 0; o < object_ids.size(); ++o)
      for (std::size_t i : keep) sub.cells.push_back(at(o, i));
    return sub;
  }
};

/// Inclusive alpha-cut: a cell survives iff it is present, strictly
/// positive, and >= alpha. Kept values are unchanged.
inline MembershipTable apply_alpha_cut(const MembershipTable& table, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) throw ValidationError("alpha must lie in [0,1]");
  MembershipTable cut = table;
  for (auto& cell : cut.cells)
    if (cell && !(*cell >= alpha && *cell > 0.0)) cell.reset();
  return cut;
}

inline MembershipTable apply_alpha_cut(const MembershipMatrix& matrix, double alpha) {
  return apply_alpha_cut(MembershipTable::from_matrix(matrix), alpha);
}

/// Binds the i-th cluster id (ascending-center order) to the i-th label.
inline std::vector<ScaleAttribute> bind_labels(const std::vector<std::string>& cluster_ids,
                                               const AttributeSpec& spec) {
  if (cluster_ids.size() != spec.labels.size())
    throw ValidationError(spec.attribute + ": " + std::to_string(cluster_ids.size()) +
                          " clusters but " + std::to_string(spec.labels.size()) + " labels");
  std::vector<ScaleAttribute> bound;
  bound.reserve(cluster_ids.size());
  for (std::size_t i = 0; i < cluster_ids.size(); ++i)
    bound.push_back({spec.display, spec.labels[i], cluster_ids[i]});
  return bound;
}

inline std::vector<ScaleAttribute> bind_labels(const ClusterModel& model, const AttributeSpec& spec) {
  return bind_labels(model.memberships.cluster_ids, spec);
}

/// One attribute's contribution to the combined context.
struct AttributeScale {
  MembershipTable cut;                  // post-alpha-cut cells
  std::vector<ScaleAttribute> binding;  // one entry per cut column
};

/// Apposition of all per-attribute scales into one context over a shared
/// object set.
inline FuzzyFormalContext build_context(const std::vector<AttributeScale>& scales) {
  FuzzyFormalContext ctx;
  if (scales.empty()) return ctx;
  ctx.object_ids = scales.front().cut.object_ids;
  for (const AttributeScale& s : scales) {
    if (s.cut.object_ids != ctx.object_ids)
      throw ValidationError("scales disagree on the object set");
    if (s.binding.size() != s.cut.cluster_ids.size())
      throw ValidationError("scale binding does not cover its clusters");
    for (const auto& b : s.binding) ctx.scale_attributes.push_back(b);
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& sa : ctx.scale_attributes)
    if (!seen.insert({sa.attribute, sa.label}).second)
      throw ValidationError("duplicate scale attribute " + sa.display_name());

  ctx.cells.reserve(ctx.object_ids.size() * ctx.scale_attributes.size());
  for (std::size_t o = 0; o < ctx.object_ids.size(); ++o) {
    for (const AttributeScale& s : scales) {
      for (std::size_t c = 0; c < s.cut.cluster_ids.size(); ++c) {
        const auto& cell = s.cut.at(o, c);
        if (cell && (*cell <= 0.0 || *cell > 1.0))
          throw ValidationError("context cell out of (0,1]: " + format_double(*cell));
        ctx.cells.push_back(cell);
      }
    }
  }
  return ctx;
}

/// Writes the context as CSV: header "object,<display_name>...", absent
/// cells empty, values at full precision.
inline void write_context_csv(std::ostream& out, const FuzzyFormalContext& ctx) {
  out << "object";
  for (const auto& sa : ctx.scale_attributes) out << ',' << sa.display_name();
  out << '\n';
  for (std::size_t o = 0; o < ctx.object_ids.size(); ++o) {
    out << ctx.object_ids[o];
    for (std::size_t a = 0; a < ctx.scale_attributes.size(); ++a) {
      out << ',';
      if (const auto& cell = ctx.at(o, a)) out << format_double(*cell);
    }
    out << '\n';
  }
}

/// Reads a context written by write_context_csv. Cluster ids are positional
/// (C1..Cm in column order), which is how the pipeline numbers them.
inline FuzzyFormalContext read_context_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("context CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split(line, ',');
  if (header.empty() || std::string(trim(header[0])) != "object")
    throw ParseError("context CSV: first header field must be \"object\"");

  FuzzyFormalContext ctx;
  for (std::size_t i = 1; i < header.size(); ++i) {
    const std::string cell(trim(header[i]));
    const auto open = cell.rfind('(');
    if (open == std::string::npos || open == 0 || cell.back() != ')')
      throw ParseError("context CSV: header field \"" + cell + "\" is not Attribute(Label)");
    ScaleAttribute sa;
    sa.attribute = cell.substr(0, open);
    sa.label = cell.substr(open + 1, cell.size() - open - 2);
    sa.cluster_id = "C" + std::to_string(i);
    ctx.scale_attributes.push_back(std::move(sa));
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split(line, ',');
    if (fields.size() != header.size())
      throw ParseError("context CSV: ragged row \"" + line + "\"");
    ctx.object_ids.emplace_back(trim(fields[0]));
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string_view f = trim(fields[i]);
      if (f.empty() || f == "-") {
        ctx.cells.emplace_back(std::nullopt);
        continue;
      }
      double v = 0.0;
      if (!try_parse_double(f, v) || v <= 0.0 || v > 1.0)
        throw ParseError("context CSV: cell \"" + std::string(f) + "\" is not a degree in (0,1]");
      ctx.cells.emplace_back(v);
    }
  }
  return ctx;
}

inline FuzzyFormalContext read_context_csv_string(const std::string& csv) {
  std::istringstream in(csv);
  return read_context_csv(in);
}

}  // namespace fodm
