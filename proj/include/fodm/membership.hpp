#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "fodm/error.hpp"
#include "fodm/util.hpp"

namespace fodm {

/// Dense objects x clusters grid produced by clustering. Every cell is
/// present and each row sums to 1 (pre-cut partition constraint).
struct MembershipMatrix {
  std::vector<std::string> object_ids;
  std::vector<std::string> cluster_ids;
  std::vector<double> mu;  // row-major

  double at(std::size_t obj, std::size_t cluster) const {
    return mu[obj * cluster_ids.size() + cluster];
  }
};

/// Objects x clusters grid in which cells may be absent. Holds hand-authored
/// membership fixtures and the output of alpha-cuts; an absent cell reads as
/// zero everywhere downstream.
struct MembershipTable {
  std::vector<std::string> object_ids;
  std::vector<std::string> cluster_ids;
  std::vector<std::optional<double>> cells;  // row-major

  const std::optional<double>& at(std::size_t obj, std::size_t cluster) const {
    return cells[obj * cluster_ids.size() + cluster];
  }
  std::optional<double>& at(std::size_t obj, std::size_t cluster) {
    return cells[obj * cluster_ids.size() + cluster];
  }

  static MembershipTable from_matrix(const MembershipMatrix& m) {
    MembershipTable t;
    t.object_ids = m.object_ids;
    t.cluster_ids = m.cluster_ids;
    t.cells.assign(m.mu.begin(), m.mu.end());
    return t;
  }
};

/// One attribute's slice of a memberships file: column order is the
/// ascending-center (= label) order.
struct AttributeMemberships {
  std::string attribute;  // dataset column name
  MembershipTable table;
};

/// Reads a memberships CSV: header "object,<ATTR>:<Cid>,...". Empty fields
/// and "-" mark absent cells. Returns one table per attribute, attributes in
/// first-appearance order.
inline std::vector<AttributeMemberships> load_memberships_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("memberships CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split(line, ',');
  if (header.empty() || std::string(trim(header[0])) != "object")
    throw ParseError("memberships CSV: first header field must be \"object\"");

  struct Column {
    std::string attribute;
    std::string cluster_id;
  };
  std::vector<Column> columns;
  std::unordered_set<std::string> seen_cluster_ids;
  for (std::size_t i = 1; i < header.size(); ++i) {
    const std::string cell(trim(header[i]));
    // last colon, so attribute names may themselves contain one
    const auto colon = cell.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == cell.size())
      throw ParseError("memberships CSV: header field \"" + cell + "\" is not <attribute>:<cluster>");
    Column c{cell.substr(0, colon), cell.substr(colon + 1)};
    if (!seen_cluster_ids.insert(c.cluster_id).second)
      throw ValidationError("memberships CSV: duplicate cluster id " + c.cluster_id);
    columns.push_back(std::move(c));
  }
  if (columns.empty()) throw ValidationError("memberships CSV: no cluster columns");

  std::vector<std::string> object_ids;
  std::vector<std::vector<std::optional<double>>> rows;  // per data row, per column
  std::unordered_set<std::string> seen_objects;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split(line, ',');
    if (fields.size() != header.size())
      throw ParseError("memberships CSV: row for \"" + std::string(trim(fields[0])) +
                       "\" has " + std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    std::string id(trim(fields[0]));
    if (id.empty() || !seen_objects.insert(id).second)
      throw ValidationError("memberships CSV: missing or duplicate object id \"" + id + "\"");
    object_ids.push_back(id);
    std::vector<std::optional<double>> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string_view f = trim(fields[i]);
      if (f.empty() || f == "-") {
        row.emplace_back(std::nullopt);
        continue;
      }
      double v = 0.0;
      if (!try_parse_double(f, v) || v < 0.0 || v > 1.0)
        throw ParseError("memberships CSV: cell \"" + std::string(f) + "\" for object " + id +
                         " is not a membership degree in [0,1]");
      row.emplace_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (object_ids.empty()) throw ValidationError("memberships CSV: no data rows");

  // group columns by attribute, preserving column order within each group
  std::vector<AttributeMemberships> out;
  for (std::size_t ci = 0; ci < columns.size(); ++ci) {
    AttributeMemberships* slot = nullptr;
    for (auto& am : out)
      if (am.attribute == columns[ci].attribute) slot = &am;
    if (slot == nullptr) {
      out.push_back({columns[ci].attribute, {}});
      slot = &out.back();
      slot->table.object_ids = object_ids;
    }
    slot->table.cluster_ids.push_back(columns[ci].cluster_id);
  }
  for (auto& am : out) {
    am.table.cells.assign(object_ids.size() * am.table.cluster_ids.size(), std::nullopt);
    std::size_t local = 0;
    for (std::size_t ci = 0; ci < columns.size(); ++ci) {
      if (columns[ci].attribute != am.attribute) continue;
      for (std::size_t o = 0; o < object_ids.size(); ++o) am.table.at(o, local) = rows[o][ci];
      ++local;
    }
  }
  return out;
}

inline std::vector<AttributeMemberships> load_memberships_csv_string(const std::string& csv) {
  std::istringstream in(csv);
  return load_memberships_csv(in);
}

/// Writes one attribute's memberships in the same layout the fixture loader
/// reads, full precision.
inline void write_memberships_csv(std::ostream& out, const std::string& attribute,
                                  const MembershipMatrix& m) {
  out << "object";
  for (const auto& cid : m.cluster_ids) out << ',' << attribute << ':' << cid;
  out << '\n';
  for (std::size_t o = 0; o < m.object_ids.size(); ++o) {
    out << m.object_ids[o];
    for (std::size_t c = 0; c < m.cluster_ids.size(); ++c) out << ',' << format_double(m.at(o, c));
    out << '\n';
  }
}

}  // namespace fodm
