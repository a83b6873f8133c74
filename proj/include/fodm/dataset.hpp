#pragma once

#include <cctype>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fodm/error.hpp"
#include "fodm/util.hpp"

namespace fodm {

/// A complete numeric relation: unique object ids, named attribute columns,
/// one finite real per (object, attribute) cell.
struct Dataset {
  std::vector<std::string> object_ids;
  std::vector<std::string> attributes;
  std::vector<double> values;  // row-major, object_ids.size() x attributes.size()

  double at(std::size_t obj, std::size_t attr) const {
    return values[obj * attributes.size() + attr];
  }

  /// Index of an attribute name, or -1.
  int attribute_index(std::string_view name) const {
    for (std::size_t i = 0; i < attributes.size(); ++i)
      if (attributes[i] == name) return static_cast<int>(i);
    return -1;
  }

  std::vector<double> column(std::size_t attr) const {
    std::vector<double> col(object_ids.size());
    for (std::size_t o = 0; o < object_ids.size(); ++o) col[o] = at(o, attr);
    return col;
  }
};

namespace detail {

inline void skip_bom(std::istream& in) {
  if (in.peek() == 0xEF) {
    char bom[3];
    in.read(bom, 3);
  }
}

inline bool read_csv_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace detail

/// Parses a UTF-8 CSV with a header row into a Dataset. A leading "id"
/// column (case-insensitive) names the objects; otherwise ids are
/// synthesized as t1..tn in row order.
inline Dataset load_dataset(std::istream& in) {
  detail::skip_bom(in);
  std::string line;
  if (!detail::read_csv_line(in, line)) throw ParseError("empty CSV: missing header row");

  std::vector<std::string> header = split(line, ',');
  for (auto& h : header) h = std::string(trim(h));

  bool has_id_column = false;
  if (!header.empty()) {
    std::string first = header.front();
    for (auto& c : first) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    has_id_column = (first == "id" || first == "object");
  }

  Dataset ds;
  const std::size_t data_start = has_id_column ? 1 : 0;
  for (std::size_t i = data_start; i < header.size(); ++i) {
    if (header[i].empty())
      throw ValidationError("empty attribute name in CSV header (column " + std::to_string(i + 1) + ")");
    ds.attributes.push_back(header[i]);
  }
  if (ds.attributes.empty()) throw ValidationError("CSV has no data columns");

  std::unordered_set<std::string> seen_attrs;
  for (const auto& a : ds.attributes)
    if (!seen_attrs.insert(a).second) throw ValidationError("duplicate attribute name: " + a);

  std::unordered_set<std::string> seen_ids;
  std::size_t row = 1;  // header was row 1
  while (detail::read_csv_line(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split(line, ',');
    if (fields.size() != header.size())
      throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    std::string id = has_id_column ? std::string(trim(fields[0]))
                                   : "t" + std::to_string(ds.object_ids.size() + 1);
    if (id.empty()) throw ValidationError("row " + std::to_string(row) + ": empty object id");
    if (!seen_ids.insert(id).second)
      throw ValidationError("duplicate object id: " + id);
    ds.object_ids.push_back(std::move(id));
    for (std::size_t i = data_start; i < fields.size(); ++i) {
      double v = 0.0;
      if (!try_parse_double(fields[i], v))
        throw ParseError("row " + std::to_string(row) + ", column \"" + header[i] +
                         "\": not a finite number: \"" + std::string(trim(fields[i])) + "\"");
      ds.values.push_back(v);
    }
  }
  if (ds.object_ids.size() < 2)
    throw ValidationError("dataset needs at least 2 rows, got " + std::to_string(ds.object_ids.size()));
  return ds;
}

inline Dataset load_dataset_string(const std::string& csv) {
  std::istringstream in(csv);
  return load_dataset(in);
}

}  // namespace fodm
