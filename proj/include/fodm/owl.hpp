#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "fodm/error.hpp"
#include "fodm/ontology.hpp"
#include "fodm/util.hpp"

namespace fodm {
namespace detail {

// Text content only needs the markup characters escaped; quotes stay
// readable.
inline std::string escape_xml(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

// Names become IRI fragments: "(", ")" and spaces turn into "_", runs
// collapse, and leading/trailing "_" are stripped.
inline std::string sanitize_iri(std::string_view name) {
  std::string out;
  for (char c : name) {
    const char mapped = (c == '(' || c == ')' || c == ' ') ? '_' : c;
    if (mapped == '_' && !out.empty() && out.back() == '_') continue;
    out += mapped;
  }
  while (!out.empty() && out.front() == '_') out.erase(out.begin());
  while (!out.empty() && out.back() == '_') out.pop_back();
  if (out.empty()) throw ValidationError("name sanitizes to an empty IRI: \"" + std::string(name) + "\"");
  return out;
}

// Quantizes a positive degree to `precision` decimals without letting it
// collapse to zero, so every exported Degree stays inside (0,1].
inline std::string format_degree(double degree, int precision) {
  std::string out = format_fixed(degree, precision);
  for (char c : out)
    if (c >= '1' && c <= '9') return out;
  out.back() = '1';  // smallest representable quantum at this precision
  return out;
}

inline std::string fuzzy_label_literal(double degree, int precision) {
  return "<fuzzyOwl2 fuzzyType=\"axiom\"><Degree value=\"" + format_degree(degree, precision) +
         "\"/></fuzzyOwl2>";
}

struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlNode> children;
  std::string text;

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attrs)
      if (k == key) return &v;
    return nullptr;
  }
};

class XmlScanner {
 public:
  explicit XmlScanner(std::string_view input) : s_(input) {}

  XmlNode parse_document() {
    skip_ws();
    if (peek_starts_with("<?")) {
      const auto end = s_.find("?>", pos_);
      if (end == std::string_view::npos) fail("unterminated XML prolog");
      pos_ = end + 2;
    }
    skip_ws();
    XmlNode root = parse_element();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("XML error at offset " + std::to_string(pos_) + ": " + why);
  }
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\n' || s_[pos_] == '\t' || s_[pos_] == '\r'))
      ++pos_;
  }
  bool peek_starts_with(std::string_view prefix) const {
    return s_.substr(pos_, prefix.size()) == prefix;
  }
  static bool name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.' || c == ':';
  }
  std::string read_name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }
  std::string decode_entities(std::string_view raw) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      const auto semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity");
      const std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "amp") out += '&';
      else if (ent == "quot") out += '"';
      else if (ent == "apos") out += '\'';
      else fail("unknown entity &" + std::string(ent) + ";");
      i = semi;
    }
    return out;
  }

  XmlNode parse_element() {
    if (pos_ >= s_.size() || s_[pos_] != '<') fail("expected '<'");
    ++pos_;
    XmlNode node;
    node.name = read_name();
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated tag <" + node.name + ">");
      if (peek_starts_with("/>")) {
        pos_ += 2;
        return node;
      }
      if (s_[pos_] == '>') {
        ++pos_;
        break;
      }
      std::string key = read_name();
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != '=') fail("expected '=' after attribute " + key);
      ++pos_;
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != '"') fail("expected '\"' in attribute " + key);
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') ++pos_;
      if (pos_ >= s_.size()) fail("unterminated attribute value for " + key);
      node.attrs.emplace_back(std::move(key), decode_entities(s_.substr(start, pos_ - start)));
      ++pos_;
    }
    while (true) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != '<') ++pos_;
      if (pos_ >= s_.size()) fail("unterminated element <" + node.name + ">");
      node.text += decode_entities(s_.substr(start, pos_ - start));
      if (peek_starts_with("</")) {
        pos_ += 2;
        const std::string closing = read_name();
        if (closing != node.name) fail("mismatched </" + closing + "> inside <" + node.name + ">");
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != '>') fail("expected '>' after closing tag");
        ++pos_;
        return node;
      }
      node.children.push_back(parse_element());
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// Extracts the degree from a fuzzyLabel annotation payload.
inline double parse_degree_literal(const std::string& literal) {
  XmlScanner scanner(literal);
  const XmlNode payload = scanner.parse_document();
  if (payload.name != "fuzzyOwl2" || payload.children.size() != 1 ||
      payload.children[0].name != "Degree")
    throw ParseError("fuzzyLabel literal is not a fuzzyOwl2 Degree payload");
  const std::string* value = payload.children[0].attr("value");
  if (value == nullptr) throw ParseError("Degree without a value attribute");
  double degree = 0.0;
  if (!try_parse_double(*value, degree)) throw ParseError("Degree value is not a number: " + *value);
  if (!(degree > 0.0 && degree <= 1.0)) throw ParseError("Degree value outside (0,1]: " + *value);
  return degree;
}

// Reads the optional leading <Annotation> of an axiom element and leaves
// `first_operand` pointing past it.
inline std::optional<double> read_axiom_degree(const XmlNode& axiom, std::size_t& first_operand) {
  first_operand = 0;
  if (axiom.children.empty() || axiom.children[0].name != "Annotation") return std::nullopt;
  const XmlNode& ann = axiom.children[0];
  first_operand = 1;
  if (ann.children.size() != 2 || ann.children[0].name != "AnnotationProperty" ||
      ann.children[1].name != "Literal")
    throw ParseError("malformed axiom annotation");
  const std::string* prop = ann.children[0].attr("IRI");
  if (prop == nullptr || *prop != "#fuzzyLabel")
    throw ParseError("unexpected annotation property on an axiom");
  return parse_degree_literal(ann.children[1].text);
}

inline std::string strip_fragment(const std::string& iri) {
  if (iri.empty() || iri[0] != '#') throw ParseError("IRI is not a local fragment: " + iri);
  return iri.substr(1);
}

}  // namespace detail

/// Serializes the ontology as a Fuzzy OWL 2 XML document: one class per
/// concept, degree-annotated SubClassOf per taxonomy edge, punned
/// individuals with associatedWith assertions per association rule,
/// degree-annotated ClassAssertions for instance memberships, and one
/// ontology annotation per partition axiom. Output is byte-deterministic:
/// axioms are sorted by (kind, subject IRI, object IRI).
inline std::string export_fuzzy_owl2(const FuzzyOntology& onto, int degree_precision = 6) {
  if (degree_precision < 1 || degree_precision > 12)
    throw ValidationError("degree_precision must lie in 1..12");

  using detail::escape_xml;

  std::map<std::string, std::string> iri_of;  // original name -> fragment
  std::map<std::string, std::string> owner;   // fragment -> original name
  auto intern = [&](const std::string& name) -> const std::string& {
    auto it = iri_of.find(name);
    if (it != iri_of.end()) return it->second;
    std::string iri = detail::sanitize_iri(name);
    auto [owner_it, fresh] = owner.emplace(iri, name);
    if (!fresh && owner_it->second != name)
      throw ValidationError("IRI collision: \"" + name + "\" and \"" + owner_it->second +
                            "\" both sanitize to #" + iri);
    return iri_of.emplace(name, std::move(iri)).first->second;
  };

  std::set<std::string> class_iris;
  for (const auto& c : onto.concepts)
    if (!class_iris.insert(intern(c.name)).second)
      throw ValidationError("duplicate concept name: " + c.name);

  std::set<std::string> individual_iris;
  for (const auto& c : onto.concepts) individual_iris.insert(iri_of.at(c.name));  // punning
  for (const auto& r : onto.nontaxonomy) {
    individual_iris.insert(intern(r.source));
    individual_iris.insert(intern(r.target));
  }
  for (const auto& id : onto.object_ids) individual_iris.insert(intern(id));

  struct SubClass {
    std::string sub, super;
    std::optional<double> degree;
  };
  std::vector<SubClass> subclasses;
  for (const auto& r : onto.taxonomy)
    subclasses.push_back({intern(r.target), intern(r.source), r.confidence});
  std::sort(subclasses.begin(), subclasses.end(), [](const SubClass& a, const SubClass& b) {
    return std::tie(a.sub, a.super) < std::tie(b.sub, b.super);
  });

  struct Assertion {
    std::string subject, object;  // property assertion: source/target; class assertion: individual/class
    double degree;
  };
  std::vector<Assertion> property_assertions;
  for (const auto& r : onto.nontaxonomy) {
    if (!r.confidence) throw ValidationError("association without a confidence: " + r.source);
    property_assertions.push_back({iri_of.at(r.source), iri_of.at(r.target), *r.confidence});
  }
  std::sort(property_assertions.begin(), property_assertions.end(),
            [](const Assertion& a, const Assertion& b) {
              return std::tie(a.subject, a.object) < std::tie(b.subject, b.object);
            });

  std::vector<Assertion> class_assertions;
  for (const auto& c : onto.concepts)
    for (const auto& [obj, degree] : c.instances) {
      if (!(degree > 0.0 && degree <= 1.0))
        throw ValidationError("instance degree outside (0,1] on concept " + c.name);
      class_assertions.push_back({iri_of.at(obj), iri_of.at(c.name), degree});
    }
  std::sort(class_assertions.begin(), class_assertions.end(),
            [](const Assertion& a, const Assertion& b) {
              return std::tie(a.subject, a.object) < std::tie(b.subject, b.object);
            });

  std::string xml;
  xml += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  xml += "<Ontology ontologyIRI=\"urn:fodm:ontology\">\n";

  std::vector<PartitionAxiom> axioms = onto.axioms;
  std::sort(axioms.begin(), axioms.end(),
            [](const PartitionAxiom& a, const PartitionAxiom& b) { return a.attribute < b.attribute; });
  for (const auto& ax : axioms) {
    std::string literal = "partition(" + ax.attribute + ") =";
    for (std::size_t i = 0; i < ax.members.size(); ++i)
      literal += (i == 0 ? " " : " + ") + ax.members[i];
    xml += "  <Annotation>\n";
    xml += "    <AnnotationProperty IRI=\"#fuzzyPartition\"/>\n";
    xml += "    <Literal>" + escape_xml(literal) + "</Literal>\n";
    xml += "  </Annotation>\n";
  }

  for (const auto& iri : class_iris)
    xml += "  <Declaration><Class IRI=\"#" + iri + "\"/></Declaration>\n";

  auto degree_annotation = [&](double degree, const std::string& indent) {
    return indent + "<Annotation>\n" +
           indent + "  <AnnotationProperty IRI=\"#fuzzyLabel\"/>\n" +
           indent + "  <Literal>" + escape_xml(detail::fuzzy_label_literal(degree, degree_precision)) +
           "</Literal>\n" +
           indent + "</Annotation>\n";
  };

  for (const auto& sc : subclasses) {
    xml += "  <SubClassOf>\n";
    if (sc.degree) xml += degree_annotation(*sc.degree, "    ");
    xml += "    <Class IRI=\"#" + sc.sub + "\"/>\n";
    xml += "    <Class IRI=\"#" + sc.super + "\"/>\n";
    xml += "  </SubClassOf>\n";
  }

  for (const auto& iri : individual_iris)
    xml += "  <Declaration><NamedIndividual IRI=\"#" + iri + "\"/></Declaration>\n";

  for (const auto& pa : property_assertions) {
    xml += "  <ObjectPropertyAssertion>\n";
    xml += degree_annotation(pa.degree, "    ");
    xml += "    <ObjectProperty IRI=\"#associatedWith\"/>\n";
    xml += "    <NamedIndividual IRI=\"#" + pa.subject + "\"/>\n";
    xml += "    <NamedIndividual IRI=\"#" + pa.object + "\"/>\n";
    xml += "  </ObjectPropertyAssertion>\n";
  }

  for (const auto& ca : class_assertions) {
    xml += "  <ClassAssertion>\n";
    xml += degree_annotation(ca.degree, "    ");
    xml += "    <Class IRI=\"#" + ca.object + "\"/>\n";
    xml += "    <NamedIndividual IRI=\"#" + ca.subject + "\"/>\n";
    xml += "  </ClassAssertion>\n";
  }

  xml += "</Ontology>\n";
  return xml;
}

/// Parses a document produced by export_fuzzy_owl2 back into an ontology.
/// Names come back in their sanitized IRI form and intents are not part of
/// the wire format; everything else (concepts, relation sets, degrees,
/// instance assertions, partition axioms) is reconstructed.
inline FuzzyOntology parse_fuzzy_owl2(std::string_view xml) {
  using detail::XmlNode;

  detail::XmlScanner scanner(xml);
  const XmlNode root = scanner.parse_document();
  if (root.name != "Ontology") throw ParseError("root element must be <Ontology>");

  FuzzyOntology onto;
  std::map<std::string, OntologyConcept> concepts;  // by IRI name
  std::set<std::string> individuals;

  for (const XmlNode& child : root.children) {
    if (child.name == "Annotation") {
      if (child.children.size() != 2 || child.children[0].name != "AnnotationProperty" ||
          child.children[1].name != "Literal")
        throw ParseError("malformed ontology annotation");
      const std::string* prop = child.children[0].attr("IRI");
      if (prop == nullptr || *prop != "#fuzzyPartition")
        throw ParseError("unknown ontology annotation property");
      const std::string& literal = child.children[1].text;
      const auto open = literal.find('(');
      const auto close = literal.find(") =");
      if (literal.rfind("partition(", 0) != 0 || close == std::string::npos)
        throw ParseError("malformed partition literal: " + literal);
      PartitionAxiom ax;
      ax.attribute = literal.substr(open + 1, close - open - 1);
      std::size_t start = close + 3;
      while (start < literal.size()) {
        if (literal[start] == ' ') { ++start; continue; }
        auto plus = literal.find(" + ", start);
        ax.members.push_back(literal.substr(start, plus == std::string::npos ? std::string::npos
                                                                             : plus - start));
        if (plus == std::string::npos) break;
        start = plus + 3;
      }
      onto.axioms.push_back(std::move(ax));
    } else if (child.name == "Declaration") {
      if (child.children.size() != 1) throw ParseError("Declaration must hold one entity");
      const XmlNode& entity = child.children[0];
      const std::string* iri = entity.attr("IRI");
      if (iri == nullptr) throw ParseError("Declaration entity without IRI");
      const std::string name = detail::strip_fragment(*iri);
      if (entity.name == "Class") {
        if (concepts.count(name)) throw ParseError("duplicate class IRI: " + *iri);
        OntologyConcept c;
        c.name = name;
        concepts.emplace(name, std::move(c));
      } else if (entity.name == "NamedIndividual") {
        if (!individuals.insert(name).second)
          throw ParseError("duplicate individual IRI: " + *iri);
      } else {
        throw ParseError("unknown declaration <" + entity.name + ">");
      }
    } else if (child.name == "SubClassOf") {
      std::size_t first = 0;
      const std::optional<double> degree = detail::read_axiom_degree(child, first);
      if (child.children.size() != first + 2 || child.children[first].name != "Class" ||
          child.children[first + 1].name != "Class")
        throw ParseError("SubClassOf must hold two classes");
      const std::string* sub = child.children[first].attr("IRI");
      const std::string* super = child.children[first + 1].attr("IRI");
      if (sub == nullptr || super == nullptr) throw ParseError("SubClassOf class without IRI");
      Relation r;
      r.kind = RelationKind::kTaxonomy;
      r.source = detail::strip_fragment(*super);
      r.target = detail::strip_fragment(*sub);
      r.confidence = degree;
      onto.taxonomy.push_back(std::move(r));
    } else if (child.name == "ObjectPropertyAssertion") {
      std::size_t first = 0;
      const std::optional<double> degree = detail::read_axiom_degree(child, first);
      if (!degree) throw ParseError("ObjectPropertyAssertion without a degree annotation");
      if (child.children.size() != first + 3 || child.children[first].name != "ObjectProperty" ||
          child.children[first + 1].name != "NamedIndividual" ||
          child.children[first + 2].name != "NamedIndividual")
        throw ParseError("malformed ObjectPropertyAssertion");
      const std::string* prop = child.children[first].attr("IRI");
      if (prop == nullptr || *prop != "#associatedWith")
        throw ParseError("unknown object property in assertion");
      const std::string* source = child.children[first + 1].attr("IRI");
      const std::string* target = child.children[first + 2].attr("IRI");
      if (source == nullptr || target == nullptr) throw ParseError("assertion individual without IRI");
      Relation r;
      r.kind = RelationKind::kNontaxonomy;
      r.source = detail::strip_fragment(*source);
      r.target = detail::strip_fragment(*target);
      r.confidence = degree;
      onto.nontaxonomy.push_back(std::move(r));
    } else if (child.name == "ClassAssertion") {
      std::size_t first = 0;
      const std::optional<double> degree = detail::read_axiom_degree(child, first);
      if (!degree) throw ParseError("ClassAssertion without a degree annotation");
      if (child.children.size() != first + 2 || child.children[first].name != "Class" ||
          child.children[first + 1].name != "NamedIndividual")
        throw ParseError("malformed ClassAssertion");
      const std::string* cls = child.children[first].attr("IRI");
      const std::string* ind = child.children[first + 1].attr("IRI");
      if (cls == nullptr || ind == nullptr) throw ParseError("ClassAssertion entity without IRI");
      auto it = concepts.find(detail::strip_fragment(*cls));
      if (it == concepts.end())
        throw ParseError("ClassAssertion references undeclared class " + *cls);
      it->second.instances.emplace_back(detail::strip_fragment(*ind), *degree);
    } else {
      throw ParseError("unknown element <" + child.name + ">");
    }
  }

  std::set<std::string> object_ids;
  for (auto& [name, parsed] : concepts) {
    std::sort(parsed.instances.begin(), parsed.instances.end());
    for (const auto& [obj, degree] : parsed.instances) object_ids.insert(obj);
    onto.concepts.push_back(std::move(parsed));
  }
  onto.object_ids.assign(object_ids.begin(), object_ids.end());
  return onto;
}

}  // namespace fodm
