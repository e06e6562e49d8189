#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "modalcert/adapters.hpp"
#include "modalcert/certificate.hpp"
#include "modalcert/errors.hpp"
#include "modalcert/formula_text.hpp"
#include "modalcert/index.hpp"

namespace modalcert {

enum class Format { Ls, Pt, Os, Ns, Lmf, Lmfm, LmfStar };

inline std::string format_name(Format f) {
  switch (f) {
    case Format::Ls: return "ls";
    case Format::Pt: return "pt";
    case Format::Os: return "os";
    case Format::Ns: return "ns";
    case Format::Lmf: return "lmf";
    case Format::Lmfm: return "lmfm";
    case Format::LmfStar: return "lmfstar";
  }
  return "?";
}

inline std::optional<Format> parse_format(std::string_view s) {
  for (Format f : {Format::Ls, Format::Pt, Format::Os, Format::Ns, Format::Lmf, Format::Lmfm, Format::LmfStar}) {
    if (format_name(f) == s) return f;
  }
  return std::nullopt;
}

using Proof = std::variant<LmfCert, LmfmCert, StarCert, OsNode, NsNode>;

struct EvidenceFile {
  int schema = 1;
  Format format = Format::Lmf;
  ModalFormula formula;
  Proof proof;

  friend bool operator==(const EvidenceFile& a, const EvidenceFile& b) {
    return a.schema == b.schema && a.format == b.format && a.formula == b.formula && a.proof == b.proof;
  }
};

namespace detail {

using json = nlohmann::json;

class EvidenceReader {
 public:
  explicit EvidenceReader(Format f) : format_(f) {}

  Proof proof(const json& j) const {
    switch (format_) {
      case Format::Ls:
      case Format::Pt:
      case Format::Lmf: return layer_node<NoDeco>(j, "/proof");
      case Format::Lmfm: return layer_node<GroupDeco>(j, "/proof");
      case Format::LmfStar: return layer_node<StarDeco>(j, "/proof");
      case Format::Os: return os_node(j, "/proof");
      case Format::Ns: return ns_node(j, "/proof");
    }
    throw SchemaError("/format: unsupported");
  }

 private:
  [[noreturn]] static void fail(const std::string& at, const std::string& msg) { throw SchemaError(at + ": " + msg); }

  static void only(const json& j, const std::string& at, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) fail(at, "expected an object");
    for (const auto& [k, v] : j.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == k;
      if (!ok) fail(at + "/" + k, "field not allowed here");
    }
  }

  static const json& need(const json& j, const std::string& at, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(at + "/" + key, "missing required field");
    return *it;
  }

  static Index index_at(const json& j, const std::string& at) {
    if (!j.is_string()) fail(at, "expected an index string");
    try {
      return parse_index(j.get<std::string>());
    } catch (const ParseError& e) {
      fail(at, e.what());
    }
  }

  static NsIndex ns_index_at(const json& j, const std::string& at) {
    only(j, at, {"pos", "seq"});
    Index pos = index_at(need(j, at, "pos"), at + "/pos");
    const json& s = need(j, at, "seq");
    if (!s.is_string()) fail(at + "/seq", "expected a sequent index string");
    try {
      return {pos, parse_seq_index(s.get<std::string>())};
    } catch (const InputError& e) {
      fail(at + "/seq", e.what());
    }
  }

  static const json* children_of(const json& j, const std::string& at) {
    auto it = j.find("children");
    if (it == j.end()) return nullptr;
    if (!it->is_array()) fail(at + "/children", "expected an array");
    return &*it;
  }

  template <class Deco>
  static ProofNode<Deco> layer_node(const json& j, const std::string& at) {
    if constexpr (std::is_same_v<Deco, NoDeco>) {
      only(j, at, {"index", "extra", "children"});
    } else if constexpr (std::is_same_v<Deco, GroupDeco>) {
      only(j, at, {"index", "extra", "group", "children"});
    } else {
      only(j, at, {"index", "extra", "group", "present", "future", "children"});
    }
    ProofNode<Deco> n;
    n.index = index_at(need(j, at, "index"), at + "/index");
    if (j.contains("extra")) n.extra = index_at(j["extra"], at + "/extra");
    if constexpr (!std::is_same_v<Deco, NoDeco>) {
      const json& g = need(j, at, "group");
      if (!g.is_number_integer() || g.get<long>() < 1) fail(at + "/group", "expected a positive integer");
      n.deco.group = g.get<int>();
    }
    if constexpr (std::is_same_v<Deco, StarDeco>) {
      const json& p = need(j, at, "present");
      if (!p.is_array()) fail(at + "/present", "expected an array of indices");
      for (std::size_t i = 0; i < p.size(); ++i) n.deco.present.push_back(index_at(p[i], at + "/present/" + std::to_string(i)));
      n.deco.present = normalize_present(n.deco.present);
      if (j.contains("future")) n.deco.future = index_at(j["future"], at + "/future");
    }
    if (const json* kids = children_of(j, at)) {
      for (std::size_t i = 0; i < kids->size(); ++i) {
        n.children.push_back(layer_node<Deco>((*kids)[i], at + "/children/" + std::to_string(i)));
      }
    }
    return n;
  }

  static OsNode os_node(const json& j, const std::string& at) {
    only(j, at, {"index", "extras", "children"});
    OsNode n;
    n.index = index_at(need(j, at, "index"), at + "/index");
    if (j.contains("extras")) {
      const json& x = j["extras"];
      if (!x.is_array()) fail(at + "/extras", "expected an array of indices");
      for (std::size_t i = 0; i < x.size(); ++i) n.extras.push_back(index_at(x[i], at + "/extras/" + std::to_string(i)));
    }
    if (const json* kids = children_of(j, at)) {
      for (std::size_t i = 0; i < kids->size(); ++i) {
        n.children.push_back(os_node((*kids)[i], at + "/children/" + std::to_string(i)));
      }
    }
    return n;
  }

  static NsNode ns_node(const json& j, const std::string& at) {
    only(j, at, {"index", "extra", "children"});
    NsNode n;
    n.index = ns_index_at(need(j, at, "index"), at + "/index");
    if (j.contains("extra")) n.extra = ns_index_at(j["extra"], at + "/extra");
    if (const json* kids = children_of(j, at)) {
      for (std::size_t i = 0; i < kids->size(); ++i) {
        n.children.push_back(ns_node((*kids)[i], at + "/children/" + std::to_string(i)));
      }
    }
    return n;
  }

  Format format_;
};

inline std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

using ojson = nlohmann::ordered_json;

template <class Deco>
ojson write_layer(const ProofNode<Deco>& n) {
  ojson j;
  j["index"] = n.index.str();
  if (n.extra) j["extra"] = n.extra->str();
  if constexpr (!std::is_same_v<Deco, NoDeco>) j["group"] = n.deco.group;
  if constexpr (std::is_same_v<Deco, StarDeco>) {
    ojson p = ojson::array();
    for (const Index& i : n.deco.present) p.push_back(i.str());
    j["present"] = p;
    if (n.deco.future) j["future"] = n.deco.future->str();
  }
  ojson kids = ojson::array();
  for (const auto& k : n.children) kids.push_back(write_layer(k));
  j["children"] = kids;
  return j;
}

inline ojson write_os(const OsNode& n) {
  ojson j;
  j["index"] = n.index.str();
  if (!n.extras.empty()) {
    ojson x = ojson::array();
    for (const Index& i : n.extras) x.push_back(i.str());
    j["extras"] = x;
  }
  ojson kids = ojson::array();
  for (const auto& k : n.children) kids.push_back(write_os(k));
  j["children"] = kids;
  return j;
}

inline ojson write_ns_index(const NsIndex& i) {
  ojson j;
  j["pos"] = i.pos.str();
  j["seq"] = i.seq.str();
  return j;
}

inline ojson write_ns(const NsNode& n) {
  ojson j;
  j["index"] = write_ns_index(n.index);
  if (n.extra) j["extra"] = write_ns_index(*n.extra);
  ojson kids = ojson::array();
  for (const auto& k : n.children) kids.push_back(write_ns(k));
  j["children"] = kids;
  return j;
}

}  // namespace detail

/// Parses and validates an evidence file. Every failure is a SchemaError
/// whose message starts with a line/column or a JSON pointer.
inline EvidenceFile parse_evidence(std::string_view text) {
  detail::json j;
  try {
    j = detail::json::parse(text.begin(), text.end());
  } catch (const detail::json::parse_error& e) {
    auto [line, col] = detail::line_col(text, e.byte);
    throw SchemaError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": invalid JSON");
  }
  if (!j.is_object()) throw SchemaError("/: expected an object");
  for (const auto& [k, v] : j.items()) {
    if (k != "schema" && k != "format" && k != "formula" && k != "proof") {
      throw SchemaError("/" + k + ": field not allowed here");
    }
  }
  EvidenceFile ev;
  if (j.contains("schema")) {
    if (!j["schema"].is_number_integer() || j["schema"].get<long>() != 1) {
      throw SchemaError("/schema: only schema version 1 is supported");
    }
  }
  if (!j.contains("format")) throw SchemaError("/format: missing required field");
  if (!j["format"].is_string()) throw SchemaError("/format: expected a string");
  auto fmt = parse_format(j["format"].get<std::string>());
  if (!fmt) throw SchemaError("/format: unknown format '" + j["format"].get<std::string>() + "'");
  ev.format = *fmt;
  if (!j.contains("formula")) throw SchemaError("/formula: missing required field");
  if (!j["formula"].is_string()) throw SchemaError("/formula: expected a string");
  try {
    ev.formula = parse_formula(j["formula"].get<std::string>());
  } catch (const ParseError& e) {
    throw SchemaError(std::string("/formula: ") + e.what());
  }
  if (!j.contains("proof")) throw SchemaError("/proof: missing required field");
  ev.proof = detail::EvidenceReader(ev.format).proof(j["proof"]);
  return ev;
}

inline std::string print_evidence(const EvidenceFile& ev) {
  detail::ojson j;
  j["schema"] = ev.schema;
  j["format"] = format_name(ev.format);
  j["formula"] = print_formula(ev.formula);
  j["proof"] = std::visit(
      [](const auto& p) -> detail::ojson {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OsNode>) {
          return detail::write_os(p);
        } else if constexpr (std::is_same_v<T, NsNode>) {
          return detail::write_ns(p);
        } else {
          return detail::write_layer(p);
        }
      },
      ev.proof);
  return j.dump(2) + "\n";
}

}  // namespace modalcert
