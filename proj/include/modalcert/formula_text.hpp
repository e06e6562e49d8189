#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "modalcert/errors.hpp"
#include "modalcert/modal.hpp"

namespace modalcert {

namespace detail {

// or  := and ('|' or)?
// and := unary ('&' and)?
// unary := '~' ident | '[]' unary | '<>' unary | '(' or ')' | ident
class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : s_(text) {}

  ModalFormula run() {
    ModalFormula f = parse_or();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  ModalFormula parse_or() {
    ModalFormula l = parse_and();
    if (eat("|")) return ModalFormula::disj(l, parse_or());
    return l;
  }

  ModalFormula parse_and() {
    ModalFormula l = parse_unary();
    if (eat("&")) return ModalFormula::conj(l, parse_and());
    return l;
  }

  ModalFormula parse_unary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of formula");
    if (eat("~")) {
      skip_ws();
      if (pos_ >= s_.size() || !std::islower(static_cast<unsigned char>(s_[pos_]))) {
        fail("negation applies only to atoms");
      }
      return ModalFormula::natom(ident());
    }
    if (eat("[]")) return ModalFormula::box(parse_unary());
    if (eat("<>")) return ModalFormula::dia(parse_unary());
    if (eat("(")) {
      ModalFormula f = parse_or();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    if (std::islower(static_cast<unsigned char>(s_[pos_]))) return ModalFormula::atom(ident());
    fail("unexpected '" + std::string(1, s_[pos_]) + "'");
  }

  std::string ident() {
    std::size_t start = pos_;
    while (pos_ < s_.size()) {
      auto c = static_cast<unsigned char>(s_[pos_]);
      if (!(std::islower(c) || std::isdigit(c) || c == '_')) break;
      ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline void print_formula_to(const ModalFormula& a, std::string& out) {
  auto sub = [&out](const ModalFormula& f, bool parens) {
    if (parens) out += '(';
    print_formula_to(f, out);
    if (parens) out += ')';
  };
  switch (a.op()) {
    case ModalOp::Atom: out += a.name(); break;
    case ModalOp::NAtom: out += '~'; out += a.name(); break;
    case ModalOp::And:
      sub(a.left(), a.left().is_binary());
      out += " & ";
      sub(a.right(), a.right().op() == ModalOp::Or);
      break;
    case ModalOp::Or:
      sub(a.left(), a.left().op() == ModalOp::Or);
      out += " | ";
      sub(a.right(), false);
      break;
    case ModalOp::Box: out += "[]"; sub(a.body(), a.body().is_binary()); break;
    case ModalOp::Dia: out += "<>"; sub(a.body(), a.body().is_binary()); break;
  }
}

}  // namespace detail

/// Parses the surface grammar, e.g. `<>(p & ~q) | (<>~p | []q)`.
inline ModalFormula parse_formula(std::string_view text) { return detail::FormulaParser(text).run(); }

/// Prints with the fewest parentheses that parse back to the same tree.
inline std::string print_formula(const ModalFormula& a) {
  std::string out;
  detail::print_formula_to(a, out);
  return out;
}

}  // namespace modalcert
