#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modalcert/errors.hpp"

namespace modalcert {

enum class ModalOp { Atom, NAtom, And, Or, Box, Dia };

/// Propositional modal formula in negation normal form. Values are
/// immutable and share structure, so copies are cheap.
class ModalFormula {
  struct Node {
    ModalOp op;
    std::string name;
    std::shared_ptr<const Node> l, r;
  };

 public:
  ModalFormula() = default;

  static ModalFormula atom(std::string name) { return make(ModalOp::Atom, std::move(name), {}, {}); }
  static ModalFormula natom(std::string name) { return make(ModalOp::NAtom, std::move(name), {}, {}); }
  static ModalFormula conj(const ModalFormula& l, const ModalFormula& r) { return make(ModalOp::And, {}, l.p_, r.p_); }
  static ModalFormula disj(const ModalFormula& l, const ModalFormula& r) { return make(ModalOp::Or, {}, l.p_, r.p_); }
  static ModalFormula box(const ModalFormula& b) { return make(ModalOp::Box, {}, b.p_, {}); }
  static ModalFormula dia(const ModalFormula& b) { return make(ModalOp::Dia, {}, b.p_, {}); }

  [[nodiscard]] bool valid() const { return p_ != nullptr; }
  [[nodiscard]] ModalOp op() const { return p_->op; }
  [[nodiscard]] const std::string& name() const { return p_->name; }
  [[nodiscard]] ModalFormula left() const { return ModalFormula(p_->l); }
  [[nodiscard]] ModalFormula right() const { return ModalFormula(p_->r); }
  /// Operand of a modality.
  [[nodiscard]] ModalFormula body() const { return ModalFormula(p_->l); }

  [[nodiscard]] bool is_literal() const { return op() == ModalOp::Atom || op() == ModalOp::NAtom; }
  [[nodiscard]] bool is_binary() const { return op() == ModalOp::And || op() == ModalOp::Or; }
  [[nodiscard]] bool is_modal() const { return op() == ModalOp::Box || op() == ModalOp::Dia; }

  friend bool operator==(const ModalFormula& a, const ModalFormula& b) { return same(a.p_.get(), b.p_.get()); }

 private:
  explicit ModalFormula(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

  static ModalFormula make(ModalOp op, std::string name, std::shared_ptr<const Node> l,
                           std::shared_ptr<const Node> r) {
    return ModalFormula(std::make_shared<const Node>(Node{op, std::move(name), std::move(l), std::move(r)}));
  }

  static bool same(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a == nullptr || b == nullptr) return false;
    return a->op == b->op && a->name == b->name && same(a->l.get(), b->l.get()) && same(a->r.get(), b->r.get());
  }

  std::shared_ptr<const Node> p_;
};

/// De Morgan dual: atoms swap sign, and/or swap, box/dia swap.
inline ModalFormula negate_nnf(const ModalFormula& a) {
  switch (a.op()) {
    case ModalOp::Atom: return ModalFormula::natom(a.name());
    case ModalOp::NAtom: return ModalFormula::atom(a.name());
    case ModalOp::And: return ModalFormula::disj(negate_nnf(a.left()), negate_nnf(a.right()));
    case ModalOp::Or: return ModalFormula::conj(negate_nnf(a.left()), negate_nnf(a.right()));
    case ModalOp::Box: return ModalFormula::dia(negate_nnf(a.body()));
    case ModalOp::Dia: return ModalFormula::box(negate_nnf(a.body()));
  }
  throw std::logic_error("negate_nnf: bad operator");
}

inline int modal_depth(const ModalFormula& a) {
  if (a.is_literal()) return 0;
  if (a.is_modal()) return 1 + modal_depth(a.body());
  return std::max(modal_depth(a.left()), modal_depth(a.right()));
}

/// Number of binary and modal connectives; literals count zero.
inline int connective_count(const ModalFormula& a) {
  if (a.is_literal()) return 0;
  if (a.is_modal()) return 1 + connective_count(a.body());
  return 1 + connective_count(a.left()) + connective_count(a.right());
}

inline int dia_count(const ModalFormula& a) {
  if (a.is_literal()) return 0;
  if (a.is_modal()) return (a.op() == ModalOp::Dia ? 1 : 0) + dia_count(a.body());
  return dia_count(a.left()) + dia_count(a.right());
}

inline void collect_atoms(const ModalFormula& a, std::set<std::string>& out) {
  if (a.is_literal()) {
    out.insert(a.name());
  } else if (a.is_modal()) {
    collect_atoms(a.body(), out);
  } else {
    collect_atoms(a.left(), out);
    collect_atoms(a.right(), out);
  }
}

using WorldId = int;

/// Finite Kripke model. Worlds missing from `val` satisfy no atoms.
struct KripkeModel {
  std::set<WorldId> worlds;
  std::set<std::pair<WorldId, WorldId>> rel;
  std::map<WorldId, std::set<std::string>> val;

  [[nodiscard]] std::vector<WorldId> successors(WorldId w) const {
    std::vector<WorldId> out;
    for (auto it = rel.lower_bound({w, std::numeric_limits<WorldId>::min()}); it != rel.end() && it->first == w; ++it) {
      out.push_back(it->second);
    }
    return out;
  }

  [[nodiscard]] bool holds(WorldId w, const std::string& atom) const {
    auto it = val.find(w);
    return it != val.end() && it->second.count(atom) > 0;
  }

  /// Throws InputError when an edge or valuation key names an unknown world.
  void validate() const {
    if (worlds.empty()) throw InputError("kripke model has no worlds");
    for (const auto& [a, b] : rel) {
      if (!worlds.count(a) || !worlds.count(b)) throw InputError("kripke edge references unknown world");
    }
    for (const auto& [w, atoms] : val) {
      if (!worlds.count(w)) throw InputError("kripke valuation references unknown world " + std::to_string(w));
    }
  }
};

namespace detail {
inline bool eval_unchecked(const KripkeModel& m, WorldId w, const ModalFormula& a) {
  switch (a.op()) {
    case ModalOp::Atom: return m.holds(w, a.name());
    case ModalOp::NAtom: return !m.holds(w, a.name());
    case ModalOp::And: return eval_unchecked(m, w, a.left()) && eval_unchecked(m, w, a.right());
    case ModalOp::Or: return eval_unchecked(m, w, a.left()) || eval_unchecked(m, w, a.right());
    case ModalOp::Box:
      for (WorldId v : m.successors(w)) {
        if (!eval_unchecked(m, v, a.body())) return false;
      }
      return true;
    case ModalOp::Dia:
      for (WorldId v : m.successors(w)) {
        if (eval_unchecked(m, v, a.body())) return true;
      }
      return false;
  }
  throw std::logic_error("eval: bad operator");
}
}  // namespace detail

inline bool eval(const KripkeModel& m, WorldId w, const ModalFormula& a) {
  if (!m.worlds.count(w)) throw InputError("unknown world " + std::to_string(w));
  return detail::eval_unchecked(m, w, a);
}

}  // namespace modalcert
