#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "modalcert/modal.hpp"

namespace modalcert {

enum class Polarity { Pos, Neg };

/// A world variable bound by a quantifier, or a world constant `wN`.
struct WorldTerm {
  bool is_var = false;
  std::string var;
  WorldId id = 0;

  static WorldTerm variable(std::string name) { return {true, std::move(name), 0}; }
  static WorldTerm constant(WorldId id) { return {false, {}, id}; }

  [[nodiscard]] std::string str() const { return is_var ? var : "w" + std::to_string(id); }
  friend bool operator==(const WorldTerm& a, const WorldTerm& b) {
    return a.is_var == b.is_var && (a.is_var ? a.var == b.var : a.id == b.id);
  }
};

enum class PolOp { PAtom, NAtom, Rel, NRel, AndNeg, AndPos, OrNeg, OrPos, All, Ex, TruePos, FalseNeg };

/// Polarized first-order formula over unary atoms P(x) and the binary
/// accessibility atom R(x,y).
class PolFormula {
  struct Node {
    PolOp op;
    std::string name;  // atom name or bound variable
    WorldTerm a, b;
    std::shared_ptr<const Node> l, r;
  };

 public:
  PolFormula() = default;

  static PolFormula patom(std::string n, WorldTerm x) { return make({PolOp::PAtom, std::move(n), std::move(x), {}, {}, {}}); }
  static PolFormula natom(std::string n, WorldTerm x) { return make({PolOp::NAtom, std::move(n), std::move(x), {}, {}, {}}); }
  static PolFormula rel(WorldTerm x, WorldTerm y) { return make({PolOp::Rel, {}, std::move(x), std::move(y), {}, {}}); }
  static PolFormula nrel(WorldTerm x, WorldTerm y) { return make({PolOp::NRel, {}, std::move(x), std::move(y), {}, {}}); }
  static PolFormula and_neg(const PolFormula& l, const PolFormula& r) { return bin(PolOp::AndNeg, l, r); }
  static PolFormula and_pos(const PolFormula& l, const PolFormula& r) { return bin(PolOp::AndPos, l, r); }
  static PolFormula or_neg(const PolFormula& l, const PolFormula& r) { return bin(PolOp::OrNeg, l, r); }
  static PolFormula or_pos(const PolFormula& l, const PolFormula& r) { return bin(PolOp::OrPos, l, r); }
  static PolFormula all(std::string y, const PolFormula& body) { return make({PolOp::All, std::move(y), {}, {}, body.p_, {}}); }
  static PolFormula ex(std::string y, const PolFormula& body) { return make({PolOp::Ex, std::move(y), {}, {}, body.p_, {}}); }
  static PolFormula true_pos() { return make({PolOp::TruePos, {}, {}, {}, {}, {}}); }
  static PolFormula false_neg() { return make({PolOp::FalseNeg, {}, {}, {}, {}, {}}); }

  [[nodiscard]] bool valid() const { return p_ != nullptr; }
  [[nodiscard]] PolOp op() const { return p_->op; }
  /// Atom name, or the bound variable of a quantifier.
  [[nodiscard]] const std::string& name() const { return p_->name; }
  [[nodiscard]] const WorldTerm& arg() const { return p_->a; }
  [[nodiscard]] const WorldTerm& src() const { return p_->a; }
  [[nodiscard]] const WorldTerm& dst() const { return p_->b; }
  [[nodiscard]] PolFormula left() const { return PolFormula(p_->l); }
  [[nodiscard]] PolFormula right() const { return PolFormula(p_->r); }
  [[nodiscard]] PolFormula body() const { return PolFormula(p_->l); }

  [[nodiscard]] bool is_literal() const {
    return op() == PolOp::PAtom || op() == PolOp::NAtom || op() == PolOp::Rel || op() == PolOp::NRel;
  }

  [[nodiscard]] Polarity polarity() const {
    switch (op()) {
      case PolOp::PAtom:
      case PolOp::Rel:
      case PolOp::AndPos:
      case PolOp::OrPos:
      case PolOp::Ex:
      case PolOp::TruePos: return Polarity::Pos;
      default: return Polarity::Neg;
    }
  }
  [[nodiscard]] bool positive() const { return polarity() == Polarity::Pos; }

  friend bool operator==(const PolFormula& x, const PolFormula& y) { return same(x.p_.get(), y.p_.get()); }

 private:
  explicit PolFormula(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  static PolFormula make(Node n) { return PolFormula(std::make_shared<const Node>(std::move(n))); }
  static PolFormula bin(PolOp op, const PolFormula& l, const PolFormula& r) { return make({op, {}, {}, {}, l.p_, r.p_}); }

  static bool same(const Node* x, const Node* y) {
    if (x == y) return true;
    if (x == nullptr || y == nullptr) return false;
    return x->op == y->op && x->name == y->name && x->a == y->a && x->b == y->b && same(x->l.get(), y->l.get()) &&
           same(x->r.get(), y->r.get());
  }

  std::shared_ptr<const Node> p_;
};

inline Polarity polarity(const PolFormula& f) { return f.polarity(); }

enum class PmOp { Atom, NAtom, AndNeg, AndPos, OrNeg, OrPos, Box, Dia, TruePos, FalseNeg };

/// Polarized propositional modal formula; the image of `polos`.
class PolModalFormula {
  struct Node {
    PmOp op;
    std::string name;
    std::shared_ptr<const Node> l, r;
  };

 public:
  PolModalFormula() = default;

  static PolModalFormula atom(std::string n) { return make(PmOp::Atom, std::move(n), {}, {}); }
  static PolModalFormula natom(std::string n) { return make(PmOp::NAtom, std::move(n), {}, {}); }
  static PolModalFormula and_neg(const PolModalFormula& l, const PolModalFormula& r) { return make(PmOp::AndNeg, {}, l.p_, r.p_); }
  static PolModalFormula and_pos(const PolModalFormula& l, const PolModalFormula& r) { return make(PmOp::AndPos, {}, l.p_, r.p_); }
  static PolModalFormula or_neg(const PolModalFormula& l, const PolModalFormula& r) { return make(PmOp::OrNeg, {}, l.p_, r.p_); }
  static PolModalFormula or_pos(const PolModalFormula& l, const PolModalFormula& r) { return make(PmOp::OrPos, {}, l.p_, r.p_); }
  static PolModalFormula box(const PolModalFormula& b) { return make(PmOp::Box, {}, b.p_, {}); }
  static PolModalFormula dia(const PolModalFormula& b) { return make(PmOp::Dia, {}, b.p_, {}); }
  static PolModalFormula true_pos() { return make(PmOp::TruePos, {}, {}, {}); }
  static PolModalFormula false_neg() { return make(PmOp::FalseNeg, {}, {}, {}); }

  [[nodiscard]] PmOp op() const { return p_->op; }
  [[nodiscard]] const std::string& name() const { return p_->name; }
  [[nodiscard]] PolModalFormula left() const { return PolModalFormula(p_->l); }
  [[nodiscard]] PolModalFormula right() const { return PolModalFormula(p_->r); }
  [[nodiscard]] PolModalFormula body() const { return PolModalFormula(p_->l); }

  [[nodiscard]] bool is_literal() const { return op() == PmOp::Atom || op() == PmOp::NAtom; }
  [[nodiscard]] Polarity polarity() const {
    switch (op()) {
      case PmOp::Atom:
      case PmOp::AndPos:
      case PmOp::OrPos:
      case PmOp::Dia:
      case PmOp::TruePos: return Polarity::Pos;
      default: return Polarity::Neg;
    }
  }
  [[nodiscard]] bool positive() const { return polarity() == Polarity::Pos; }

  friend bool operator==(const PolModalFormula& x, const PolModalFormula& y) { return same(x.p_.get(), y.p_.get()); }

 private:
  explicit PolModalFormula(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  static PolModalFormula make(PmOp op, std::string n, std::shared_ptr<const Node> l, std::shared_ptr<const Node> r) {
    return PolModalFormula(std::make_shared<const Node>(Node{op, std::move(n), std::move(l), std::move(r)}));
  }
  static bool same(const Node* x, const Node* y) {
    if (x == y) return true;
    if (x == nullptr || y == nullptr) return false;
    return x->op == y->op && x->name == y->name && same(x->l.get(), y->l.get()) && same(x->r.get(), y->r.get());
  }

  std::shared_ptr<const Node> p_;
};

/// t+ &+ a
template <class F>
F delay_pos(const F& a) {
  return F::and_pos(F::true_pos(), a);
}

/// f- |- a
template <class F>
F delay_neg(const F& a) {
  return F::or_neg(F::false_neg(), a);
}

template <class F>
F delp(const F& a) {
  return a.is_literal() || a.positive() ? a : delay_pos(a);
}

inline PolModalFormula polos(const ModalFormula& a) {
  switch (a.op()) {
    case ModalOp::Atom: return PolModalFormula::atom(a.name());
    case ModalOp::NAtom: return PolModalFormula::natom(a.name());
    case ModalOp::And: return PolModalFormula::and_neg(delp(polos(a.left())), delp(polos(a.right())));
    case ModalOp::Or: return PolModalFormula::or_neg(delp(polos(a.left())), delp(polos(a.right())));
    case ModalOp::Box: return PolModalFormula::box(delp(polos(a.body())));
    case ModalOp::Dia: return PolModalFormula::dia(delay_neg(delp(polos(a.body()))));
  }
  throw std::logic_error("polos: bad operator");
}

/// Drops every delay wrapper and forgets polarity annotations.
inline ModalFormula erase_delays(const PolModalFormula& a) {
  switch (a.op()) {
    case PmOp::Atom: return ModalFormula::atom(a.name());
    case PmOp::NAtom: return ModalFormula::natom(a.name());
    case PmOp::AndPos:
      if (a.left().op() == PmOp::TruePos) return erase_delays(a.right());
      return ModalFormula::conj(erase_delays(a.left()), erase_delays(a.right()));
    case PmOp::OrNeg:
      if (a.left().op() == PmOp::FalseNeg) return erase_delays(a.right());
      return ModalFormula::disj(erase_delays(a.left()), erase_delays(a.right()));
    case PmOp::AndNeg: return ModalFormula::conj(erase_delays(a.left()), erase_delays(a.right()));
    case PmOp::OrPos: return ModalFormula::disj(erase_delays(a.left()), erase_delays(a.right()));
    case PmOp::Box: return ModalFormula::box(erase_delays(a.body()));
    case PmOp::Dia: return ModalFormula::dia(erase_delays(a.body()));
    case PmOp::TruePos:
    case PmOp::FalseNeg: break;
  }
  throw std::invalid_argument("erase_delays: bare unit has no modal counterpart");
}

namespace detail {
inline PolFormula tr_at(const ModalFormula& a, const WorldTerm& x, int& counter) {
  switch (a.op()) {
    case ModalOp::Atom: return PolFormula::patom(a.name(), x);
    case ModalOp::NAtom: return PolFormula::natom(a.name(), x);
    case ModalOp::And: {
      PolFormula l = delp(tr_at(a.left(), x, counter));
      return PolFormula::and_neg(l, delp(tr_at(a.right(), x, counter)));
    }
    case ModalOp::Or: {
      PolFormula l = delp(tr_at(a.left(), x, counter));
      return PolFormula::or_neg(l, delp(tr_at(a.right(), x, counter)));
    }
    case ModalOp::Box: {
      std::string y = "y" + std::to_string(counter++);
      WorldTerm yt = WorldTerm::variable(y);
      return PolFormula::all(y, PolFormula::or_neg(PolFormula::nrel(x, yt), delp(tr_at(a.body(), yt, counter))));
    }
    case ModalOp::Dia: {
      std::string y = "y" + std::to_string(counter++);
      WorldTerm yt = WorldTerm::variable(y);
      return PolFormula::ex(y, PolFormula::and_pos(PolFormula::rel(x, yt), delay_neg(delp(tr_at(a.body(), yt, counter)))));
    }
  }
  throw std::logic_error("tr: bad operator");
}
}  // namespace detail

/// First-order polarized translation of `a` at world `x`. Bound variables
/// are named y0, y1, ... in left-to-right order of the modalities.
inline PolFormula tr(const ModalFormula& a, const WorldTerm& x) {
  int counter = 0;
  return detail::tr_at(a, x, counter);
}

/// The kernel's starting formula for `a`: the translation at world w0,
/// delayed so that it can be stored and decided on.
inline PolFormula certification_goal(const ModalFormula& a) { return delp(tr(a, WorldTerm::constant(0))); }

/// Replaces free occurrences of variable `v` by `t`. Bound names are
/// distinct by construction, so no capture can occur.
inline PolFormula substitute(const PolFormula& f, const std::string& v, const WorldTerm& t) {
  auto s = [&](const WorldTerm& w) { return w.is_var && w.var == v ? t : w; };
  switch (f.op()) {
    case PolOp::PAtom: return PolFormula::patom(f.name(), s(f.arg()));
    case PolOp::NAtom: return PolFormula::natom(f.name(), s(f.arg()));
    case PolOp::Rel: return PolFormula::rel(s(f.src()), s(f.dst()));
    case PolOp::NRel: return PolFormula::nrel(s(f.src()), s(f.dst()));
    case PolOp::AndNeg: return PolFormula::and_neg(substitute(f.left(), v, t), substitute(f.right(), v, t));
    case PolOp::AndPos: return PolFormula::and_pos(substitute(f.left(), v, t), substitute(f.right(), v, t));
    case PolOp::OrNeg: return PolFormula::or_neg(substitute(f.left(), v, t), substitute(f.right(), v, t));
    case PolOp::OrPos: return PolFormula::or_pos(substitute(f.left(), v, t), substitute(f.right(), v, t));
    case PolOp::All: return f.name() == v ? f : PolFormula::all(f.name(), substitute(f.body(), v, t));
    case PolOp::Ex: return f.name() == v ? f : PolFormula::ex(f.name(), substitute(f.body(), v, t));
    case PolOp::TruePos:
    case PolOp::FalseNeg: return f;
  }
  throw std::logic_error("substitute: bad operator");
}

/// Classical negation with polarities flipped.
inline PolFormula negate(const PolFormula& f) {
  switch (f.op()) {
    case PolOp::PAtom: return PolFormula::natom(f.name(), f.arg());
    case PolOp::NAtom: return PolFormula::patom(f.name(), f.arg());
    case PolOp::Rel: return PolFormula::nrel(f.src(), f.dst());
    case PolOp::NRel: return PolFormula::rel(f.src(), f.dst());
    case PolOp::AndNeg: return PolFormula::or_pos(negate(f.left()), negate(f.right()));
    case PolOp::AndPos: return PolFormula::or_neg(negate(f.left()), negate(f.right()));
    case PolOp::OrNeg: return PolFormula::and_pos(negate(f.left()), negate(f.right()));
    case PolOp::OrPos: return PolFormula::and_neg(negate(f.left()), negate(f.right()));
    case PolOp::All: return PolFormula::ex(f.name(), negate(f.body()));
    case PolOp::Ex: return PolFormula::all(f.name(), negate(f.body()));
    case PolOp::TruePos: return PolFormula::false_neg();
    case PolOp::FalseNeg: return PolFormula::true_pos();
  }
  throw std::logic_error("negate: bad operator");
}

/// Largest world constant mentioned in `f`, or -1.
inline WorldId max_world_constant(const PolFormula& f) {
  auto c = [](const WorldTerm& w) { return w.is_var ? -1 : w.id; };
  switch (f.op()) {
    case PolOp::PAtom:
    case PolOp::NAtom: return c(f.arg());
    case PolOp::Rel:
    case PolOp::NRel: return std::max(c(f.src()), c(f.dst()));
    case PolOp::All:
    case PolOp::Ex: return max_world_constant(f.body());
    case PolOp::TruePos:
    case PolOp::FalseNeg: return -1;
    default: return std::max(max_world_constant(f.left()), max_world_constant(f.right()));
  }
}

inline std::string print_pol(const PolFormula& f) {
  switch (f.op()) {
    case PolOp::PAtom: return f.name() + "(" + f.arg().str() + ")";
    case PolOp::NAtom: return "~" + f.name() + "(" + f.arg().str() + ")";
    case PolOp::Rel: return "R(" + f.src().str() + "," + f.dst().str() + ")";
    case PolOp::NRel: return "~R(" + f.src().str() + "," + f.dst().str() + ")";
    case PolOp::AndNeg: return "(" + print_pol(f.left()) + " &- " + print_pol(f.right()) + ")";
    case PolOp::AndPos: return "(" + print_pol(f.left()) + " &+ " + print_pol(f.right()) + ")";
    case PolOp::OrNeg: return "(" + print_pol(f.left()) + " |- " + print_pol(f.right()) + ")";
    case PolOp::OrPos: return "(" + print_pol(f.left()) + " |+ " + print_pol(f.right()) + ")";
    case PolOp::All: return "all " + f.name() + ". " + print_pol(f.body());
    case PolOp::Ex: return "ex " + f.name() + ". " + print_pol(f.body());
    case PolOp::TruePos: return "t+";
    case PolOp::FalseNeg: return "f-";
  }
  throw std::logic_error("print_pol: bad operator");
}

inline std::string print_pol(const PolModalFormula& f) {
  switch (f.op()) {
    case PmOp::Atom: return f.name();
    case PmOp::NAtom: return "~" + f.name();
    case PmOp::AndNeg: return "(" + print_pol(f.left()) + " &- " + print_pol(f.right()) + ")";
    case PmOp::AndPos: return "(" + print_pol(f.left()) + " &+ " + print_pol(f.right()) + ")";
    case PmOp::OrNeg: return "(" + print_pol(f.left()) + " |- " + print_pol(f.right()) + ")";
    case PmOp::OrPos: return "(" + print_pol(f.left()) + " |+ " + print_pol(f.right()) + ")";
    case PmOp::Box: return "[]" + print_pol(f.body());
    case PmOp::Dia: return "<>" + print_pol(f.body());
    case PmOp::TruePos: return "t+";
    case PmOp::FalseNeg: return "f-";
  }
  throw std::logic_error("print_pol: bad operator");
}

}  // namespace modalcert
