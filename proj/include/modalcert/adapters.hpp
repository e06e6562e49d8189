#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "modalcert/certificate.hpp"
#include "modalcert/errors.hpp"
#include "modalcert/formula_text.hpp"
#include "modalcert/index.hpp"
#include "modalcert/modal.hpp"
#include "modalcert/polarized.hpp"

namespace modalcert {

/// Subformula of `goal` named by `idx`. A diaind(I,J) is legal only when
/// I names a diamond and J names a box.
inline ModalFormula resolve(const ModalFormula& goal, const Index& idx) {
  switch (idx.op()) {
    case IndexOp::Root: return goal;
    case IndexOp::RelIdx: throw AdapterError("relidx does not name a subformula");
    case IndexOp::Left:
    case IndexOp::Right: {
      ModalFormula p = resolve(goal, idx.inner());
      if (p.is_literal()) throw AdapterError("index " + idx.str() + " goes below a literal");
      if (p.is_modal()) {
        if (idx.op() == IndexOp::Right) throw AdapterError("index " + idx.str() + " takes right of a modality");
        if (p.op() == ModalOp::Dia) throw AdapterError("index " + idx.str() + " enters a diamond without diaind");
        return p.body();
      }
      return idx.op() == IndexOp::Left ? p.left() : p.right();
    }
    case IndexOp::DiaInd: {
      ModalFormula d = resolve(goal, idx.inner());
      if (d.op() != ModalOp::Dia) throw AdapterError("diaind " + idx.str() + " does not start from a diamond");
      ModalFormula b = resolve(goal, idx.box());
      if (b.op() != ModalOp::Box) throw AdapterError("diaind " + idx.str() + " does not point to a box");
      return d.body();
    }
  }
  throw AdapterError("bad index");
}

/// Position-only lookup used for nested sequents: `left` also enters
/// diamonds, and diaind is not allowed.
inline ModalFormula resolve_position(const ModalFormula& goal, const Index& idx) {
  switch (idx.op()) {
    case IndexOp::Root: return goal;
    case IndexOp::Left:
    case IndexOp::Right: {
      ModalFormula p = resolve_position(goal, idx.inner());
      if (p.is_literal()) throw AdapterError("position " + idx.str() + " goes below a literal");
      if (p.is_modal()) {
        if (idx.op() == IndexOp::Right) throw AdapterError("position " + idx.str() + " takes right of a modality");
        return p.body();
      }
      return idx.op() == IndexOp::Left ? p.left() : p.right();
    }
    default: throw AdapterError("position " + idx.str() + " must use only root, left and right");
  }
}

inline bool names_box(const ModalFormula& goal, const Index& idx) {
  try {
    return resolve(goal, idx).op() == ModalOp::Box;
  } catch (const AdapterError&) {
    return false;
  }
}

namespace detail {
inline bool complementary(const ModalFormula& a, const ModalFormula& b) {
  return a.is_literal() && b.is_literal() && a.name() == b.name() && a.op() != b.op();
}
}  // namespace detail

/// Correspondence walk over a layer certificate: every index resolves, every
/// diamond decide names a box, every extra on a literal names a literal.
template <class Deco>
void validate_certificate(const ProofNode<Deco>& tree, const ModalFormula& goal) {
  preorder(tree, [&goal](const ProofNode<Deco>& n) {
    ModalFormula f = resolve(goal, n.index);
    if (n.extra) {
      ModalFormula x = resolve(goal, *n.extra);
      if (f.op() == ModalOp::Dia && x.op() != ModalOp::Box) {
        throw AdapterError("extra " + n.extra->str() + " of diamond " + n.index.str() + " is not a box");
      }
      if (f.is_literal() && !x.is_literal()) {
        throw AdapterError("extra " + n.extra->str() + " of literal " + n.index.str() + " is not a literal");
      }
    }
    if constexpr (std::is_same_v<Deco, StarDeco>) {
      if (n.deco.future && !names_box(goal, *n.deco.future)) {
        throw AdapterError("future " + n.deco.future->str() + " is not a box");
      }
      for (const Index& p : n.deco.present) {
        if (p.op() != IndexOp::Root && !names_box(goal, p)) {
          throw AdapterError("present world " + p.str() + " is neither root nor a box");
        }
      }
    }
  });
}

using LsEvidence = LmfCert;

inline LmfCert ls_to_lmf(const LsEvidence& e, const ModalFormula& goal) {
  validate_certificate(e, goal);
  return e;
}

/// Prefixed tableau evidence. Nodes mirror rule applications on the
/// negated goal; indices use the goal's positions, which the negation
/// preserves. Closure nodes carry the complementary literal as extra.
using PtEvidence = ProofNode<NoDeco>;

namespace detail {
inline LmfCert pt_node(const PtEvidence& n, const ModalFormula& goal, std::set<Index> prefixes) {
  ModalFormula f = resolve(goal, n.index);
  LmfCert out{n.index, std::nullopt, {}, {}};
  if (f.is_literal()) {
    if (!n.extra) throw AdapterError("closure at " + n.index.str() + " lacks the complementary literal");
    ModalFormula g = resolve(goal, *n.extra);
    if (!complementary(f, g)) {
      throw AdapterError("closure at " + n.index.str() + " pairs non-complementary literals");
    }
    if (!n.children.empty()) throw AdapterError("closure at " + n.index.str() + " has children");
    // Decide on the literal that is positive in the goal.
    if (f.op() == ModalOp::Atom) {
      out.extra = n.extra;
    } else {
      out.index = *n.extra;
      out.extra = n.index;
    }
    return out;
  }
  if (f.op() == ModalOp::Dia) {
    // A box of the tableau: it may only use a prefix created on this branch.
    if (!n.extra || !prefixes.count(*n.extra)) {
      throw AdapterError("box expansion at " + n.index.str() + " uses a prefix never created");
    }
    out.extra = n.extra;
  } else if (n.extra) {
    throw AdapterError("node " + n.index.str() + " carries an unexpected extra index");
  }
  if (f.op() == ModalOp::Box) prefixes.insert(n.index);
  for (const auto& k : n.children) out.children.push_back(pt_node(k, goal, prefixes));
  return out;
}
}  // namespace detail

inline std::pair<LmfCert, PolFormula> pt_to_lmf(const PtEvidence& e, const ModalFormula& goal) {
  LmfCert c = detail::pt_node(e, goal, {});
  validate_certificate(c, goal);
  return {c, certification_goal(goal)};
}

struct OsNode {
  Index index;
  std::vector<Index> extras;
  std::vector<OsNode> children;
  friend bool operator==(const OsNode&, const OsNode&) = default;
};

using OsEvidence = OsNode;

namespace detail {
inline StarCert os_node(const OsNode& n, const ModalFormula& goal, const std::vector<Index>& present, int& group) {
  ModalFormula f = resolve(goal, n.index);
  if (f.op() == ModalOp::Box) {
    for (const Index& d : n.extras) {
      if (resolve(goal, d).op() != ModalOp::Dia) {
        throw AdapterError("box rule at " + n.index.str() + " lists non-diamond " + d.str());
      }
    }
    StarCert head{n.index, std::nullopt, {group++, present, std::nullopt}, {}};
    std::vector<Index> there{n.index};
    int dia_group = n.extras.empty() ? 0 : group++;
    // Build the diamond chain top-down, then hang the premises below it.
    std::vector<StarCert> chain;
    for (const Index& d : n.extras) chain.push_back({d, n.index, {dia_group, there, n.index}, {}});
    std::vector<StarCert> below;
    for (const auto& k : n.children) below.push_back(os_node(k, goal, there, group));
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      it->children = std::move(below);
      below = {std::move(*it)};
    }
    head.children = std::move(below);
    return head;
  }
  if (f.is_literal()) {
    if (n.extras.size() != 1) throw AdapterError("init at " + n.index.str() + " needs exactly one complementary literal");
    ModalFormula g = resolve(goal, n.extras.front());
    if (!complementary(f, g)) throw AdapterError("init at " + n.index.str() + " pairs non-complementary literals");
    StarCert out{n.index, n.extras.front(), {group++, present, std::nullopt}, {}};
    if (f.op() != ModalOp::Atom) std::swap(*out.extra, out.index);
    for (const auto& k : n.children) out.children.push_back(os_node(k, goal, present, group));
    return out;
  }
  if (f.op() == ModalOp::Dia) throw AdapterError("diamond " + n.index.str() + " must be introduced by a box rule");
  if (!n.extras.empty()) throw AdapterError("node " + n.index.str() + " carries unexpected extras");
  StarCert out{n.index, std::nullopt, {group++, present, std::nullopt}, {}};
  for (const auto& k : n.children) out.children.push_back(os_node(k, goal, present, group));
  return out;
}
}  // namespace detail

/// Ordinary sequent evidence to the present/future layer. A box rule with
/// diamonds d1..dk becomes the box decide followed by k diamond decides
/// that share one group, all aimed at the box's world.
inline StarCert os_to_star(const OsEvidence& e, const ModalFormula& goal) {
  int group = 1;
  StarCert c = detail::os_node(e, goal, {Index::root()}, group);
  validate_certificate(c, goal);
  return c;
}

struct NsNode {
  NsIndex index;
  std::optional<NsIndex> extra;
  std::vector<NsNode> children;
  friend bool operator==(const NsNode&, const NsNode&) = default;
};

using NsEvidence = NsNode;

namespace detail {
struct NsState {
  IndexMap map;
  std::map<SeqIndex, Index> created;  // child sequent -> box index that made it
  std::map<SeqIndex, int> boxes;      // box rules applied per sequent
};

inline LmfCert ns_node(const NsNode& n, const ModalFormula& goal, NsState st) {
  const Index mapped = st.map.lookup(n.index);
  const Index& pos = n.index.pos;
  const SeqIndex& seq = n.index.seq;
  ModalFormula f = resolve_position(goal, pos);
  LmfCert out{mapped, std::nullopt, {}, {}};
  switch (f.op()) {
    case ModalOp::And:
    case ModalOp::Or:
      if (n.extra) throw AdapterError("node " + n.index.str() + " carries an unexpected extra");
      st.map = st.map.extend({Index::left(pos), seq}, Index::left(mapped));
      st.map = st.map.extend({Index::right(pos), seq}, Index::right(mapped));
      break;
    case ModalOp::Box: {
      if (n.extra) throw AdapterError("node " + n.index.str() + " carries an unexpected extra");
      SeqIndex child = SeqIndex::chld(++st.boxes[seq], seq);
      st.map = st.map.extend({Index::left(pos), child}, Index::left(mapped));
      st.created[child] = mapped;
      break;
    }
    case ModalOp::Dia: {
      if (!n.extra) throw AdapterError("diamond rule at " + n.index.str() + " lacks its target");
      const NsIndex& to = *n.extra;
      if (!(to.pos == Index::left(pos))) throw AdapterError("diamond target " + to.str() + " is not the body");
      auto it = st.created.find(to.seq);
      if (it == st.created.end() || to.seq.is_zb() || !(to.seq.parent() == seq)) {
        throw AdapterError("diamond target " + to.str() + " is not a sequent created below " + seq.str());
      }
      st.map = st.map.extend(to, dia_child(mapped, it->second));
      out.extra = it->second;
      break;
    }
    case ModalOp::Atom:
    case ModalOp::NAtom:
      if (!n.extra) throw AdapterError("init at " + n.index.str() + " lacks the complementary literal");
      out.extra = st.map.lookup(*n.extra);
      break;
  }
  for (const auto& k : n.children) out.children.push_back(ns_node(k, goal, st));
  return out;
}
}  // namespace detail

/// Nested sequent evidence to the single-focus layer via an index map
/// seeded with (root, zb) -> root.
inline LmfCert ns_to_lmf(const NsEvidence& e, const ModalFormula& goal) {
  detail::NsState st;
  st.map = st.map.extend({Index::root(), SeqIndex::zb()}, Index::root());
  LmfCert c = detail::ns_node(e, goal, st);
  validate_certificate(c, goal);
  return c;
}

/// Labeled-sequent style lift: every node sees the root world and every
/// box decided anywhere; diamond decides aim at their extra box.
inline StarCert lift_to_star(const LmfmCert& c, const ModalFormula& goal) {
  std::vector<Index> worlds{Index::root()};
  preorder(c, [&](const LmfmCert& n) {
    if (names_box(goal, n.index)) worlds.push_back(n.index);
  });
  worlds = normalize_present(worlds);
  return redecorate<StarDeco>(c, [&](const LmfmCert& n) {
    StarDeco d{n.deco.group, worlds, std::nullopt};
    if (resolve(goal, n.index).op() == ModalOp::Dia) d.future = n.extra;
    return d;
  });
}

}  // namespace modalcert
