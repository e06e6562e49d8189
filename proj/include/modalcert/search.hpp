#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modalcert/certificate.hpp"
#include "modalcert/errors.hpp"
#include "modalcert/kernel.hpp"
#include "modalcert/layers.hpp"
#include "modalcert/plist.hpp"
#include "modalcert/polarized.hpp"

namespace modalcert {

struct SearchBudget {
  int max_decides = 16;
  long max_nodes = 100'000;
};

/// Choices made along one kernel branch, recorded so that the branches of
/// a successful run can be merged back into a certificate tree.
struct SearchRun {
  enum class StepKind { Decide, Extra, Branch };
  struct Step {
    StepKind kind;
    Index index;
    int side = 0;
  };

  PList<Step> path;
  PList<Index> delays_done;
  PList<std::pair<Index, WorldId>> dia_done;
  PList<std::pair<Index, WorldId>> eigen;
  std::optional<WorldId> witness;
  std::optional<Index> init_target;
  int decides = 0;
};

/// Permissive hooks that pick decides on their own, in storage order:
/// a literal whose complement is stored, then an unexpanded delay, then an
/// unused (diamond, world) pair. Storage only grows, so the first pick is
/// never worse than the others and no alternatives are offered.
struct SearchHooks {
  using Cert = SearchRun;
  int max_decides = 16;

  static Cert step(Cert c, SearchRun::StepKind k, Index i, int side = 0) {
    c.path = c.path.push({k, std::move(i), side});
    return c;
  }

  std::vector<std::pair<Cert, Cert>> andNeg_c(const Cert& c, const Site&) const {
    return {{step(c, SearchRun::StepKind::Branch, Index::root(), 0), step(c, SearchRun::StepKind::Branch, Index::root(), 1)}};
  }
  std::vector<Cert> orNeg_c(const Cert& c, const Site&) const { return {c}; }
  std::vector<Cert> false_c(const Cert& c, const Site&) const { return {c}; }
  std::vector<Cert> all_c(const Cert& c, const Site& s, WorldId w) const {
    if (!s.pending) return {};
    Cert out = c;
    out.eigen = c.eigen.push({*s.pending, w});
    return {out};
  }
  std::vector<std::pair<Cert, Index>> store_c(const Cert& c, const Site& s) const {
    if (!s.pending) return {};
    return {{c, *s.pending}};
  }
  std::vector<std::pair<Cert, Cert>> andPos_e(const Cert& c, const Site&) const { return {{c, c}}; }
  std::vector<std::pair<Cert, int>> orPos_e(const Cert& c, const Site&) const { return {{c, 1}, {c, 2}}; }
  std::vector<Cert> true_e(const Cert& c, const Site&) const { return {c}; }
  std::vector<std::pair<Cert, WorldId>> some_e(const Cert& c, const Site&) const {
    if (!c.witness) return {};
    const auto* e = c.eigen.find_if([w = *c.witness](const auto& p) { return p.second == w; });
    if (e == nullptr) return {};
    Cert out = step(c, SearchRun::StepKind::Extra, e->first);
    out.witness.reset();
    return {{out, *c.witness}};
  }
  std::vector<Index> init_e(const Cert& c, const Site& s) const {
    if (s.formula.op() == PolOp::Rel) return {Index::relidx()};
    if (!c.init_target) return {};
    return {*c.init_target};
  }
  std::vector<Cert> release_e(const Cert& c, const Site&) const { return {c}; }

  std::vector<std::pair<Cert, Index>> decide_e(const Cert& c, std::span<const StoredEntry> st) const {
    if (c.decides >= max_decides) return {};
    auto begin = [&c](const Index& i) {
      Cert out = step(c, SearchRun::StepKind::Decide, i);
      out.decides = c.decides + 1;
      out.witness.reset();
      out.init_target.reset();
      return out;
    };
    for (const StoredEntry& e : st) {
      if (e.formula.op() != PolOp::PAtom) continue;
      PolFormula want = negate(e.formula);
      for (const StoredEntry& o : st) {
        if (o.formula == want) {
          Cert out = step(begin(e.index), SearchRun::StepKind::Extra, o.index);
          out.init_target = o.index;
          return {{out, e.index}};
        }
      }
    }
    for (const StoredEntry& e : st) {
      if (e.formula.op() != PolOp::AndPos || e.formula.left().op() != PolOp::TruePos) continue;
      if (c.delays_done.find_if([&e](const Index& i) { return i == e.index; }) != nullptr) continue;
      Cert out = begin(e.index);
      out.delays_done = c.delays_done.push(e.index);
      return {{out, e.index}};
    }
    for (const StoredEntry& e : st) {
      if (e.formula.op() != PolOp::Ex) continue;
      const WorldTerm& from = e.formula.body().left().src();
      for (const StoredEntry& r : st) {
        if (r.formula.op() != PolOp::NRel || !(r.formula.src() == from) || r.formula.dst().is_var) continue;
        WorldId w = r.formula.dst().id;
        auto used = [&](const auto& p) { return p.first == e.index && p.second == w; };
        if (c.dia_done.find_if(used) != nullptr) continue;
        Cert out = begin(e.index);
        out.dia_done = c.dia_done.push({e.index, w});
        out.witness = w;
        return {{out, e.index}};
      }
    }
    return {};
  }
  std::vector<CutChoice<Cert>> cut_e(const Cert&, std::span<const StoredEntry>) const { return {}; }
};

static_assert(Fpc<SearchHooks>);

namespace detail {

struct Draft {
  Index index;
  std::optional<Index> extra;
  std::map<int, std::unique_ptr<Draft>> kids;
};

inline void add_path(Draft& top, const std::vector<SearchRun::Step>& path) {
  Draft* cur = &top;
  int side = 0;
  for (const auto& s : path) {
    switch (s.kind) {
      case SearchRun::StepKind::Decide: {
        auto& slot = cur->kids[side];
        if (!slot) {
          slot = std::make_unique<Draft>();
          slot->index = s.index;
        } else if (!(slot->index == s.index)) {
          throw std::logic_error("search branches disagree on a decide");
        }
        cur = slot.get();
        side = 0;
        break;
      }
      case SearchRun::StepKind::Extra: cur->extra = s.index; break;
      case SearchRun::StepKind::Branch: side = s.side; break;
    }
  }
}

inline LmfCert finish(const Draft& d) {
  LmfCert out{d.index, d.extra, {}, {}};
  for (const auto& [side, k] : d.kids) out.children.push_back(finish(*k));
  return out;
}

}  // namespace detail

/// Bounded proof search for `goal`. Returns nothing when no certificate is
/// found within the budget; that says nothing about validity.
inline std::optional<LmfCert> search_lmf(const ModalFormula& goal, SearchBudget b) {
  if (b.max_decides < 1 || b.max_nodes < 1) throw InputError("search budget values must be >= 1");
  PolFormula g = certification_goal(goal);
  CheckResult<SearchRun> r;
  try {
    r = check(SearchHooks{b.max_decides}, SearchRun{}, g, {b.max_nodes});
  } catch (const LimitError&) {
    return std::nullopt;
  }
  if (!r.accepted) return std::nullopt;
  detail::Draft top;
  for (const SearchRun& leaf : r.leaves) detail::add_path(top, leaf.path.to_vector());
  if (top.kids.size() != 1) throw std::logic_error("search produced no root decide");
  LmfCert cert = detail::finish(*top.kids.begin()->second);
  auto replay = check_lmf(cert, g, {b.max_nodes});
  if (!replay.accepted || replay.trace != r.trace) throw std::logic_error("search certificate does not replay");
  return cert;
}

}  // namespace modalcert
