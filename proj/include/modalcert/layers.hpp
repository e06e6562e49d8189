#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "modalcert/certificate.hpp"
#include "modalcert/kernel.hpp"
#include "modalcert/plist.hpp"

namespace modalcert {

/// Runtime certificate of the single-focus layer: the node whose bipole is
/// in progress, the nodes still to be decided, and the eigen-world map.
template <class Deco>
struct LmfRun {
  const ProofNode<Deco>* current = nullptr;
  std::vector<const ProofNode<Deco>*> next;
  PList<std::pair<Index, WorldId>> eigen;
};

template <class Deco>
LmfRun<Deco> lmf_start(const ProofNode<Deco>& tree) {
  return {nullptr, {&tree}, {}};
}

namespace detail {
// True when `idx` lies below `sub` in the left/right/diaind spine.
inline bool under(const Index& idx, const Index& sub) {
  for (Index i = idx;; i = i.inner()) {
    if (i == sub) return true;
    if (i.op() == IndexOp::Root || i.op() == IndexOp::RelIdx) return false;
  }
}
}  // namespace detail

template <class Deco = NoDeco>
struct LmfHooks {
  using Cert = LmfRun<Deco>;
  using Pair = std::pair<Cert, Cert>;

  std::vector<Pair> andNeg_c(const Cert& c, const Site&) const {
    if (c.next.size() != 2) return {};
    Cert l = c, r = c;
    l.next = {c.next[0]};
    r.next = {c.next[1]};
    return {{l, r}};
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
  std::vector<Pair> andPos_e(const Cert& c, const Site&) const { return {{c, c}}; }
  std::vector<std::pair<Cert, int>> orPos_e(const Cert& c, const Site& s) const {
    if (s.pending && !c.next.empty()) {
      const Index& target = c.next.front()->index;
      if (detail::under(target, Index::left(*s.pending))) return {{c, 1}};
      if (detail::under(target, Index::right(*s.pending))) return {{c, 2}};
    }
    return {{c, 1}, {c, 2}};
  }
  std::vector<Cert> true_e(const Cert& c, const Site&) const { return {c}; }
  std::vector<std::pair<Cert, WorldId>> some_e(const Cert& c, const Site&) const {
    if (c.current == nullptr || !c.current->extra) return {};
    std::vector<std::pair<Cert, WorldId>> out;
    for (const auto& [idx, w] : c.eigen.to_vector()) {
      if (idx == *c.current->extra) out.emplace_back(c, w);
    }
    return out;
  }
  std::vector<Index> init_e(const Cert& c, const Site& s) const {
    if (s.formula.op() == PolOp::Rel) return {Index::relidx()};
    if (c.current == nullptr || !c.current->extra || !c.next.empty()) return {};
    return {*c.current->extra};
  }
  std::vector<Cert> release_e(const Cert& c, const Site&) const { return {c}; }
  std::vector<std::pair<Cert, Index>> decide_e(const Cert& c, std::span<const StoredEntry>) const {
    if (c.next.size() != 1) return {};
    Cert out = c;
    out.current = c.next.front();
    out.next.clear();
    for (const auto& k : out.current->children) out.next.push_back(&k);
    return {{out, out.current->index}};
  }
  std::vector<CutChoice<Cert>> cut_e(const Cert&, std::span<const StoredEntry>) const { return {}; }
};

inline LmfHooks<NoDeco> lmf_hooks() { return {}; }

/// Runtime certificate of the multi-focus layer: the single-focus state
/// plus the group being consumed and the groups already finished.
template <class Deco>
struct MultiRun {
  LmfRun<Deco> base;
  int group = 0;
  PList<int> closed;
  bool well_formed = true;
};

/// Every group must label a chain of nodes where each is the only child of
/// the previous one. Returns a description of the first violation.
template <class Deco>
std::optional<std::string> group_violation(const ProofNode<Deco>& tree) {
  std::map<int, std::vector<const ProofNode<Deco>*>> members;
  std::optional<std::string> bad;
  preorder(tree, [&](const ProofNode<Deco>& n) {
    if (n.deco.group < 1 && !bad) bad = "group numbers must be positive";
    members[n.deco.group].push_back(&n);
  });
  if (bad) return bad;
  for (const auto& [g, nodes] : members) {
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const auto* prev = nodes[i - 1];
      if (prev->children.size() != 1 || &prev->children.front() != nodes[i]) {
        return "group " + std::to_string(g) + " is not a contiguous chain of decides";
      }
    }
  }
  return std::nullopt;
}

template <class Deco>
MultiRun<Deco> lmfm_start(const ProofNode<Deco>& tree) {
  return {lmf_start(tree), 0, {}, !group_violation(tree).has_value()};
}

namespace detail {
template <class Outer, class Inner, class Wrap>
std::vector<Outer> rewrap(std::vector<Inner> in, Wrap wrap) {
  std::vector<Outer> out;
  out.reserve(in.size());
  for (auto& x : in) out.push_back(wrap(std::move(x)));
  return out;
}
}  // namespace detail

/// Multi-focus layer defined on top of the single-focus one: each hook
/// unwraps the inner certificate, runs the lower hook, and wraps again.
template <class Deco = GroupDeco>
struct LmfmHooks {
  using Cert = MultiRun<Deco>;
  using Inner = LmfRun<Deco>;
  LmfHooks<Deco> lower;

  static Cert with(const Cert& c, Inner b) {
    Cert out = c;
    out.base = std::move(b);
    return out;
  }
  auto one(const Cert& c) const {
    return [&c](Inner b) { return with(c, std::move(b)); };
  }
  template <class T>
  auto first(const Cert& c) const {
    return [&c](std::pair<Inner, T> p) { return std::pair<Cert, T>{with(c, std::move(p.first)), std::move(p.second)}; };
  }
  auto both(const Cert& c) const {
    return [&c](std::pair<Inner, Inner> p) { return std::pair<Cert, Cert>{with(c, std::move(p.first)), with(c, std::move(p.second))}; };
  }

  std::vector<std::pair<Cert, Cert>> andNeg_c(const Cert& c, const Site& s) const {
    return detail::rewrap<std::pair<Cert, Cert>>(lower.andNeg_c(c.base, s), both(c));
  }
  std::vector<Cert> orNeg_c(const Cert& c, const Site& s) const { return detail::rewrap<Cert>(lower.orNeg_c(c.base, s), one(c)); }
  std::vector<Cert> false_c(const Cert& c, const Site& s) const { return detail::rewrap<Cert>(lower.false_c(c.base, s), one(c)); }
  std::vector<Cert> all_c(const Cert& c, const Site& s, WorldId w) const {
    return detail::rewrap<Cert>(lower.all_c(c.base, s, w), one(c));
  }
  std::vector<std::pair<Cert, Index>> store_c(const Cert& c, const Site& s) const {
    return detail::rewrap<std::pair<Cert, Index>>(lower.store_c(c.base, s), first<Index>(c));
  }
  std::vector<std::pair<Cert, Cert>> andPos_e(const Cert& c, const Site& s) const {
    return detail::rewrap<std::pair<Cert, Cert>>(lower.andPos_e(c.base, s), both(c));
  }
  std::vector<std::pair<Cert, int>> orPos_e(const Cert& c, const Site& s) const {
    return detail::rewrap<std::pair<Cert, int>>(lower.orPos_e(c.base, s), first<int>(c));
  }
  std::vector<Cert> true_e(const Cert& c, const Site& s) const { return detail::rewrap<Cert>(lower.true_e(c.base, s), one(c)); }
  std::vector<std::pair<Cert, WorldId>> some_e(const Cert& c, const Site& s) const {
    return detail::rewrap<std::pair<Cert, WorldId>>(lower.some_e(c.base, s), first<WorldId>(c));
  }
  std::vector<Index> init_e(const Cert& c, const Site& s) const { return lower.init_e(c.base, s); }
  std::vector<Cert> release_e(const Cert& c, const Site& s) const {
    return detail::rewrap<Cert>(lower.release_e(c.base, s), one(c));
  }
  std::vector<std::pair<Cert, Index>> decide_e(const Cert& c, std::span<const StoredEntry> st) const {
    if (!c.well_formed) return {};
    std::vector<std::pair<Cert, Index>> out;
    for (auto& [b, idx] : lower.decide_e(c.base, st)) {
      Cert n = with(c, b);
      int g = b.current->deco.group;
      if (g != c.group) {
        if (c.closed.find_if([g](int x) { return x == g; }) != nullptr) continue;
        if (c.group != 0) n.closed = c.closed.push(c.group);
        n.group = g;
      }
      out.emplace_back(std::move(n), idx);
    }
    return out;
  }
  std::vector<CutChoice<Cert>> cut_e(const Cert&, std::span<const StoredEntry>) const { return {}; }
};

inline LmfmHooks<GroupDeco> lmfm_hooks() { return {}; }

/// The world a formula at `idx` lives in, named by the box index that
/// created it, or `root`.
inline Index world_of(const Index& idx, const PList<std::pair<Index, WorldId>>& eigen) {
  switch (idx.op()) {
    case IndexOp::Root:
    case IndexOp::RelIdx: return Index::root();
    case IndexOp::DiaInd: return idx.box();
    case IndexOp::Left: {
      Index parent = idx.inner();
      if (eigen.find_if([&parent](const auto& e) { return e.first == parent; }) != nullptr) return parent;
      return world_of(parent, eigen);
    }
    case IndexOp::Right: return world_of(idx.inner(), eigen);
  }
  return Index::root();
}

struct StarRun {
  MultiRun<StarDeco> base;
  std::vector<Index> last_present{Index::root()};
  std::vector<Index> entry_present{Index::root()};
  std::optional<Index> group_future;
};

inline StarRun star_start(const StarCert& tree) { return {lmfm_start(tree), {Index::root()}, {Index::root()}, {}}; }

/// Present/future layer defined on top of the multi-focus one.
struct StarHooks {
  using Cert = StarRun;
  using Inner = MultiRun<StarDeco>;
  LmfmHooks<StarDeco> lower;

  static Cert with(const Cert& c, Inner b) {
    Cert out = c;
    out.base = std::move(b);
    return out;
  }
  auto one(const Cert& c) const {
    return [&c](Inner b) { return with(c, std::move(b)); };
  }
  template <class T>
  auto first(const Cert& c) const {
    return [&c](std::pair<Inner, T> p) { return std::pair<Cert, T>{with(c, std::move(p.first)), std::move(p.second)}; };
  }
  auto both(const Cert& c) const {
    return [&c](std::pair<Inner, Inner> p) { return std::pair<Cert, Cert>{with(c, std::move(p.first)), with(c, std::move(p.second))}; };
  }

  static bool member(const std::vector<Index>& set, const Index& i) {
    return std::find(set.begin(), set.end(), i) != set.end();
  }

  std::vector<std::pair<Cert, Cert>> andNeg_c(const Cert& c, const Site& s) const {
    return detail::rewrap<std::pair<Cert, Cert>>(lower.andNeg_c(c.base, s), both(c));
  }
  std::vector<Cert> orNeg_c(const Cert& c, const Site& s) const { return detail::rewrap<Cert>(lower.orNeg_c(c.base, s), one(c)); }
  std::vector<Cert> false_c(const Cert& c, const Site& s) const { return detail::rewrap<Cert>(lower.false_c(c.base, s), one(c)); }
  std::vector<Cert> all_c(const Cert& c, const Site& s, WorldId w) const {
    return detail::rewrap<Cert>(lower.all_c(c.base, s, w), one(c));
  }
  std::vector<std::pair<Cert, Index>> store_c(const Cert& c, const Site& s) const {
    return detail::rewrap<std::pair<Cert, Index>>(lower.store_c(c.base, s), first<Index>(c));
  }
  std::vector<std::pair<Cert, Cert>> andPos_e(const Cert& c, const Site& s) const {
    return detail::rewrap<std::pair<Cert, Cert>>(lower.andPos_e(c.base, s), both(c));
  }
  std::vector<std::pair<Cert, int>> orPos_e(const Cert& c, const Site& s) const {
    return detail::rewrap<std::pair<Cert, int>>(lower.orPos_e(c.base, s), first<int>(c));
  }
  std::vector<Cert> true_e(const Cert& c, const Site& s) const { return detail::rewrap<Cert>(lower.true_e(c.base, s), one(c)); }
  std::vector<std::pair<Cert, WorldId>> some_e(const Cert& c, const Site& s) const {
    const auto* node = c.base.base.current;
    if (node != nullptr && node->deco.future && node->extra != node->deco.future) return {};
    return detail::rewrap<std::pair<Cert, WorldId>>(lower.some_e(c.base, s), first<WorldId>(c));
  }
  std::vector<Index> init_e(const Cert& c, const Site& s) const { return lower.init_e(c.base, s); }
  // Decides are sequentialized, so a release never leaves a positive
  // formula of the same multi-focus group behind.
  std::vector<Cert> release_e(const Cert& c, const Site& s) const {
    return detail::rewrap<Cert>(lower.release_e(c.base, s), one(c));
  }
  std::vector<std::pair<Cert, Index>> decide_e(const Cert& c, std::span<const StoredEntry> st) const {
    std::vector<std::pair<Cert, Index>> out;
    for (auto& [b, idx] : lower.decide_e(c.base, st)) {
      const StarDeco& d = b.base.current->deco;
      if (d.present.empty()) continue;
      Cert n = with(c, b);
      if (b.group != c.base.group) {
        n.entry_present = c.last_present;
        n.group_future.reset();
      }
      Index world = world_of(idx, b.base.eigen);
      if (d.future) {
        if (!member(d.present, *d.future) || !member(n.entry_present, world)) continue;
        if (n.group_future && !(*n.group_future == *d.future)) continue;
        n.group_future = d.future;
      } else if (!member(d.present, world)) {
        continue;
      }
      n.last_present = d.present;
      out.emplace_back(std::move(n), idx);
    }
    return out;
  }
  std::vector<CutChoice<Cert>> cut_e(const Cert&, std::span<const StoredEntry>) const { return {}; }
};

inline StarHooks star_hooks() { return {}; }

static_assert(Fpc<LmfHooks<NoDeco>>);
static_assert(Fpc<LmfmHooks<GroupDeco>>);
static_assert(Fpc<StarHooks>);

inline CheckResult<LmfRun<NoDeco>> check_lmf(const LmfCert& c, const PolFormula& goal, KernelOptions o = {}) {
  return check(lmf_hooks(), lmf_start(c), goal, o);
}

inline CheckResult<MultiRun<GroupDeco>> check_lmfm(const LmfmCert& c, const PolFormula& goal, KernelOptions o = {}) {
  return check(lmfm_hooks(), lmfm_start(c), goal, o);
}

inline CheckResult<StarRun> check_star(const StarCert& c, const PolFormula& goal, KernelOptions o = {}) {
  return check(star_hooks(), star_start(c), goal, o);
}

}  // namespace modalcert
