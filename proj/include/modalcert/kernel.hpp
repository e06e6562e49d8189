#pragma once

#include <concepts>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modalcert/errors.hpp"
#include "modalcert/index.hpp"
#include "modalcert/oracle.hpp"
#include "modalcert/polarized.hpp"

namespace modalcert {

inline constexpr long kDefaultKernelLimit = 100'000;

struct StoredEntry {
  Index index;
  PolFormula formula;
};

/// What a hook gets to see: the formula under the rule, the index the
/// kernel derived for it, and the current storage (oldest entry first).
struct Site {
  const PolFormula& formula;
  const std::optional<Index>& pending;
  std::span<const StoredEntry> storage;
};

template <class C>
struct CutChoice {
  PolFormula formula;
  Index pos_index;
  Index neg_index;
  C left;
  C right;
};

/// Hands out fresh world constants. Copied along with kernel state, so a
/// backtracked branch gives its names back; a finished branch passes its
/// position on to the next sibling so names stay unique across the trace.
class WorldSupply {
 public:
  WorldSupply() = default;
  explicit WorldSupply(WorldId first) : next_(first) {}
  WorldId fresh() { return next_++; }
  [[nodiscard]] WorldId peek() const { return next_; }

 private:
  WorldId next_ = 0;
};

inline WorldId fresh_world(WorldSupply& s) { return s.fresh(); }

enum class EventKind { Decide, Store, Init, Release, AndNeg, OrNeg, FalseNeg, All, AndPos, OrPos, TruePos, Some, Cut };

struct TraceEvent {
  EventKind kind;
  Index index;
  WorldId world = 0;
  int side = 0;
  std::string cut;

  [[nodiscard]] std::string str() const {
    switch (kind) {
      case EventKind::Decide: return "decide " + index.str();
      case EventKind::Store: return "store " + index.str();
      case EventKind::Init: return "init " + index.str();
      case EventKind::Release: return "release";
      case EventKind::AndNeg: return "andNeg";
      case EventKind::OrNeg: return "orNeg";
      case EventKind::FalseNeg: return "falseNeg";
      case EventKind::All: return "all w" + std::to_string(world);
      case EventKind::AndPos: return "andPos";
      case EventKind::OrPos: return "orPos " + std::to_string(side);
      case EventKind::TruePos: return "truePos";
      case EventKind::Some: return "some w" + std::to_string(world);
      case EventKind::Cut: return "cut " + cut;
    }
    return {};
  }

  friend bool operator==(const TraceEvent& a, const TraceEvent& b) { return a.str() == b.str(); }
};

using ProofTrace = std::vector<TraceEvent>;

inline std::string format_trace(const ProofTrace& t) {
  std::string out;
  for (const TraceEvent& e : t) {
    out += e.str();
    out += '\n';
  }
  return out;
}

template <class C>
struct CheckResult {
  bool accepted = false;
  ProofTrace trace;
  /// Certificate reached at each closed leaf, in trace order.
  std::vector<C> leaves;
  long steps = 0;
};

/// The thirteen clerk and expert callbacks. Each returns the alternatives
/// it is willing to continue with; an empty result blocks the rule.
template <class H>
concept Fpc = requires(const H& h, const typename H::Cert& c, const Site& s, WorldId w) {
  { h.andNeg_c(c, s) } -> std::same_as<std::vector<std::pair<typename H::Cert, typename H::Cert>>>;
  { h.orNeg_c(c, s) } -> std::same_as<std::vector<typename H::Cert>>;
  { h.false_c(c, s) } -> std::same_as<std::vector<typename H::Cert>>;
  { h.all_c(c, s, w) } -> std::same_as<std::vector<typename H::Cert>>;
  { h.store_c(c, s) } -> std::same_as<std::vector<std::pair<typename H::Cert, Index>>>;
  { h.andPos_e(c, s) } -> std::same_as<std::vector<std::pair<typename H::Cert, typename H::Cert>>>;
  { h.orPos_e(c, s) } -> std::same_as<std::vector<std::pair<typename H::Cert, int>>>;
  { h.true_e(c, s) } -> std::same_as<std::vector<typename H::Cert>>;
  { h.some_e(c, s) } -> std::same_as<std::vector<std::pair<typename H::Cert, WorldId>>>;
  { h.init_e(c, s) } -> std::same_as<std::vector<Index>>;
  { h.release_e(c, s) } -> std::same_as<std::vector<typename H::Cert>>;
  { h.decide_e(c, s.storage) } -> std::same_as<std::vector<std::pair<typename H::Cert, Index>>>;
  { h.cut_e(c, s.storage) } -> std::same_as<std::vector<CutChoice<typename H::Cert>>>;
};

struct KernelOptions {
  long max_steps = kDefaultKernelLimit;
};

namespace detail {

struct Pending {
  PolFormula formula;
  std::optional<Index> index;
};

// Children indices for a decomposed connective. Delay units get no index;
// relational atoms share relidx; the body of a diamond witnessed by an
// eigen-world gets diaind with the box that introduced that world.
struct ChildIndices {
  std::optional<Index> left, right;
};

inline ChildIndices split_index(const PolFormula& f, const std::optional<Index>& at,
                                const std::vector<std::pair<WorldId, Index>>& origin) {
  if (!at) return {};
  const PolFormula l = f.left();
  switch (f.op()) {
    case PolOp::AndNeg:
    case PolOp::OrNeg:
      if (l.op() == PolOp::FalseNeg) return {std::nullopt, at};
      if (l.op() == PolOp::NRel) return {Index::relidx(), Index::left(*at)};
      break;
    case PolOp::AndPos:
      if (l.op() == PolOp::TruePos) return {std::nullopt, at};
      if (l.op() == PolOp::Rel) {
        if (!l.dst().is_var) {
          for (const auto& [w, box] : origin) {
            if (w == l.dst().id) return {Index::relidx(), dia_child(*at, box)};
          }
        }
        return {Index::relidx(), Index::left(*at)};
      }
      break;
    default: break;
  }
  return {Index::left(*at), Index::right(*at)};
}

template <class H>
class Kernel {
  using C = typename H::Cert;

 public:
  Kernel(const H& hooks, KernelOptions opts) : h_(hooks), opts_(opts) {}

  struct State {
    std::vector<StoredEntry> storage;
    std::vector<Pending> work;  // front is processed first
    std::vector<std::pair<WorldId, Index>> origin;
    WorldSupply worlds;
  };

  struct Proof {
    ProofTrace trace;
    std::vector<C> leaves;
    WorldId next_world = 0;  // supply position once this subproof is done
  };

  std::optional<Proof> async(State st, const C& cert) {
    tick();
    if (st.work.empty()) return decide(st, cert);
    Pending item = st.work.front();
    st.work.erase(st.work.begin());
    const PolFormula& f = item.formula;
    Site site{f, item.index, st.storage};

    switch (f.op()) {
      case PolOp::AndNeg: {
        auto kids = split_index(f, item.index, st.origin);
        for (const auto& [c1, c2] : h_.andNeg_c(cert, site)) {
          State s1 = st, s2 = st;
          s1.work.insert(s1.work.begin(), {f.left(), kids.left});
          s2.work.insert(s2.work.begin(), {f.right(), kids.right});
          auto p1 = async(std::move(s1), c1);
          if (!p1) continue;
          s2.worlds = WorldSupply(p1->next_world);
          auto p2 = async(std::move(s2), c2);
          if (!p2) continue;
          return join(EventKind::AndNeg, std::move(*p1), std::move(*p2));
        }
        return std::nullopt;
      }
      case PolOp::OrNeg: {
        auto kids = split_index(f, item.index, st.origin);
        for (const C& c : h_.orNeg_c(cert, site)) {
          State s = st;
          s.work.insert(s.work.begin(), {{f.left(), kids.left}, {f.right(), kids.right}});
          if (auto p = async(std::move(s), c)) return prefix(EventKind::OrNeg, std::move(*p));
        }
        return std::nullopt;
      }
      case PolOp::FalseNeg:
        for (const C& c : h_.false_c(cert, site)) {
          if (auto p = async(st, c)) return prefix(EventKind::FalseNeg, std::move(*p));
        }
        return std::nullopt;
      case PolOp::All: {
        State s = st;
        WorldId w = s.worlds.fresh();
        if (item.index) s.origin.emplace_back(w, *item.index);
        PolFormula body = substitute(f.body(), f.name(), WorldTerm::constant(w));
        s.work.insert(s.work.begin(), {body, item.index});
        for (const C& c : h_.all_c(cert, site, w)) {
          if (auto p = async(s, c)) {
            TraceEvent e{EventKind::All, Index::root(), w};
            p->trace.insert(p->trace.begin(), e);
            return p;
          }
        }
        return std::nullopt;
      }
      default: {
        // Store: positive formulas and negative literals.
        if (!(f.positive() || f.is_literal())) return std::nullopt;
        for (const auto& [c, idx] : h_.store_c(cert, site)) {
          if (relidx_nested(idx)) continue;
          State s = st;
          s.storage.push_back({idx, f});
          if (auto p = async(std::move(s), c)) {
            p->trace.insert(p->trace.begin(), TraceEvent{EventKind::Store, idx});
            return p;
          }
        }
        return std::nullopt;
      }
    }
  }

  std::optional<Proof> sync(const State& st, const Pending& focus, const C& cert) {
    tick();
    const PolFormula& f = focus.formula;
    Site site{f, focus.index, st.storage};
    if (!f.positive()) {
      for (const C& c : h_.release_e(cert, site)) {
        State s = st;
        s.work = {focus};
        if (auto p = async(std::move(s), c)) return prefix(EventKind::Release, std::move(*p));
      }
      return std::nullopt;
    }
    switch (f.op()) {
      case PolOp::AndPos: {
        auto kids = split_index(f, focus.index, st.origin);
        for (const auto& [c1, c2] : h_.andPos_e(cert, site)) {
          auto p1 = sync(st, {f.left(), kids.left}, c1);
          if (!p1) continue;
          State st2 = st;
          st2.worlds = WorldSupply(p1->next_world);
          auto p2 = sync(st2, {f.right(), kids.right}, c2);
          if (!p2) continue;
          return join(EventKind::AndPos, std::move(*p1), std::move(*p2));
        }
        return std::nullopt;
      }
      case PolOp::OrPos: {
        auto kids = split_index(f, focus.index, st.origin);
        for (const auto& [c, side] : h_.orPos_e(cert, site)) {
          if (side != 1 && side != 2) continue;
          Pending next = side == 1 ? Pending{f.left(), kids.left} : Pending{f.right(), kids.right};
          if (auto p = sync(st, next, c)) {
            TraceEvent e{EventKind::OrPos, Index::root(), 0, side};
            p->trace.insert(p->trace.begin(), e);
            return p;
          }
        }
        return std::nullopt;
      }
      case PolOp::TruePos:
        for (const C& c : h_.true_e(cert, site)) {
          Proof p;
          p.trace.push_back({EventKind::TruePos, Index::root()});
          p.leaves.push_back(c);
          p.next_world = st.worlds.peek();
          return p;
        }
        return std::nullopt;
      case PolOp::Ex:
        for (const auto& [c, w] : h_.some_e(cert, site)) {
          PolFormula body = substitute(f.body(), f.name(), WorldTerm::constant(w));
          if (auto p = sync(st, {body, focus.index}, c)) {
            TraceEvent e{EventKind::Some, Index::root(), w};
            p->trace.insert(p->trace.begin(), e);
            return p;
          }
        }
        return std::nullopt;
      case PolOp::PAtom:
      case PolOp::Rel: {
        PolFormula want = negate(f);
        for (const Index& idx : h_.init_e(cert, site)) {
          for (const StoredEntry& e : st.storage) {
            if (e.index == idx && e.formula == want) {
              Proof p;
              p.trace.push_back({EventKind::Init, idx});
              p.leaves.push_back(cert);
              p.next_world = st.worlds.peek();
              return p;
            }
          }
        }
        return std::nullopt;
      }
      default: return std::nullopt;
    }
  }

  [[nodiscard]] long steps() const { return steps_; }

 private:
  std::optional<Proof> decide(const State& st, const C& cert) {
    for (const CutChoice<C>& cut : h_.cut_e(cert, st.storage)) {
      State s1 = st, s2 = st;
      s1.work = {{cut.formula, cut.pos_index}};
      s2.work = {{negate(cut.formula), cut.neg_index}};
      auto p1 = async(std::move(s1), cut.left);
      if (!p1) continue;
      s2.worlds = WorldSupply(p1->next_world);
      auto p2 = async(std::move(s2), cut.right);
      if (!p2) continue;
      TraceEvent e{EventKind::Cut, Index::root()};
      e.cut = print_pol(cut.formula);
      Proof out;
      out.trace.push_back(e);
      out.next_world = p2->next_world;
      append(out, std::move(*p1));
      append(out, std::move(*p2));
      return out;
    }
    for (const auto& [c, idx] : h_.decide_e(cert, st.storage)) {
      for (const StoredEntry& e : st.storage) {
        if (!(e.index == idx) || !e.formula.positive()) continue;
        if (auto p = sync(st, {e.formula, idx}, c)) {
          p->trace.insert(p->trace.begin(), TraceEvent{EventKind::Decide, idx});
          return p;
        }
      }
    }
    return std::nullopt;
  }

  void tick() {
    if (++steps_ > opts_.max_steps) {
      throw LimitError("kernel exceeded " + std::to_string(opts_.max_steps) + " rule applications");
    }
  }

  static void append(Proof& into, Proof&& from) {
    into.trace.insert(into.trace.end(), from.trace.begin(), from.trace.end());
    into.leaves.insert(into.leaves.end(), from.leaves.begin(), from.leaves.end());
  }

  static Proof prefix(EventKind k, Proof&& p) {
    p.trace.insert(p.trace.begin(), TraceEvent{k, Index::root()});
    return std::move(p);
  }

  static Proof join(EventKind k, Proof&& a, Proof&& b) {
    Proof out;
    out.trace.push_back({k, Index::root()});
    out.next_world = b.next_world;
    append(out, std::move(a));
    append(out, std::move(b));
    return out;
  }

  const H& h_;
  KernelOptions opts_;
  long steps_ = 0;
};

}  // namespace detail

/// Runs the focused kernel on `goal` starting from workbench [(goal, root)].
/// Throws LimitError when the step budget runs out; a plain rejection is
/// reported through `accepted == false`.
template <Fpc H>
CheckResult<typename H::Cert> check(const H& hooks, const typename H::Cert& cert, const PolFormula& goal,
                                    KernelOptions opts = {}) {
  detail::Kernel<H> k(hooks, opts);
  typename detail::Kernel<H>::State st;
  st.work.push_back({goal, Index::root()});
  st.worlds = WorldSupply(max_world_constant(goal) + 1);
  CheckResult<typename H::Cert> out;
  auto proof = k.async(std::move(st), cert);
  out.steps = k.steps();
  if (proof) {
    out.accepted = true;
    out.trace = std::move(proof->trace);
    out.leaves = std::move(proof->leaves);
  }
  return out;
}

inline long kernel_limit_from_env() { return limit_from_env("MODALCERT_KERNEL_LIMIT", kDefaultKernelLimit); }

}  // namespace modalcert
