#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modalcert/cli.hpp"
#include "modalcert/modalcert.hpp"

namespace testsupport {

using namespace modalcert;

inline std::string fixture_path(const std::string& name) { return std::string(MODALCERT_FIXTURE_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline EvidenceFile load_fixture(const std::string& name) { return parse_evidence(read_file(fixture_path(name))); }

inline ModalFormula axiom_k() { return parse_formula("<>(p & ~q) | <>~p | []q"); }

struct CliRun {
  int code;
  std::string out, err;
};

inline CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

/// Every formula over the atom `p` with exactly `k` connectives.
inline std::vector<ModalFormula> formulas_with(int k) {
  static std::vector<std::vector<ModalFormula>> memo;
  if (memo.empty()) memo.push_back({ModalFormula::atom("p"), ModalFormula::natom("p")});
  while (static_cast<int>(memo.size()) <= k) {
    int n = static_cast<int>(memo.size());
    std::vector<ModalFormula> level;
    for (const auto& a : memo[n - 1]) {
      level.push_back(ModalFormula::box(a));
      level.push_back(ModalFormula::dia(a));
    }
    for (int i = 0; i <= n - 1; ++i) {
      for (const auto& l : memo[i]) {
        for (const auto& r : memo[n - 1 - i]) {
          level.push_back(ModalFormula::conj(l, r));
          level.push_back(ModalFormula::disj(l, r));
        }
      }
    }
    memo.push_back(std::move(level));
  }
  return memo[k];
}

inline std::vector<ModalFormula> formulas_up_to(int k) {
  std::vector<ModalFormula> all;
  for (int i = 0; i <= k; ++i) {
    auto lvl = formulas_with(i);
    all.insert(all.end(), lvl.begin(), lvl.end());
  }
  return all;
}

inline int formula_size(const ModalFormula& a) { return connective_count(a) + 1; }

/// Random NNF formula with at most `budget` connectives over `atoms`.
inline ModalFormula random_formula(std::mt19937& rng, int budget, const std::vector<std::string>& atoms = {"p", "q", "r"}) {
  std::uniform_int_distribution<int> pick_atom(0, static_cast<int>(atoms.size()) - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  auto leaf = [&] {
    const std::string& a = atoms[pick_atom(rng)];
    return coin(rng) ? ModalFormula::atom(a) : ModalFormula::natom(a);
  };
  if (budget <= 0) return leaf();
  std::uniform_int_distribution<int> op(0, 4);
  switch (op(rng)) {
    case 0: return leaf();
    case 1: return ModalFormula::box(random_formula(rng, budget - 1, atoms));
    case 2: return ModalFormula::dia(random_formula(rng, budget - 1, atoms));
    default: {
      std::uniform_int_distribution<int> split(0, budget - 1);
      int l = split(rng);
      auto a = random_formula(rng, l, atoms);
      auto b = random_formula(rng, budget - 1 - l, atoms);
      return op(rng) % 2 ? ModalFormula::conj(a, b) : ModalFormula::disj(a, b);
    }
  }
}

/// Calls `f` on every Kripke model over 1..max_worlds worlds and the given
/// atoms; stops early when `f` returns false.
inline void for_each_model(int max_worlds, const std::vector<std::string>& atoms,
                           const std::function<bool(const KripkeModel&)>& f) {
  for (int n = 1; n <= max_worlds; ++n) {
    const int edges = n * n;
    const int bits = n * static_cast<int>(atoms.size());
    for (std::uint32_t r = 0; r < (1u << edges); ++r) {
      for (std::uint32_t v = 0; v < (1u << bits); ++v) {
        KripkeModel m;
        for (int w = 0; w < n; ++w) m.worlds.insert(w);
        for (int e = 0; e < edges; ++e) {
          if (r >> e & 1u) m.rel.insert({e / n, e % n});
        }
        for (int b = 0; b < bits; ++b) {
          if (v >> b & 1u) m.val[b / static_cast<int>(atoms.size())].insert(atoms[b % atoms.size()]);
        }
        if (!f(m)) return;
      }
    }
  }
}

/// True when some model with at most `max_worlds` worlds falsifies `a`.
inline bool small_countermodel_exists(const ModalFormula& a, int max_worlds) {
  std::set<std::string> names;
  collect_atoms(a, names);
  std::vector<std::string> atoms(names.begin(), names.end());
  bool found = false;
  for_each_model(max_worlds, atoms, [&](const KripkeModel& m) {
    for (WorldId w : m.worlds) {
      if (!eval(m, w, a)) {
        found = true;
        return false;
      }
    }
    return true;
  });
  return found;
}

inline int count(const ProofTrace& t, EventKind k) {
  int n = 0;
  for (const auto& e : t) n += e.kind == k;
  return n;
}

inline std::vector<std::string> lines(const ProofTrace& t) {
  std::vector<std::string> out;
  for (const auto& e : t) out.push_back(e.str());
  return out;
}

/// Recursive-descent reading of a trace as alternating phases. Returns
/// false when an event shows up in the wrong phase or the trace has
/// leftovers.
class PhaseReader {
 public:
  explicit PhaseReader(const ProofTrace& t) : t_(t) {}

  bool ok() { return async() && at_ == t_.size(); }

 private:
  bool async() {
    while (at_ < t_.size()) {
      switch (t_[at_++].kind) {
        case EventKind::Store:
        case EventKind::All:
        case EventKind::OrNeg:
        case EventKind::FalseNeg: continue;
        case EventKind::AndNeg:
        case EventKind::Cut: return async() && async();
        case EventKind::Decide: return sync();
        default: return false;
      }
    }
    return false;
  }

  bool sync() {
    if (at_ >= t_.size()) return false;
    switch (t_[at_++].kind) {
      case EventKind::AndPos: return sync() && sync();
      case EventKind::OrPos:
      case EventKind::Some: return sync();
      case EventKind::TruePos:
      case EventKind::Init: return true;
      case EventKind::Release: return async();
      default: return false;
    }
  }

  const ProofTrace& t_;
  std::size_t at_ = 0;
};

/// Forwards to another FPC and records what the kernel showed it, so tests
/// can audit stores, decides and inits after the run.
template <class H>
struct Spy {
  using Cert = typename H::Cert;
  struct Log {
    std::vector<PolFormula> stored;
    std::vector<std::pair<PolFormula, std::vector<StoredEntry>>> init_sites;
    std::vector<std::vector<StoredEntry>> decide_sites;
  };
  H inner;
  std::shared_ptr<Log> log = std::make_shared<Log>();

  auto andNeg_c(const Cert& c, const Site& s) const { return inner.andNeg_c(c, s); }
  auto orNeg_c(const Cert& c, const Site& s) const { return inner.orNeg_c(c, s); }
  auto false_c(const Cert& c, const Site& s) const { return inner.false_c(c, s); }
  auto all_c(const Cert& c, const Site& s, WorldId w) const { return inner.all_c(c, s, w); }
  auto store_c(const Cert& c, const Site& s) const {
    log->stored.push_back(s.formula);
    return inner.store_c(c, s);
  }
  auto andPos_e(const Cert& c, const Site& s) const { return inner.andPos_e(c, s); }
  auto orPos_e(const Cert& c, const Site& s) const { return inner.orPos_e(c, s); }
  auto true_e(const Cert& c, const Site& s) const { return inner.true_e(c, s); }
  auto some_e(const Cert& c, const Site& s) const { return inner.some_e(c, s); }
  auto init_e(const Cert& c, const Site& s) const {
    log->init_sites.push_back({s.formula, {s.storage.begin(), s.storage.end()}});
    return inner.init_e(c, s);
  }
  auto release_e(const Cert& c, const Site& s) const { return inner.release_e(c, s); }
  auto decide_e(const Cert& c, std::span<const StoredEntry> st) const {
    log->decide_sites.push_back({st.begin(), st.end()});
    return inner.decide_e(c, st);
  }
  auto cut_e(const Cert& c, std::span<const StoredEntry> st) const { return inner.cut_e(c, st); }
};

}  // namespace testsupport
