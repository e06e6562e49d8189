#pragma once

#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modalcert/errors.hpp"
#include "modalcert/modal.hpp"

namespace modalcert {

inline constexpr long kDefaultOracleLimit = 1'000'000;

/// Reads a positive integer from the environment, or returns `fallback`
/// when the variable is unset. Malformed values are input errors.
inline long limit_from_env(const char* var, long fallback) {
  const char* raw = std::getenv(var);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v <= 0) throw InputError(std::string(var) + " must be a positive integer");
  return v;
}

struct Countermodel {
  KripkeModel model;
  WorldId world = 0;
};

struct ValidityResult {
  std::optional<Countermodel> countermodel;
  long visited = 0;
  [[nodiscard]] bool valid() const { return !countermodel.has_value(); }
};

namespace detail {

struct TreeModel {
  std::set<std::string> atoms;
  std::vector<TreeModel> kids;
};

// Builds a tree model satisfying every formula handed to it, within a depth
// and branching bound. Diamonds are distributed over at most `branching`
// children; each child also receives every box body.
class TreeSearch {
 public:
  TreeSearch(long limit, int branching) : limit_(limit), branching_(branching) {}

  std::optional<TreeModel> satisfy(std::vector<ModalFormula> todo, int depth) {
    return expand(std::move(todo), 0, {}, {}, {}, depth);
  }

  [[nodiscard]] long visited() const { return visited_; }

 private:
  using Lits = std::set<std::pair<std::string, bool>>;

  void tick() {
    if (++visited_ > limit_) throw LimitError("oracle search exceeded " + std::to_string(limit_) + " nodes");
  }

  std::optional<TreeModel> expand(std::vector<ModalFormula> todo, std::size_t at, Lits lits,
                                  std::vector<ModalFormula> boxes, std::vector<ModalFormula> dias, int depth) {
    tick();
    while (at < todo.size()) {
      ModalFormula f = todo[at++];
      switch (f.op()) {
        case ModalOp::Atom:
        case ModalOp::NAtom: {
          bool positive = f.op() == ModalOp::Atom;
          if (lits.count({f.name(), !positive})) return std::nullopt;
          lits.insert({f.name(), positive});
          break;
        }
        case ModalOp::And:
          todo.push_back(f.left());
          todo.push_back(f.right());
          break;
        case ModalOp::Or: {
          for (const ModalFormula& pick : {f.left(), f.right()}) {
            std::vector<ModalFormula> next(todo.begin() + static_cast<long>(at), todo.end());
            next.push_back(pick);
            if (auto m = expand(std::move(next), 0, lits, boxes, dias, depth)) return m;
          }
          return std::nullopt;
        }
        case ModalOp::Box: boxes.push_back(f.body()); break;
        case ModalOp::Dia: dias.push_back(f.body()); break;
      }
    }
    TreeModel here;
    for (const auto& [name, positive] : lits) {
      if (positive) here.atoms.insert(name);
    }
    if (dias.empty()) return here;
    if (depth == 0 || branching_ == 0) return std::nullopt;
    std::vector<int> block(dias.size(), 0);
    if (auto kids = assign(dias, boxes, block, 0, 0, depth - 1)) {
      here.kids = std::move(*kids);
      return here;
    }
    return std::nullopt;
  }

  // Enumerates partitions of the diamonds into at most `branching_` blocks
  // as restricted growth strings, in lexicographic order.
  std::optional<std::vector<TreeModel>> assign(const std::vector<ModalFormula>& dias,
                                               const std::vector<ModalFormula>& boxes, std::vector<int>& block,
                                               std::size_t i, int used, int depth) {
    if (i == dias.size()) {
      std::vector<TreeModel> kids;
      for (int b = 0; b < used; ++b) {
        std::vector<ModalFormula> todo;
        for (std::size_t k = 0; k < dias.size(); ++k) {
          if (block[k] == b) todo.push_back(dias[k]);
        }
        todo.insert(todo.end(), boxes.begin(), boxes.end());
        auto kid = expand(std::move(todo), 0, {}, {}, {}, depth);
        if (!kid) return std::nullopt;
        kids.push_back(std::move(*kid));
      }
      return kids;
    }
    int top = std::min(used + 1, branching_);
    for (int b = 0; b < top; ++b) {
      block[i] = b;
      if (auto kids = assign(dias, boxes, block, i + 1, std::max(used, b + 1), depth)) return kids;
    }
    return std::nullopt;
  }

  long limit_;
  int branching_;
  long visited_ = 0;
};

inline WorldId flatten(const TreeModel& t, KripkeModel& m, WorldId& next_id) {
  WorldId me = next_id++;
  m.worlds.insert(me);
  if (!t.atoms.empty()) m.val[me] = t.atoms;
  for (const TreeModel& k : t.kids) {
    WorldId kid = flatten(k, m, next_id);
    m.rel.insert({me, kid});
  }
  return me;
}

}  // namespace detail

/// Decides validity in K by searching tree-shaped countermodels of
/// increasing depth, then increasing branching. The returned countermodel
/// is deterministic for a given formula.
inline ValidityResult decide_validity(const ModalFormula& a, long limit = kDefaultOracleLimit) {
  ModalFormula neg = negate_nnf(a);
  int max_depth = modal_depth(neg);
  int max_branch = dia_count(neg);
  long visited = 0;
  for (int d = 0; d <= max_depth; ++d) {
    for (int b = 0; b <= max_branch; ++b) {
      detail::TreeSearch search(limit - visited, b);
      auto tree = search.satisfy({neg}, d);
      visited += search.visited();
      if (tree) {
        Countermodel cm;
        WorldId next_id = 0;
        cm.world = detail::flatten(*tree, cm.model, next_id);
        if (eval(cm.model, cm.world, a)) throw std::logic_error("oracle produced a model satisfying the formula");
        return {std::move(cm), visited};
      }
    }
  }
  return {std::nullopt, visited};
}

}  // namespace modalcert
