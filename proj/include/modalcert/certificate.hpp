#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "modalcert/index.hpp"

namespace modalcert {

struct NoDeco {
  friend bool operator==(const NoDeco&, const NoDeco&) = default;
};

struct GroupDeco {
  int group = 0;
  friend bool operator==(const GroupDeco&, const GroupDeco&) = default;
};

struct StarDeco {
  int group = 0;
  std::vector<Index> present;  // kept sorted and duplicate-free
  std::optional<Index> future;
  friend bool operator==(const StarDeco& a, const StarDeco& b) {
    return a.group == b.group && a.present == b.present && a.future == b.future;
  }
};

/// One decide step of a layer certificate: the index decided on, the
/// optional extra index (box index for diamonds, complement for inits),
/// and the certificates of the following steps.
template <class Deco>
struct ProofNode {
  Index index;
  std::optional<Index> extra;
  Deco deco{};
  std::vector<ProofNode> children;

  friend bool operator==(const ProofNode& a, const ProofNode& b) {
    return a.index == b.index && a.extra == b.extra && a.deco == b.deco && a.children == b.children;
  }
};

using LmfCert = ProofNode<NoDeco>;
using LmfmCert = ProofNode<GroupDeco>;
using StarCert = ProofNode<StarDeco>;

inline std::vector<Index> normalize_present(std::vector<Index> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

template <class Deco, class F>
void preorder(const ProofNode<Deco>& n, F&& f) {
  f(n);
  for (const auto& k : n.children) preorder(k, f);
}

template <class Deco>
std::size_t node_count(const ProofNode<Deco>& n) {
  std::size_t c = 0;
  preorder(n, [&c](const auto&) { ++c; });
  return c;
}

/// Same tree with every decoration rewritten by `f`.
template <class To, class From, class F>
ProofNode<To> redecorate(const ProofNode<From>& n, F&& f) {
  ProofNode<To> out{n.index, n.extra, f(n), {}};
  out.children.reserve(n.children.size());
  for (const auto& k : n.children) out.children.push_back(redecorate<To>(k, f));
  return out;
}

/// Present and future of every node, in pre-order.
struct StarSide {
  std::vector<std::pair<std::vector<Index>, std::optional<Index>>> decorations;
  friend bool operator==(const StarSide&, const StarSide&) = default;
};

inline std::pair<LmfmCert, StarSide> star_to_multifoc(const StarCert& c) {
  StarSide side;
  preorder(c, [&side](const StarCert& n) { side.decorations.emplace_back(n.deco.present, n.deco.future); });
  return {redecorate<GroupDeco>(c, [](const StarCert& n) { return GroupDeco{n.deco.group}; }), side};
}

namespace detail {
inline StarCert rebuild_star(const LmfmCert& n, const StarSide& s, std::size_t& at) {
  StarCert out{n.index, n.extra, {n.deco.group, {}, std::nullopt}, {}};
  if (at < s.decorations.size()) {
    out.deco.present = s.decorations[at].first;
    out.deco.future = s.decorations[at].second;
  }
  ++at;
  for (const auto& k : n.children) out.children.push_back(rebuild_star(k, s, at));
  return out;
}
}  // namespace detail

/// Inverse of star_to_multifoc. Nodes beyond the side state get an empty
/// present and no future.
inline StarCert multifoc_to_star(const LmfmCert& c, const StarSide& s) {
  std::size_t at = 0;
  return detail::rebuild_star(c, s, at);
}

template <class Deco>
LmfCert erase_decorations(const ProofNode<Deco>& c) {
  return redecorate<NoDeco>(c, [](const auto&) { return NoDeco{}; });
}

inline LmfCert erase_groups(const LmfmCert& c) { return erase_decorations(c); }

/// Gives every node its own group, numbered in pre-order from 1.
inline LmfmCert singleton_groups(const LmfCert& c) {
  int next = 1;
  return redecorate<GroupDeco>(c, [&next](const LmfCert&) { return GroupDeco{next++}; });
}

}  // namespace modalcert
