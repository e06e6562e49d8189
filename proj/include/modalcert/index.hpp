#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modalcert/errors.hpp"

namespace modalcert {

enum class IndexOp { Root, Left, Right, DiaInd, RelIdx };

/// Address of a subformula occurrence of the goal. Textual form:
/// `root`, `left(I)`, `right(I)`, `diaind(I,J)`, `relidx`.
class Index {
  struct Node {
    IndexOp op;
    std::shared_ptr<const Node> a, b;
  };

 public:
  Index() : Index(root()) {}

  static Index root() {
    static const auto r = std::make_shared<const Node>(Node{IndexOp::Root, {}, {}});
    return Index(r);
  }
  static Index relidx() {
    static const auto r = std::make_shared<const Node>(Node{IndexOp::RelIdx, {}, {}});
    return Index(r);
  }
  static Index left(const Index& i) { return Index(std::make_shared<const Node>(Node{IndexOp::Left, i.p_, {}})); }
  static Index right(const Index& i) { return Index(std::make_shared<const Node>(Node{IndexOp::Right, i.p_, {}})); }
  static Index diaind(const Index& i, const Index& j) {
    return Index(std::make_shared<const Node>(Node{IndexOp::DiaInd, i.p_, j.p_}));
  }

  [[nodiscard]] IndexOp op() const { return p_->op; }
  /// Parent for left/right; the diamond index for diaind.
  [[nodiscard]] Index inner() const { return Index(p_->a); }
  /// The box index of a diaind.
  [[nodiscard]] Index box() const { return Index(p_->b); }

  [[nodiscard]] std::string str() const {
    std::string out;
    write(p_.get(), out);
    return out;
  }

  friend bool operator==(const Index& x, const Index& y) { return compare(x.p_.get(), y.p_.get()) == 0; }
  friend bool operator!=(const Index& x, const Index& y) { return !(x == y); }
  friend bool operator<(const Index& x, const Index& y) { return compare(x.p_.get(), y.p_.get()) < 0; }

 private:
  explicit Index(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

  static int compare(const Node* x, const Node* y) {
    if (x == y) return 0;
    if (x->op != y->op) return x->op < y->op ? -1 : 1;
    if (x->a) {
      if (int c = compare(x->a.get(), y->a.get())) return c;
    }
    if (x->b) return compare(x->b.get(), y->b.get());
    return 0;
  }

  static void write(const Node* n, std::string& out) {
    switch (n->op) {
      case IndexOp::Root: out += "root"; return;
      case IndexOp::RelIdx: out += "relidx"; return;
      case IndexOp::Left: out += "left("; break;
      case IndexOp::Right: out += "right("; break;
      case IndexOp::DiaInd: out += "diaind("; break;
    }
    write(n->a.get(), out);
    if (n->b) {
      out += ',';
      write(n->b.get(), out);
    }
    out += ')';
  }

  std::shared_ptr<const Node> p_;
};

enum class Shape { And, Or, Box };

inline std::vector<Index> child_indices(const Index& i, Shape shape) {
  if (shape == Shape::Box) return {Index::left(i)};
  return {Index::left(i), Index::right(i)};
}

inline Index dia_child(const Index& i, const Index& j) { return Index::diaind(i, j); }

/// Nested sequent address: `zb` or `chld(i,S)` with i >= 1.
class SeqIndex {
  struct Node {
    int pos;
    std::shared_ptr<const Node> parent;
  };

 public:
  SeqIndex() = default;
  static SeqIndex zb() { return {}; }
  static SeqIndex chld(int i, const SeqIndex& parent) {
    if (i < 1) throw InputError("chld position must be >= 1");
    SeqIndex s;
    s.p_ = std::make_shared<const Node>(Node{i, parent.p_});
    return s;
  }

  [[nodiscard]] bool is_zb() const { return p_ == nullptr; }
  [[nodiscard]] int position() const { return p_->pos; }
  [[nodiscard]] SeqIndex parent() const {
    SeqIndex s;
    s.p_ = p_->parent;
    return s;
  }

  [[nodiscard]] std::string str() const {
    if (is_zb()) return "zb";
    return "chld(" + std::to_string(position()) + "," + parent().str() + ")";
  }

  friend bool operator==(const SeqIndex& x, const SeqIndex& y) { return compare(x.p_.get(), y.p_.get()) == 0; }
  friend bool operator<(const SeqIndex& x, const SeqIndex& y) { return compare(x.p_.get(), y.p_.get()) < 0; }

 private:
  static int compare(const Node* x, const Node* y) {
    if (x == y) return 0;
    if (x == nullptr || y == nullptr) return x == nullptr ? -1 : 1;
    if (x->pos != y->pos) return x->pos < y->pos ? -1 : 1;
    return compare(x->parent.get(), y->parent.get());
  }

  std::shared_ptr<const Node> p_;
};

struct NsIndex {
  Index pos;
  SeqIndex seq;

  [[nodiscard]] std::string str() const { return "(" + pos.str() + ", " + seq.str() + ")"; }
  friend bool operator==(const NsIndex& x, const NsIndex& y) { return x.pos == y.pos && x.seq == y.seq; }
  friend bool operator<(const NsIndex& x, const NsIndex& y) {
    if (x.pos != y.pos) return x.pos < y.pos;
    return x.seq < y.seq;
  }
};

/// Bijection between nested-sequent addresses and plain indices.
/// Extension returns a new map and leaves the receiver unchanged.
class IndexMap {
 public:
  [[nodiscard]] const Index& lookup(const NsIndex& n) const {
    auto it = fwd_.find(n);
    if (it == fwd_.end()) throw AdapterError("nested index " + n.str() + " is not mapped");
    return it->second;
  }

  [[nodiscard]] bool contains(const NsIndex& n) const { return fwd_.count(n) > 0; }

  [[nodiscard]] IndexMap extend(const NsIndex& n, const Index& i) const {
    if (fwd_.count(n)) throw AdapterError("nested index " + n.str() + " is already mapped");
    if (bwd_.count(i)) throw AdapterError("index " + i.str() + " is already the image of another nested index");
    IndexMap out = *this;
    out.fwd_.emplace(n, i);
    out.bwd_.emplace(i, n);
    return out;
  }

  [[nodiscard]] std::size_t size() const { return fwd_.size(); }

 private:
  std::map<NsIndex, Index> fwd_;
  std::map<Index, NsIndex> bwd_;
};

inline const Index& map_lookup(const IndexMap& m, const NsIndex& n) { return m.lookup(n); }
inline IndexMap map_extend(const IndexMap& m, const NsIndex& n, const Index& i) { return m.extend(n, i); }

namespace detail {

class IndexParser {
 public:
  explicit IndexParser(std::string_view s) : s_(s) {}

  Index index_only();

  SeqIndex seq_only() {
    SeqIndex s = seq();
    end();
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }

  void ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(std::string_view t) {
    ws();
    if (s_.substr(pos_, t.size()) == t) {
      pos_ += t.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view t) {
    if (!eat(t)) fail("expected '" + std::string(t) + "'");
  }
  void end() {
    ws();
    if (pos_ != s_.size()) fail("trailing input");
  }

  Index index() {
    if (eat("root")) return Index::root();
    if (eat("relidx")) return Index::relidx();
    if (eat("left(")) {
      Index i = index();
      expect(")");
      return Index::left(i);
    }
    if (eat("right(")) {
      Index i = index();
      expect(")");
      return Index::right(i);
    }
    if (eat("diaind(")) {
      Index i = index();
      expect(",");
      Index j = index();
      expect(")");
      return Index::diaind(i, j);
    }
    fail("expected an index");
  }

  SeqIndex seq() {
    if (eat("zb")) return SeqIndex::zb();
    if (eat("chld(")) {
      ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a position");
      if (pos_ - start > 9) fail("position too large");
      int i = std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (i < 1) fail("chld position must be >= 1");
      expect(",");
      SeqIndex parent = seq();
      expect(")");
      return SeqIndex::chld(i, parent);
    }
    fail("expected a sequent index");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// True when `relidx` occurs strictly inside `i`.
inline bool relidx_nested(const Index& i);

inline Index detail::IndexParser::index_only() {
  Index i = index();
  end();
  if (relidx_nested(i)) throw ParseError("relidx cannot occur inside another index", 1);
  return i;
}

inline Index parse_index(std::string_view s) { return detail::IndexParser(s).index_only(); }
inline SeqIndex parse_seq_index(std::string_view s) { return detail::IndexParser(s).seq_only(); }

inline bool relidx_nested(const Index& i) {
  switch (i.op()) {
    case IndexOp::Root:
    case IndexOp::RelIdx: return false;
    case IndexOp::Left:
    case IndexOp::Right: return i.inner().op() == IndexOp::RelIdx || relidx_nested(i.inner());
    case IndexOp::DiaInd:
      return i.inner().op() == IndexOp::RelIdx || i.box().op() == IndexOp::RelIdx || relidx_nested(i.inner()) ||
             relidx_nested(i.box());
  }
  return false;
}

}  // namespace modalcert
