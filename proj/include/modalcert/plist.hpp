#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace modalcert {

/// Immutable singly linked list with structural sharing. Pushing returns a
/// new list and leaves the original untouched, so branches of a proof
/// search can extend a common prefix independently.
template <class T>
class PList {
  struct Cell {
    T value;
    std::shared_ptr<const Cell> next;
  };

 public:
  PList() = default;

  [[nodiscard]] PList push(T value) const {
    PList out;
    out.head_ = std::make_shared<const Cell>(Cell{std::move(value), head_});
    out.size_ = size_ + 1;
    return out;
  }

  [[nodiscard]] bool empty() const { return head_ == nullptr; }
  [[nodiscard]] std::size_t size() const { return size_; }

  /// Newest element first.
  template <class Pred>
  [[nodiscard]] const T* find_if(Pred pred) const {
    for (const Cell* c = head_.get(); c != nullptr; c = c->next.get()) {
      if (pred(c->value)) return &c->value;
    }
    return nullptr;
  }

  /// Oldest element first.
  [[nodiscard]] std::vector<T> to_vector() const {
    std::vector<T> out;
    out.reserve(size_);
    for (const Cell* c = head_.get(); c != nullptr; c = c->next.get()) {
      out.push_back(c->value);
    }
    return {out.rbegin(), out.rend()};
  }

 private:
  std::shared_ptr<const Cell> head_;
  std::size_t size_ = 0;
};

}  // namespace modalcert
