#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace goose {

// Membership mask over the node indices 0..n-1 of one DecisionGraph.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(int universe) : mask_(universe, 0) {}

  static NodeSet full(int universe) {
    NodeSet s(universe);
    for (auto& b : s.mask_) b = 1;
    s.count_ = universe;
    return s;
  }
  static NodeSet of(int universe, std::initializer_list<int> ids) {
    NodeSet s(universe);
    for (int i : ids) s.insert(i);
    return s;
  }

  int universe() const { return static_cast<int>(mask_.size()); }
  int count() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(int i) const { return mask_[static_cast<size_t>(i)] != 0; }

  void insert(int i) {
    auto& b = mask_.at(static_cast<size_t>(i));
    count_ += b == 0;
    b = 1;
  }
  void erase(int i) {
    auto& b = mask_.at(static_cast<size_t>(i));
    count_ -= b != 0;
    b = 0;
  }
  void clear() {
    for (auto& b : mask_) b = 0;
    count_ = 0;
  }

  NodeSet& operator|=(const NodeSet& o) {
    check_same_universe(o);
    count_ = 0;
    for (size_t i = 0; i < mask_.size(); ++i) {
      mask_[i] = mask_[i] | o.mask_[i];
      count_ += mask_[i];
    }
    return *this;
  }
  NodeSet& operator&=(const NodeSet& o) {
    check_same_universe(o);
    count_ = 0;
    for (size_t i = 0; i < mask_.size(); ++i) {
      mask_[i] = mask_[i] & o.mask_[i];
      count_ += mask_[i];
    }
    return *this;
  }
  NodeSet& operator-=(const NodeSet& o) {
    check_same_universe(o);
    count_ = 0;
    for (size_t i = 0; i < mask_.size(); ++i) {
      mask_[i] = mask_[i] & static_cast<std::uint8_t>(!o.mask_[i]);
      count_ += mask_[i];
    }
    return *this;
  }

  friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
  friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
  friend NodeSet operator-(NodeSet a, const NodeSet& b) { return a -= b; }

  bool operator==(const NodeSet& o) const { return mask_ == o.mask_; }
  bool operator!=(const NodeSet& o) const { return mask_ != o.mask_; }

  bool subset_of(const NodeSet& o) const {
    check_same_universe(o);
    for (size_t i = 0; i < mask_.size(); ++i)
      if (mask_[i] && !o.mask_[i]) return false;
    return true;
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(count_));
    for (int i = 0; i < universe(); ++i)
      if (mask_[static_cast<size_t>(i)]) out.push_back(i);
    return out;
  }

 private:
  void check_same_universe(const NodeSet& o) const {
    if (mask_.size() != o.mask_.size())
      throw std::invalid_argument("NodeSet: universe size mismatch");
  }

  std::vector<std::uint8_t> mask_;
  int count_ = 0;
};

}  // namespace goose
