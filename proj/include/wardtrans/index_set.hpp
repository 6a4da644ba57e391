#ifndef WARDTRANS_INDEX_SET_HPP
#define WARDTRANS_INDEX_SET_HPP

#include <cstdint>
#include <vector>

namespace wardtrans {

/// Set of episode indices with O(1) insert, erase and uniform pick
/// (swap-remove backed by a position table).
class IndexSet {
 public:
  void init(std::size_t n) {
    pos_.assign(n, -1);
    items_.clear();
  }
  void insert(std::int32_t x) {
    pos_[x] = static_cast<std::int32_t>(items_.size());
    items_.push_back(x);
  }
  void erase(std::int32_t x) {
    const auto i = pos_[x];
    items_[i] = items_.back();
    pos_[items_[i]] = i;
    items_.pop_back();
    pos_[x] = -1;
  }
  bool contains(std::int32_t x) const { return pos_[x] >= 0; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::int32_t operator[](std::size_t i) const { return items_[i]; }

 private:
  std::vector<std::int32_t> items_;
  std::vector<std::int32_t> pos_;
};

}  // namespace wardtrans

#endif
