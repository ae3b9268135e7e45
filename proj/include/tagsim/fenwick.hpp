#pragma once

#include <cstdint>
#include <vector>

namespace tagsim {

/// Fenwick (binary indexed) tree over per-id use counts, supporting
/// O(log n) point updates, prefix sums, appends, and weighted selection.
/// This is the cumulative-count structure behind preferential-attachment
/// draws: selecting an id with probability proportional to its count is a
/// single find() on a uniform variate below total().
class CumulativeCounts {
 public:
  CumulativeCounts() = default;

  explicit CumulativeCounts(const std::vector<uint64_t>& counts) {
    for (uint64_t c : counts) push_back(c);
  }

  std::size_t size() const { return size_; }
  uint64_t total() const { return total_; }

  /// Count of a single id.
  uint64_t count(std::size_t i) const {
    return prefix_sum(i + 1) - prefix_sum(i);
  }

  /// Sum of counts for ids [0, n).
  uint64_t prefix_sum(std::size_t n) const {
    uint64_t sum = 0;
    for (std::size_t p = n; p > 0; p -= p & (~p + 1)) sum += tree_[p - 1];
    return sum;
  }

  void add(std::size_t i, uint64_t delta) {
    total_ += delta;
    for (std::size_t p = i + 1; p <= size_; p += p & (~p + 1)) {
      tree_[p - 1] += delta;
    }
  }

  /// Remove mass from an id. Requires delta <= count(i); uses wrapping
  /// arithmetic, so every touched node stays a true nonnegative sum.
  void subtract(std::size_t i, uint64_t delta) { add(i, 0 - delta); }

  /// Append a new id with an initial count. The new tree node covers the
  /// range (p - lowbit(p), p]; seed it from existing prefix sums.
  void push_back(uint64_t initial) {
    const std::size_t p = size_ + 1;
    const std::size_t low = p & (~p + 1);
    const uint64_t range_sum = prefix_sum(size_) - prefix_sum(p - low);
    tree_.push_back(range_sum);
    ++size_;
    total_ += initial;
    if (initial != 0) {
      for (std::size_t q = p; q <= size_; q += q & (~q + 1)) {
        tree_[q - 1] += initial;
      }
    }
  }

  /// Smallest id whose inclusive prefix sum exceeds u. Requires u < total().
  /// Ids with zero count are never returned.
  std::size_t find(uint64_t u) const {
    std::size_t pos = 0;
    std::size_t bit = 1;
    while ((bit << 1) <= size_) bit <<= 1;
    uint64_t rest = u;
    for (; bit != 0; bit >>= 1) {
      const std::size_t next = pos + bit;
      if (next <= size_ && tree_[next - 1] <= rest) {
        rest -= tree_[next - 1];
        pos = next;
      }
    }
    return pos;
  }

 private:
  std::vector<uint64_t> tree_;
  std::size_t size_ = 0;
  uint64_t total_ = 0;
};

}  // namespace tagsim
