#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace esdmesh {

/// Per-lane FIFO queues served in fair round-robin order.
///
/// Each service round takes one item from every non-empty lane in ascending
/// key order. The position after the last served lane is remembered, so a
/// later serve() call resumes the rotation where the previous one stopped.
template <typename Key, typename T>
class FairQueueSet {
 public:
  explicit FairQueueSet(std::size_t lane_capacity) : capacity_(lane_capacity) {}

  /// False (item not queued) when the lane is full.
  bool enqueue(const Key& lane, T item) {
    auto& q = lanes_[lane];
    if (q.size() >= capacity_) return false;
    q.push_back(std::move(item));
    ++size_;
    return true;
  }

  /// Dequeues up to `budget` items.
  std::vector<T> serve(std::size_t budget) {
    std::vector<T> out;
    if (size_ == 0 || budget == 0) return out;
    auto it = last_served_ ? lanes_.upper_bound(*last_served_) : lanes_.begin();
    std::size_t idle = 0;  // consecutive empty lanes visited
    while (out.size() < budget && idle < lanes_.size()) {
      if (it == lanes_.end()) it = lanes_.begin();
      if (it->second.empty()) {
        ++idle;
      } else {
        out.push_back(std::move(it->second.front()));
        it->second.pop_front();
        --size_;
        last_served_ = it->first;
        idle = 0;
      }
      ++it;
    }
    return out;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  std::size_t lane_size(const Key& lane) const {
    auto it = lanes_.find(lane);
    return it == lanes_.end() ? 0 : it->second.size();
  }

  std::size_t lane_capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::map<Key, std::deque<T>> lanes_;
  std::optional<Key> last_served_;
  std::size_t size_ = 0;
};

}  // namespace esdmesh
