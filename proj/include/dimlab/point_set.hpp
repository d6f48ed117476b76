#pragma once

#include <cstddef>
#include <vector>

namespace dimlab {

/// Subset of the sample {0, ..., universe-1}.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t universe, bool full = false) : bits_(universe, full) {}

  static PointSet from_indices(std::size_t universe, const std::vector<std::size_t>& indices);

  std::size_t universe() const noexcept { return bits_.size(); }
  bool contains(std::size_t x) const { return bits_[x]; }
  void insert(std::size_t x) { bits_[x] = true; }
  void erase(std::size_t x) { bits_[x] = false; }

  std::size_t count() const;
  bool empty() const;
  std::vector<std::size_t> indices() const;

  bool is_subset_of(const PointSet& other) const;
  bool intersects(const PointSet& other) const;

  PointSet& operator|=(const PointSet& other);
  PointSet& operator&=(const PointSet& other);
  PointSet complement() const;

  friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }
  friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<bool> bits_;
};

}  // namespace dimlab
