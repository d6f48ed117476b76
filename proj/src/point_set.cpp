#include "dimlab/point_set.hpp"

#include <algorithm>
#include <cassert>

#include "dimlab/combinatorics.hpp"

namespace dimlab {

PointSet PointSet::from_indices(std::size_t universe, const std::vector<std::size_t>& indices) {
  PointSet s(universe);
  for (std::size_t x : indices) s.insert(x);
  return s;
}

std::size_t PointSet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

bool PointSet::empty() const { return std::none_of(bits_.begin(), bits_.end(), [](bool b) { return b; }); }

std::vector<std::size_t> PointSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < bits_.size(); ++x)
    if (bits_[x]) out.push_back(x);
  return out;
}

bool PointSet::is_subset_of(const PointSet& other) const {
  assert(universe() == other.universe());
  for (std::size_t x = 0; x < bits_.size(); ++x)
    if (bits_[x] && !other.bits_[x]) return false;
  return true;
}

bool PointSet::intersects(const PointSet& other) const {
  assert(universe() == other.universe());
  for (std::size_t x = 0; x < bits_.size(); ++x)
    if (bits_[x] && other.bits_[x]) return true;
  return false;
}

PointSet& PointSet::operator|=(const PointSet& other) {
  assert(universe() == other.universe());
  for (std::size_t x = 0; x < bits_.size(); ++x) bits_[x] = bits_[x] || other.bits_[x];
  return *this;
}

PointSet& PointSet::operator&=(const PointSet& other) {
  assert(universe() == other.universe());
  for (std::size_t x = 0; x < bits_.size(); ++x) bits_[x] = bits_[x] && other.bits_[x];
  return *this;
}

PointSet PointSet::complement() const {
  PointSet out(universe());
  for (std::size_t x = 0; x < bits_.size(); ++x) out.bits_[x] = !bits_[x];
  return out;
}

Combinations::Combinations(std::size_t n, std::size_t r) : n_(n), current_(r), done_(r > n) {
  for (std::size_t i = 0; i < r; ++i) current_[i] = i;
}

void Combinations::next() {
  const std::size_t r = current_.size();
  if (done_) return;
  if (r == 0) {
    done_ = true;
    return;
  }
  std::size_t i = r;
  while (i > 0) {
    --i;
    if (current_[i] < n_ - r + i) {
      ++current_[i];
      for (std::size_t j = i + 1; j < r; ++j) current_[j] = current_[j - 1] + 1;
      return;
    }
  }
  done_ = true;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ using Wide = unsigned __int128;
  Wide acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace dimlab
