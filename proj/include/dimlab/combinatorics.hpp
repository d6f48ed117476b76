#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dimlab {

/// Iterates the r-element subsets of {0, ..., n-1} in lexicographic order.
///
///   for (Combinations c(5, 3); !c.done(); c.next()) use(c.current());
class Combinations {
 public:
  Combinations(std::size_t n, std::size_t r);

  bool done() const noexcept { return done_; }
  const std::vector<std::size_t>& current() const noexcept { return current_; }
  void next();

 private:
  std::size_t n_;
  std::vector<std::size_t> current_;
  bool done_;
};

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace dimlab
