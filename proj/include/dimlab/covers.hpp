#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dimlab/metric_space.hpp"
#include "dimlab/point_set.hpp"

namespace dimlab {

/// Tolerance for comparisons of shrinking ratios against 1/2. Ties count as
/// members of the closed shrinking.
inline constexpr double kHalfTolerance = 1e-12;

/// Indexed finite family of cozero functions on a sample of `point_count()`
/// points. Covering is not enforced on construction because several
/// operations accept arbitrary families; use covers() / require_covering().
class Cover {
 public:
  Cover() = default;
  Cover(std::size_t point_count, std::vector<CozeroFunction> members);

  std::size_t point_count() const noexcept { return point_count_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const CozeroFunction& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<CozeroFunction>& members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  /// Indices of members whose cozero set contains x.
  std::vector<std::size_t> active(std::size_t x) const;
  std::optional<std::size_t> first_uncovered() const;
  bool covers() const { return !first_uncovered().has_value(); }
  /// Throws PreconditionError naming the first uncovered point.
  void require_covering(const char* operation) const;

  PointSet support(std::size_t i) const { return members_[i].support(); }

 private:
  std::size_t point_count_ = 0;
  std::vector<CozeroFunction> members_;
};

/// Cover together with the original index of every kept member.
struct IndexedCover {
  Cover cover;
  std::vector<std::size_t> origin;
};

/// Removes members with empty cozero set.
IndexedCover drop_empty_members(const Cover& c);

/// Keeps one member per inclusion-maximal cozero set (the first of equal
/// ones). The result is a subcover, hence a refinement.
IndexedCover maximal_subcover(const Cover& c);

/// (max_x |{i : u_i(x) > 0}|) - 1. Returns -1 for a family with no point in
/// any member.
int order_of(const Cover& c);

struct RefinementWitness {
  bool refines = false;
  /// witness[j] = least i with cozero(v_j) inside cozero(u_i); valid when refines.
  std::vector<std::size_t> witness;
  /// First member of v lying in no member of u, when !refines.
  std::optional<std::size_t> failing_member;
};

RefinementWitness is_refinement(const Cover& v, const Cover& u);

/// Member-wise containment cozero(v_i) inside cozero(u_i), same size.
bool is_shrinking(const Cover& v, const Cover& u);

struct ShrinkResult {
  Cover open_shrink;              ///< W_i: cozero sets of g'_i
  std::vector<PointSet> closed;   ///< F_i = {g~_i >= 1/2}
  std::vector<CozeroFunction> tilde;  ///< g~_i
};

/// Closed and open shrinking of a covering family via
///   g~_i = g_i / (g_i + max{g'_s, g_t : s < i < t}),  g'_i = max(0, g~_i - 1/2),
/// evaluated pointwise for i ascending. Throws PreconditionError on a
/// non-covering input.
ShrinkResult closed_shrinking(const Cover& c);

/// Union of the cozero sets of all members meeting `s`.
PointSet star(const PointSet& s, const Cover& c);
PointSet star_of_member(std::size_t i, const Cover& c);

struct StarRefinement {
  Cover cover;
  /// witness[m] = l such that the star of member m lies in u_l.
  std::vector<std::size_t> witness;
};

/// Star refinement W ^ (meet over i of {X \ F_i, U_i}) with empty members dropped.
/// Members are ordered by (l, choice vector) where choice bit i selects U_i.
StarRefinement star_refinement(const Cover& c);

/// All pairwise minima min(a_i, b_j), i outer, empty members dropped.
Cover meet(const Cover& a, const Cover& b);

/// For every x, st({x}, v) lies in some member of u.
bool is_point_star_refinement(const Cover& v, const Cover& u);

/// For every member V of v, st(V, v) lies in some member of u.
bool is_star_refinement(const Cover& v, const Cover& u);

}  // namespace dimlab
