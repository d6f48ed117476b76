#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dimlab {

inline constexpr double kRankTolerance = 1e-9;

/// Affine flat origin + span(directions). Directions need not be independent.
struct AffineFlat {
  Eigen::VectorXd origin;
  Eigen::MatrixXd directions;  // ambient_dim x k

  /// Affine hull of a nonempty point list.
  static AffineFlat hull(std::span<const Eigen::VectorXd> points);
  Eigen::Index ambient_dim() const { return origin.size(); }
};

/// Euclidean distance between two affine flats (least squares over the affine
/// parameters). Zero when they intersect.
double affine_distance(const AffineFlat& a, const AffineFlat& b);
double affine_distance(std::span<const Eigen::VectorXd> a, std::span<const Eigen::VectorXd> b);

/// Smallest singular value of the difference matrix [p_1 - p_0, ..., p_m - p_0];
/// +inf for a single point.
double affine_conditioning(std::span<const Eigen::VectorXd> points);

/// Affine independence: smallest singular value above `tolerance`. More than
/// ambient_dim + 1 points are never independent.
bool affinely_independent(std::span<const Eigen::VectorXd> points, double tolerance = kRankTolerance);

/// First subset of size 2..ambient_dim+1 (by size, then lexicographic) that is
/// affinely dependent; none when the family is in general position.
std::optional<std::vector<std::size_t>> find_degenerate_subset(
    std::span<const Eigen::VectorXd> points, double tolerance = kRankTolerance);

/// Affine subspace origin + span(basis) with orthonormal basis columns.
struct AffineConstraint {
  Eigen::VectorXd origin;
  Eigen::MatrixXd basis;

  /// Affine hull of the given points, basis orthonormalized.
  static AffineConstraint through(std::span<const Eigen::VectorXd> points);

  Eigen::VectorXd project(const Eigen::VectorXd& p) const;
  double distance(const Eigen::VectorXd& p) const { return (p - project(p)).norm(); }
};

struct GeneralPositionOptions {
  double rank_tolerance = kRankTolerance;
  int retry_budget = 64;
  std::uint64_t seed = 0;
  /// Keep outputs inside [0,1]^d by reflecting candidates across its faces.
  bool keep_in_unit_cube = false;
};

/// Perturbs `targets` into general position: every output within `eps` of
/// its target, constrained outputs on their subspaces, and no m+2 outputs in
/// an m-dimensional affine subspace for m <= d-1. Points are placed one at a
/// time with perturbations of magnitude below eps/2; each point gets
/// `retry_budget` draws. Throws GeneralPositionError naming the violating
/// subset when the budget is exhausted.
std::vector<Eigen::VectorXd> general_position(
    std::span<const Eigen::VectorXd> targets, double eps,
    std::span<const std::optional<AffineConstraint>> constraints = {},
    const GeneralPositionOptions& options = {});

}  // namespace dimlab
