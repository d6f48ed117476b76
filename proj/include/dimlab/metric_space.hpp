#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dimlab/point_set.hpp"

namespace dimlab {

inline constexpr double kMetricTolerance = 1e-9;

/// Index of a point of a SampledSpace.
struct PointId {
  std::size_t index;
  friend bool operator==(PointId, PointId) = default;
};

/// Finite sample of a compact metric space. Either ambient coordinates (one
/// row per point) or an explicit distance matrix; in both cases the full
/// distance matrix is materialized on construction.
class SampledSpace {
 public:
  /// Points are the rows of `coordinates`. Throws InputError on duplicate points.
  static SampledSpace from_coordinates(Eigen::MatrixXd coordinates, double mesh);

  /// Validates symmetry, the zero diagonal, positivity off the diagonal and the
  /// triangle inequality, each up to `tolerance`.
  static SampledSpace from_distances(Eigen::MatrixXd distances, double mesh,
                                     double tolerance = kMetricTolerance);

  std::size_t size() const noexcept { return static_cast<std::size_t>(distances_.rows()); }
  double mesh() const noexcept { return mesh_; }
  double distance(std::size_t a, std::size_t b) const { return distances_(a, b); }
  const Eigen::MatrixXd& distances() const noexcept { return distances_; }

  bool has_coordinates() const noexcept { return coordinates_.has_value(); }
  /// Throws InputError when the space was given by distances only.
  const Eigen::MatrixXd& coordinates() const;
  Eigen::VectorXd point(std::size_t x) const;

  double diameter() const noexcept { return diameter_; }

  /// Throws InputError when `x` is not a point of the sample.
  void check_point(std::size_t x) const;

 private:
  SampledSpace(Eigen::MatrixXd distances, std::optional<Eigen::MatrixXd> coordinates, double mesh);

  Eigen::MatrixXd distances_;
  std::optional<Eigen::MatrixXd> coordinates_;
  double mesh_;
  double diameter_;
};

/// A ball is centred either at a sample point or at an ambient vector.
using Center = std::variant<PointId, Eigen::VectorXd>;

/// Open ball B(center; radius). Its formal closure is the closed ball with the
/// same center and radius.
struct Ball {
  Center center;
  double radius;

  Ball(Center c, double r);
  Ball(PointId c, double r) : Ball(Center{c}, r) {}
  Ball(Eigen::VectorXd c, double r) : Ball(Center{std::move(c)}, r) {}
};

/// Distance from sample point `x` to a ball center.
double distance_to_center(const SampledSpace& space, std::size_t x, const Center& c);
/// Distance between two centers; sample-point centers use the space's metric.
double center_distance(const SampledSpace& space, const Center& a, const Center& b);

/// Nonnegative function on the sample, values in [0,1]. Represents the open set
/// where it is strictly positive.
class CozeroFunction {
 public:
  CozeroFunction() = default;
  /// Throws InputError unless every value lies in [0,1].
  explicit CozeroFunction(std::vector<double> values);

  static CozeroFunction zero(std::size_t n) { return CozeroFunction(std::vector<double>(n, 0.0)); }
  static CozeroFunction constant(std::size_t n, double v) {
    return CozeroFunction(std::vector<double>(n, v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t x) const { return values_[x]; }
  bool positive(std::size_t x) const { return values_[x] > 0.0; }
  std::span<const double> values() const noexcept { return values_; }

  PointSet support() const;
  bool empty() const;

  friend bool operator==(const CozeroFunction&, const CozeroFunction&) = default;

 private:
  std::vector<double> values_;
};

/// Pointwise min / max; cozero sets intersect / unite.
CozeroFunction pointwise_min(const CozeroFunction& a, const CozeroFunction& b);
CozeroFunction pointwise_max(const CozeroFunction& a, const CozeroFunction& b);

/// u(x) = clamp((r - d(x,c)) / r): positive exactly inside the open ball.
CozeroFunction ball_cozero(const SampledSpace& space, const Ball& b);

/// u(x) = clamp(d(x,c) - r): positive exactly outside the formal closure.
CozeroFunction complement_cozero(const SampledSpace& space, const Ball& b);

/// d(c1,c2) <= r2 - r1.
bool formally_included(const SampledSpace& space, const Ball& inner, const Ball& outer);
/// d(c1,c2) < r2 - r1; implies the closed inner ball lies in the open outer one.
bool strictly_included(const SampledSpace& space, const Ball& inner, const Ball& outer);
/// Versions for balls with ambient-vector centers only.
bool formally_included(const Ball& inner, const Ball& outer);
bool strictly_included(const Ball& inner, const Ball& outer);

/// Balls centred at every sample point with radii 2^-k * diameter for
/// 0 <= k <= radii_depth, ordered by (k, point index). A one-point space uses
/// the mesh as base radius.
std::vector<Ball> enumerate_balls(const SampledSpace& space, std::size_t radii_depth);

/// Index pair <inner, outer> into a ball list with inner strictly included in outer.
struct BallPair {
  std::size_t inner;
  std::size_t outer;
  friend bool operator==(BallPair, BallPair) = default;
};

/// All strictly included pairs: outer ball in list order, then inner ball in
/// list order.
std::vector<BallPair> strict_inclusion_pairs(const SampledSpace& space, std::span<const Ball> balls);

}  // namespace dimlab
