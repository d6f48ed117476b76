#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dimlab/covers.hpp"
#include "dimlab/dimension.hpp"
#include "dimlab/geometry.hpp"
#include "dimlab/metric_space.hpp"

namespace dimlab {

/// Values of a map sample -> I^d, one row per sample point.
using ImageMap = Eigen::MatrixXd;

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(Rational, Rational) = default;
};

/// {x in I^(2n+1) : x_{coords[i]} = values[i] for all i}, n+1 fixed coordinates.
struct Hyperplane {
  std::size_t ambient_dim = 0;
  std::vector<std::size_t> coords;  // sorted, distinct
  std::vector<Rational> values;

  /// The affine flat carrying the hyperplane (free coordinates unrestricted).
  AffineFlat flat() const;
  /// Intrinsic coordinates for perturbations that stay on the hyperplane.
  AffineConstraint constraint() const;
  double distance(const Eigen::VectorXd& p) const;
  /// max_i |p_{coords[i]} - values[i]|.
  double max_violation(const Eigen::VectorXd& p) const;

  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

/// First `count` hyperplanes of I^(2n+1), ordered by (max denominator,
/// coordinate-set rank, value rank). Rationals of [0,1] are ranked by
/// (denominator, numerator): 0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, ...
std::vector<Hyperplane> enumerate_hyperplanes(int n, std::size_t count);

struct KappaResult {
  ImageMap images;
  /// Per point, (member index, barycentric weight) for the active members.
  std::vector<std::vector<std::pair<std::size_t, double>>> weights;
};

/// kappa(x) = sum_i u_i(x) z_i / sum_j u_j(x), computed as sum_i lambda_i(x) z_i.
/// Throws PreconditionError naming a point where every member vanishes.
KappaResult kappa_map(const Cover& cozeros, std::span<const Eigen::VectorXd> vertices);

std::vector<std::size_t> active_indices(const Cover& cozeros, std::size_t x);

/// Min distance between affine hulls Z_D, Z_E over index-disjoint D, E with
/// 1 <= |D|,|E| <= n+1; +inf when there is no such pair. Throws
/// GeneralPositionError when two hulls that general position keeps apart
/// come within `tolerance`.
double eta(std::span<const Eigen::VectorXd> vertices, int n, double tolerance = kRankTolerance);

/// Min distance between Z_D and the hyperplane over 1 <= |D| <= n+1.
double eta_prime(std::span<const Eigen::VectorXd> vertices, const Hyperplane& plane, int n,
                 double tolerance = kRankTolerance);

/// Affine normalization of the ambient coordinates into I^dim, padded with
/// 1/2; classical multidimensional scaling when coordinates are missing or
/// have more than `dim` components.
ImageMap initial_map(const SampledSpace& space, std::size_t dim);

/// Cover {V_outer, X \ closure(V_inner)} of a strictly included ball pair.
Cover pair_cover(const SampledSpace& space, std::span<const Ball> balls, BallPair pair);

/// Uniform grid of spacing delta / sqrt(dim) in I^dim; ball B(g; delta) of
/// every grid point g covers the cube.
struct DeltaGrid {
  std::size_t dim;
  double delta;
  double spacing;
  std::int64_t last;  // grid indices run over 0..last

  DeltaGrid(std::size_t dim, double delta);
  Eigen::VectorXd center(const std::vector<std::int64_t>& key) const;
  /// Grid keys whose ball B(center; delta) contains y, lexicographic order.
  std::vector<std::vector<std::int64_t>> keys_near(const Eigen::VectorXd& y) const;
};

/// Preimages f^-1[B(g; delta)] of the grid balls, one member per distinct
/// nonempty preimage (the first grid point in key order), with cozero
/// function max(0, (delta - d(f(x), g)) / delta).
Cover grid_preimage_cover(const ImageMap& f, double delta);

struct EmbedOptions {
  std::size_t radii_depth = 4;
  double rank_tolerance = kRankTolerance;
  int retry_budget = 64;
  /// Replace the grid cover and star refinement by their maximal subcovers.
  /// Smaller covers, but more sample points end up in a single member and
  /// share an image.
  bool prune_subcovers = false;
};

/// Stage-t input: f_t and delta_t.
struct StageState {
  std::size_t t = 0;
  ImageMap f;
  double delta = 0.25;
};

/// Everything computed at stage t.
struct StageRecord {
  std::size_t t = 0;
  ImageMap f_before;
  double delta = 0.0;
  BallPair pair{};
  Hyperplane plane;
  Cover cover_u;
  std::vector<std::size_t> chosen_points;
  std::vector<Eigen::VectorXd> vertices;
  std::vector<Eigen::VectorXd> anchors;
  double eta = 0.0;
  double eta_prime = 0.0;
  ImageMap f_after;
  double delta_next = 0.0;
  double contraction = 0.0;  // max_x d(f_t(x), kappa(x))
};

struct StageContext {
  const SampledSpace& space;
  std::span<const Ball> balls;
  int n;
  const SeparationOracle& oracle;
  std::uint64_t seed;
  EmbedOptions options;
};

/// One stage: V_t and W_t, order reduction, star refinement, vertex choice,
/// general position, kappa-map, eta/eta', next delta. Throws CertificateError
/// naming the claim when a stage certificate fails.
StageRecord embedding_stage(const StageState& state, BallPair pair, const Hyperplane& plane,
                            const StageContext& ctx);

inline StageState next_state(const StageRecord& r) { return {r.t + 1, r.f_after, r.delta_next}; }

struct AvoidedHyperplane {
  Hyperplane plane;
  double min_distance = 0.0;  // min_x d(f(x), L_t)
  double margin = 0.0;        // min_distance - eta'_t / 2
};

struct EmbeddingResult {
  int n = 0;
  std::uint64_t seed = 0;
  std::size_t radii_depth = 0;
  ImageMap f;
  std::vector<StageRecord> stages;
  std::vector<AvoidedHyperplane> avoided;
  double injectivity_margin = 0.0;
  std::pair<std::size_t, std::size_t> closest_pair{0, 0};
};

/// Ball list and strictly included pairs with at least `stages` pairs,
/// deepening the radii past `radii_depth` when needed.
struct BallSchedule {
  std::size_t radii_depth;
  std::vector<Ball> balls;
  std::vector<BallPair> pairs;
};
BallSchedule ball_schedule(const SampledSpace& space, std::size_t radii_depth, std::size_t stages);

/// Runs `stages` stages from f_0 = initial_map and delta_0 = 1/4.
EmbeddingResult nobeling_embed(const SampledSpace& space, int n, std::size_t stages,
                               const SeparationOracle& oracle, std::uint64_t seed,
                               const EmbedOptions& options = {});

/// Smallest pairwise distance of the rows of f (+inf for one row) and the pair.
std::pair<double, std::pair<std::size_t, std::size_t>> injectivity_margin(const ImageMap& f);

}  // namespace dimlab
