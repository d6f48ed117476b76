#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <vector>

#include "dimlab/covers.hpp"
#include "dimlab/metric_space.hpp"
#include "dimlab/point_set.hpp"

namespace dimlab {

/// Pairs (A_i, B_i) of disjoint subsets of the sample.
class DisjointPairFamily {
 public:
  struct Pair {
    PointSet a;
    PointSet b;
  };

  DisjointPairFamily() = default;
  /// Throws InputError if some A_i meets B_i or the universes disagree.
  explicit DisjointPairFamily(std::vector<Pair> pairs);

  std::size_t size() const noexcept { return pairs_.size(); }
  const Pair& operator[](std::size_t i) const { return pairs_[i]; }
  std::size_t point_count() const noexcept { return pairs_.empty() ? 0 : pairs_[0].a.universe(); }

 private:
  std::vector<Pair> pairs_;
};

/// Disjoint open pairs (U_i, V_i) with A_i in U_i, B_i in V_i, jointly covering.
struct InessentialWitness {
  struct Pair {
    CozeroFunction u;
    CozeroFunction v;
  };
  std::vector<Pair> pairs;
};

/// Empty optional when the witness invariants hold for `pairs`; otherwise a
/// description of the first violation.
std::optional<std::string> witness_violation(const InessentialWitness& w,
                                             const DisjointPairFamily& pairs);

/// U_i = {g_i < 1/2}, V_i = {g_i > 1/2} for a map g into the boundary of the
/// (n+1)-cube (rows = sample points). Validates boundary membership and the
/// pair constraints g_i = 0 on A_i, g_i = 1 on B_i.
InessentialWitness inessential_witness_from_map(const Eigen::MatrixXd& g,
                                                const DisjointPairFamily& pairs,
                                                double tolerance = kMetricTolerance);

/// Nearest-set separation: U_i = {d(x,A_i) < d(x,B_i)}, V_i = {d(x,A_i) > d(x,B_i)};
/// ties (within `tolerance`) go to U_i with value `tolerance`.
InessentialWitness separator_oracle(const SampledSpace& space, const DisjointPairFamily& pairs,
                                    double tolerance = kMetricTolerance);

using SeparationOracle = std::function<InessentialWitness(const DisjointPairFamily&)>;

SeparationOracle make_separator_oracle(const SampledSpace& space,
                                       double tolerance = kMetricTolerance);

/// Oracle backed by a base map into the boundary of the (n+1)-cube. For each
/// request the map is overridden with 0 on A_i and 1 on B_i in coordinate i;
/// on a finite sample this is a continuous extension of the prescribed values.
SeparationOracle make_map_oracle(Eigen::MatrixXd base_map, double tolerance = kMetricTolerance);

/// Shrinks a covering family of n+2 members to a covering shrinking with
/// empty common intersection. Throws InputError for fewer than two members and
/// OracleError when the oracle's witness is invalid.
Cover shrink_to_empty_intersection(const Cover& c, const SeparationOracle& oracle);

/// Called after each iteration e of reduce_order with D_e and the cover U^e.
using ReductionObserver =
    std::function<void(std::size_t e, const std::vector<std::size_t>& subset, const Cover& cover)>;

/// Order reduction: for every (n+2)-subset D_e in lexicographic order, shrink
/// the members indexed by D_e to empty intersection (the rest of the cover
/// folded into the last one so that the result still covers), then take the
/// open part of a closed shrinking of the whole cover. The result is a
/// covering shrinking of `c` with order at most n.
Cover reduce_order(const Cover& c, int n, const SeparationOracle& oracle,
                   const ReductionObserver& observer = {});

}  // namespace dimlab
