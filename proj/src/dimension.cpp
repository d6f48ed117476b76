#include "dimlab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dimlab/combinatorics.hpp"
#include "dimlab/error.hpp"

namespace dimlab {

DisjointPairFamily::DisjointPairFamily(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const auto& p = pairs_[i];
    if (p.a.universe() != p.b.universe() || p.a.universe() != pairs_[0].a.universe())
      throw InputError("pair family mixes samples of different sizes");
    if (p.a.intersects(p.b)) throw InputError("pair " + std::to_string(i) + " is not disjoint");
  }
}

std::optional<std::string> witness_violation(const InessentialWitness& w,
                                             const DisjointPairFamily& pairs) {
  if (w.pairs.size() != pairs.size()) return "witness has the wrong number of pairs";
  const std::size_t n = pairs.point_count();
  PointSet covered(n);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& wp = w.pairs[i];
    if (wp.u.size() != n || wp.v.size() != n) return "witness pair " + std::to_string(i) + " has wrong size";
    const PointSet u = wp.u.support();
    const PointSet v = wp.v.support();
    if (u.intersects(v)) return "U_" + std::to_string(i) + " meets V_" + std::to_string(i);
    if (!pairs[i].a.is_subset_of(u)) return "A_" + std::to_string(i) + " not inside U_" + std::to_string(i);
    if (!pairs[i].b.is_subset_of(v)) return "B_" + std::to_string(i) + " not inside V_" + std::to_string(i);
    covered |= u;
    covered |= v;
  }
  for (std::size_t x = 0; x < n; ++x)
    if (!covered.contains(x)) return "point " + std::to_string(x) + " lies in no U_i or V_i";
  return std::nullopt;
}

InessentialWitness inessential_witness_from_map(const Eigen::MatrixXd& g,
                                                const DisjointPairFamily& pairs, double tol) {
  const auto n = static_cast<Eigen::Index>(pairs.point_count());
  const auto k = static_cast<Eigen::Index>(pairs.size());
  if (k == 0) return {};
  if (g.rows() != n || g.cols() != k)
    throw InputError("map has shape " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()) +
                     ", expected " + std::to_string(n) + "x" + std::to_string(k));
  for (Eigen::Index x = 0; x < n; ++x) {
    bool on_boundary = false;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double gi = g(x, i);
      const std::string where = "point " + std::to_string(x) + ", coordinate " + std::to_string(i);
      if (!(gi >= -tol && gi <= 1.0 + tol)) throw InputError("map value outside the cube at " + where);
      if (gi <= tol || gi >= 1.0 - tol) on_boundary = true;
      const auto xi = static_cast<std::size_t>(x);
      const auto& pair = pairs[static_cast<std::size_t>(i)];
      if (pair.a.contains(xi) && std::abs(gi) > tol)
        throw InputError("map is not 0 on A at " + where);
      if (pair.b.contains(xi) && std::abs(gi - 1.0) > tol)
        throw InputError("map is not 1 on B at " + where);
    }
    if (!on_boundary)
      throw InputError("map value of point " + std::to_string(x) + " is not on the cube boundary");
  }
  InessentialWitness w;
  for (Eigen::Index i = 0; i < k; ++i) {
    std::vector<double> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
    for (Eigen::Index x = 0; x < n; ++x) {
      const double gi = std::clamp(g(x, i), 0.0, 1.0);
      u[static_cast<std::size_t>(x)] = std::max(0.0, 0.5 - gi);
      v[static_cast<std::size_t>(x)] = std::max(0.0, gi - 0.5);
    }
    w.pairs.push_back({CozeroFunction(std::move(u)), CozeroFunction(std::move(v))});
  }
  return w;
}

namespace {

double distance_to_set(const SampledSpace& space, std::size_t x, const PointSet& s) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < s.universe(); ++y)
    if (s.contains(y)) best = std::min(best, space.distance(x, y));
  return best;
}

}  // namespace

InessentialWitness separator_oracle(const SampledSpace& space, const DisjointPairFamily& pairs,
                                    double tol) {
  const std::size_t n = space.size();
  if (pairs.size() > 0 && pairs.point_count() != n)
    throw InputError("pair family and space have different sizes");
  InessentialWitness w;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::vector<double> u(n, 0.0), v(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      const double da = distance_to_set(space, x, pairs[i].a);
      const double db = distance_to_set(space, x, pairs[i].b);
      if (std::isinf(da) && std::isinf(db)) {
        u[x] = tol;  // both sets empty: everything is a tie
      } else if (da < db - tol) {
        u[x] = std::min(1.0, db - da);
      } else if (da > db + tol) {
        v[x] = std::min(1.0, da - db);
      } else {
        u[x] = tol;
      }
    }
    w.pairs.push_back({CozeroFunction(std::move(u)), CozeroFunction(std::move(v))});
  }
  return w;
}

SeparationOracle make_separator_oracle(const SampledSpace& space, double tol) {
  return [&space, tol](const DisjointPairFamily& pairs) { return separator_oracle(space, pairs, tol); };
}

SeparationOracle make_map_oracle(Eigen::MatrixXd base_map, double tol) {
  return [base = std::move(base_map), tol](const DisjointPairFamily& pairs) {
    if (static_cast<std::size_t>(base.cols()) != pairs.size() ||
        static_cast<std::size_t>(base.rows()) != pairs.point_count())
      throw OracleError("map oracle has shape " + std::to_string(base.rows()) + "x" +
                        std::to_string(base.cols()) + " but the request needs " +
                        std::to_string(pairs.point_count()) + "x" + std::to_string(pairs.size()));
    Eigen::MatrixXd g = base;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t x = 0; x < pairs.point_count(); ++x) {
        if (pairs[i].a.contains(x)) g(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(i)) = 0.0;
        if (pairs[i].b.contains(x)) g(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(i)) = 1.0;
      }
    try {
      return inessential_witness_from_map(g, pairs, tol);
    } catch (const InputError& e) {
      throw OracleError(std::string("map oracle: ") + e.what());
    }
  };
}

Cover shrink_to_empty_intersection(const Cover& c, const SeparationOracle& oracle) {
  if (c.size() < 2) throw InputError("shrink_to_empty_intersection needs n+2 >= 2 members");
  c.require_covering("shrink_to_empty_intersection");
  const std::size_t last = c.size() - 1;  // index n+1
  const std::size_t np = c.point_count();
  const ShrinkResult shrink = closed_shrinking(c);

  std::vector<DisjointPairFamily::Pair> request;
  for (std::size_t i = 0; i < last; ++i)
    request.push_back({shrink.closed[i], c.support(i).complement()});
  const DisjointPairFamily pairs(std::move(request));

  const InessentialWitness w = oracle(pairs);
  if (auto why = witness_violation(w, pairs)) throw OracleError("oracle witness invalid: " + *why);

  std::vector<CozeroFunction> out;
  out.reserve(c.size());
  CozeroFunction any_v = CozeroFunction::zero(np);
  for (std::size_t i = 0; i < last; ++i) {
    out.push_back(w.pairs[i].u);
    any_v = pointwise_max(any_v, w.pairs[i].v);
  }
  out.push_back(pointwise_min(c[last], any_v));
  Cover result(np, std::move(out));
  if (auto x = result.first_uncovered())
    throw OracleError("shrinking lost point " + std::to_string(*x));
  return result;
}

Cover reduce_order(const Cover& c, int n, const SeparationOracle& oracle,
                   const ReductionObserver& observer) {
  if (n < 0) throw InputError("reduce_order needs n >= 0");
  c.require_covering("reduce_order");
  const std::size_t s = c.size();
  const std::size_t r = static_cast<std::size_t>(n) + 2;
  const std::size_t np = c.point_count();
  Cover current = c;
  std::size_t e = 0;
  for (Combinations comb(s, r); !comb.done(); comb.next(), ++e) {
    const auto& subset = comb.current();
    std::vector<bool> in_subset(s, false);
    for (std::size_t i : subset) in_subset[i] = true;

    // Members outside D_e are folded into the last member of D_e so that the
    // n+2 sets cover the sample.
    CozeroFunction rest = CozeroFunction::zero(np);
    for (std::size_t i = 0; i < s; ++i)
      if (!in_subset[i]) rest = pointwise_max(rest, current[i]);
    std::vector<CozeroFunction> local;
    local.reserve(r);
    for (std::size_t k = 0; k + 1 < r; ++k) local.push_back(current[subset[k]]);
    local.push_back(pointwise_max(current[subset[r - 1]], rest));

    const Cover shrunk = shrink_to_empty_intersection(Cover(np, std::move(local)), oracle);

    std::vector<CozeroFunction> next(current.members());
    for (std::size_t k = 0; k + 1 < r; ++k) next[subset[k]] = shrunk[k];
    next[subset[r - 1]] = pointwise_min(shrunk[r - 1], current[subset[r - 1]]);
    const Cover replaced(np, std::move(next));

    current = closed_shrinking(replaced).open_shrink;
    if (observer) observer(e, subset, current);
  }
  return current;
}

}  // namespace dimlab
