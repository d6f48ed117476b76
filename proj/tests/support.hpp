#pragma once

// Seeded generators and brute-force oracles shared by the unit and acceptance
// tests. The oracles deliberately avoid the library's own algorithms.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dimlab/covers.hpp"
#include "dimlab/metric_space.hpp"
#include "dimlab/point_set.hpp"

namespace testing_support {

// mt19937_64 is fully specified by the standard; the distributions are not, so
// they are derived from raw words.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(g_() % n); }

 private:
  std::mt19937_64 g_;
};

inline dimlab::SampledSpace random_sample(Rng& rng, std::size_t n, std::size_t dim) {
  Eigen::MatrixXd c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j) c(i, j) = rng.uniform();
  return dimlab::SampledSpace::from_coordinates(c, 1.0 / static_cast<double>(n));
}

inline dimlab::SampledSpace interval_sample(std::size_t n) {
  Eigen::MatrixXd c(static_cast<Eigen::Index>(n), 1);
  for (std::size_t i = 0; i < n; ++i)
    c(static_cast<Eigen::Index>(i), 0) = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
  return dimlab::SampledSpace::from_coordinates(c, n == 1 ? 1.0 : 0.5 / static_cast<double>(n - 1));
}

// k balls centred at random sample points; the ball of each point's nearest
// centre is enlarged until it contains the point, so the balls cover.
inline std::vector<dimlab::Ball> random_covering_balls(Rng& rng, const dimlab::SampledSpace& s, std::size_t k) {
  std::vector<std::size_t> centers;
  std::vector<double> radius;
  for (std::size_t i = 0; i < k; ++i) {
    centers.push_back(rng.below(s.size()));
    radius.push_back(rng.uniform(0.05, 0.6));
  }
  for (std::size_t x = 0; x < s.size(); ++x) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < k; ++i)
      if (s.distance(x, centers[i]) < s.distance(x, centers[best])) best = i;
    if (!(s.distance(x, centers[best]) < radius[best]))
      radius[best] = s.distance(x, centers[best]) + rng.uniform(0.01, 0.1);
  }
  std::vector<dimlab::Ball> out;
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(dimlab::PointId{centers[i]}, radius[i]);
  return out;
}

inline dimlab::Cover ball_cover(const dimlab::SampledSpace& s, const std::vector<dimlab::Ball>& balls) {
  std::vector<dimlab::CozeroFunction> m;
  for (const auto& b : balls) m.push_back(dimlab::ball_cozero(s, b));
  return dimlab::Cover(s.size(), std::move(m));
}

// Random cozero family with random values, covering.
inline dimlab::Cover random_value_cover(Rng& rng, std::size_t points, std::size_t k, double density) {
  std::vector<std::vector<double>> v(k, std::vector<double>(points, 0.0));
  for (std::size_t x = 0; x < points; ++x) {
    bool hit = false;
    for (std::size_t i = 0; i < k; ++i)
      if (rng.uniform() < density) {
        v[i][x] = rng.uniform(0.01, 1.0);
        hit = true;
      }
    if (!hit) v[rng.below(k)][x] = rng.uniform(0.01, 1.0);
  }
  std::vector<dimlab::CozeroFunction> m;
  for (auto& vals : v) m.emplace_back(std::move(vals));
  return dimlab::Cover(points, std::move(m));
}

// Oracle: order by enumerating every subset of members.
inline int brute_order(const dimlab::Cover& c) {
  int best = -1;
  const std::size_t k = c.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    bool common = false;
    for (std::size_t x = 0; x < c.point_count() && !common; ++x) {
      bool all = true;
      for (std::size_t i = 0; i < k && all; ++i)
        if ((mask >> i) & 1U) all = c[i][x] > 0.0;
      common = all;
    }
    if (common) best = std::max(best, __builtin_popcountll(mask) - 1);
  }
  return best;
}

inline bool inside(const dimlab::CozeroFunction& a, const dimlab::CozeroFunction& b) {
  for (std::size_t x = 0; x < a.size(); ++x)
    if (a[x] > 0.0 && !(b[x] > 0.0)) return false;
  return true;
}

inline bool meets(const dimlab::CozeroFunction& a, const dimlab::CozeroFunction& b) {
  for (std::size_t x = 0; x < a.size(); ++x)
    if (a[x] > 0.0 && b[x] > 0.0) return true;
  return false;
}

// Oracle: every member's star, built from pairwise meets, lies in a member of u.
inline bool brute_star_refines(const dimlab::Cover& v, const dimlab::Cover& u) {
  for (std::size_t m = 0; m < v.size(); ++m) {
    std::vector<bool> st(v.point_count(), false);
    for (std::size_t w = 0; w < v.size(); ++w)
      if (meets(v[m], v[w]))
        for (std::size_t x = 0; x < v.point_count(); ++x) st[x] = st[x] || v[w][x] > 0.0;
    bool fits = false;
    for (std::size_t i = 0; i < u.size() && !fits; ++i) {
      fits = true;
      for (std::size_t x = 0; x < v.point_count() && fits; ++x)
        if (st[x] && !(u[i][x] > 0.0)) fits = false;
    }
    if (!fits) return false;
  }
  return true;
}

inline bool brute_covers(const dimlab::Cover& c) {
  for (std::size_t x = 0; x < c.point_count(); ++x) {
    bool hit = false;
    for (const auto& m : c) hit = hit || m[x] > 0.0;
    if (!hit) return false;
  }
  return true;
}

// Oracle: smallest singular value of the difference matrix through the
// eigenvalues of its Gram matrix.
inline double gram_conditioning(const std::vector<Eigen::VectorXd>& pts) {
  if (pts.size() < 2) return INFINITY;
  const auto m = static_cast<Eigen::Index>(pts.size() - 1);
  if (m > pts[0].size()) return 0.0;
  Eigen::MatrixXd d(pts[0].size(), m);
  for (Eigen::Index j = 0; j < m; ++j) d.col(j) = pts[static_cast<std::size_t>(j) + 1] - pts[0];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.transpose() * d);
  return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
}

// Oracle: distance between affine hulls by an SVD least-squares solve over
// the affine parameters.
inline double lsq_hull_distance(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
  const Eigen::Index d = a[0].size();
  const auto ka = static_cast<Eigen::Index>(a.size() - 1);
  const auto kb = static_cast<Eigen::Index>(b.size() - 1);
  if (ka + kb == 0) return (a[0] - b[0]).norm();
  Eigen::MatrixXd m(d, ka + kb);
  for (Eigen::Index j = 0; j < ka; ++j) m.col(j) = a[static_cast<std::size_t>(j) + 1] - a[0];
  for (Eigen::Index j = 0; j < kb; ++j) m.col(ka + j) = -(b[static_cast<std::size_t>(j) + 1] - b[0]);
  const Eigen::VectorXd rhs = b[0] - a[0];
  const Eigen::VectorXd sol = m.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  return (m * sol - rhs).norm();
}

}  // namespace testing_support
