#include "dimlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dimlab/combinatorics.hpp"
#include "dimlab/error.hpp"
#include "dimlab/random.hpp"

namespace dimlab {

namespace {

constexpr double kDependentColumn = 1e-12;

// Appends the normalized component of `c` orthogonal to the columns of `q`.
void orthonormal_append(std::vector<Eigen::VectorXd>& q, const Eigen::VectorXd& c) {
  const double scale = c.norm();
  if (scale == 0.0) return;
  Eigen::VectorXd v = c;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : q) v -= b.dot(v) * b;
  const double r = v.norm();
  if (r > kDependentColumn * scale) q.push_back(v / r);
}

Eigen::VectorXd residual(const std::vector<Eigen::VectorXd>& q, Eigen::VectorXd r) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : q) r -= b.dot(r) * b;
  return r;
}

// Reflection keeps the candidate distribution continuous; clamping would pile
// candidates onto faces in common affine subspaces.
void reflect_into_unit_cube(Eigen::VectorXd& p) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    double& v = p(i);
    if (v < 0.0) v = -v;
    if (v > 1.0) v = 2.0 - v;
    v = std::clamp(v, 0.0, 1.0);
  }
}

}  // namespace

AffineFlat AffineFlat::hull(std::span<const Eigen::VectorXd> points) {
  if (points.empty()) throw InputError("affine hull of an empty point list");
  AffineFlat f;
  f.origin = points[0];
  f.directions.resize(f.origin.size(), static_cast<Eigen::Index>(points.size() - 1));
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].size() != f.origin.size()) throw InputError("points of different dimensions");
    f.directions.col(static_cast<Eigen::Index>(i - 1)) = points[i] - points[0];
  }
  return f;
}

double affine_distance(const AffineFlat& a, const AffineFlat& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw InputError("flats live in different dimensions");
  std::vector<Eigen::VectorXd> q;
  for (Eigen::Index j = 0; j < a.directions.cols(); ++j) orthonormal_append(q, a.directions.col(j));
  for (Eigen::Index j = 0; j < b.directions.cols(); ++j) orthonormal_append(q, b.directions.col(j));
  return residual(q, b.origin - a.origin).norm();
}

double affine_distance(std::span<const Eigen::VectorXd> a, std::span<const Eigen::VectorXd> b) {
  return affine_distance(AffineFlat::hull(a), AffineFlat::hull(b));
}

double affine_conditioning(std::span<const Eigen::VectorXd> points) {
  if (points.size() <= 1) return std::numeric_limits<double>::infinity();
  const Eigen::Index d = points[0].size();
  const auto m = static_cast<Eigen::Index>(points.size() - 1);
  if (m > d) return 0.0;
  Eigen::MatrixXd diff(d, m);
  for (Eigen::Index j = 0; j < m; ++j) diff.col(j) = points[static_cast<std::size_t>(j) + 1] - points[0];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff);
  return svd.singularValues().minCoeff();
}

bool affinely_independent(std::span<const Eigen::VectorXd> points, double tolerance) {
  return affine_conditioning(points) > tolerance;
}

namespace {

// Degenerate subset containing `last` and otherwise indices below it.
std::optional<std::vector<std::size_t>> degenerate_with(std::span<const Eigen::VectorXd> points,
                                                        std::size_t last, double tol) {
  const std::size_t d = static_cast<std::size_t>(points[0].size());
  std::vector<Eigen::VectorXd> buf;
  for (std::size_t others = 1; others <= std::min(last, d); ++others) {
    for (Combinations c(last, others); !c.done(); c.next()) {
      buf.clear();
      for (std::size_t i : c.current()) buf.push_back(points[i]);
      buf.push_back(points[last]);
      if (!affinely_independent(buf, tol)) {
        std::vector<std::size_t> s = c.current();
        s.push_back(last);
        return s;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<std::size_t>> find_degenerate_subset(std::span<const Eigen::VectorXd> points,
                                                               double tolerance) {
  if (points.size() < 2) return std::nullopt;
  const std::size_t d = static_cast<std::size_t>(points[0].size());
  std::vector<Eigen::VectorXd> buf;
  for (std::size_t size = 2; size <= std::min(points.size(), d + 1); ++size) {
    for (Combinations c(points.size(), size); !c.done(); c.next()) {
      buf.clear();
      for (std::size_t i : c.current()) buf.push_back(points[i]);
      if (!affinely_independent(buf, tolerance)) return c.current();
    }
  }
  return std::nullopt;
}

AffineConstraint AffineConstraint::through(std::span<const Eigen::VectorXd> points) {
  const AffineFlat f = AffineFlat::hull(points);
  std::vector<Eigen::VectorXd> q;
  for (Eigen::Index j = 0; j < f.directions.cols(); ++j) orthonormal_append(q, f.directions.col(j));
  AffineConstraint c;
  c.origin = f.origin;
  c.basis.resize(f.origin.size(), static_cast<Eigen::Index>(q.size()));
  for (std::size_t j = 0; j < q.size(); ++j) c.basis.col(static_cast<Eigen::Index>(j)) = q[j];
  return c;
}

Eigen::VectorXd AffineConstraint::project(const Eigen::VectorXd& p) const {
  if (p.size() != origin.size()) throw InputError("point and constraint dimensions differ");
  return origin + basis * (basis.transpose() * (p - origin));
}

std::vector<Eigen::VectorXd> general_position(std::span<const Eigen::VectorXd> targets, double eps,
                                              std::span<const std::optional<AffineConstraint>> constraints,
                                              const GeneralPositionOptions& options) {
  if (!(eps > 0.0)) throw InputError("general_position needs eps > 0");
  if (targets.empty()) return {};
  if (!constraints.empty() && constraints.size() != targets.size())
    throw InputError("one constraint slot per target expected");
  const Eigen::Index d = targets[0].size();
  for (const auto& t : targets)
    if (t.size() != d) throw InputError("targets of different dimensions");

  const std::size_t k = targets.size();
  std::vector<Eigen::VectorXd> base(k);
  std::vector<double> radius(k, 0.5 * eps);
  for (std::size_t i = 0; i < k; ++i) {
    base[i] = targets[i];
    if (!constraints.empty() && constraints[i]) {
      const double off = constraints[i]->distance(targets[i]);
      if (!(off < eps))
        throw InputError("target " + std::to_string(i) + " is not within eps of its constraint");
      base[i] = constraints[i]->project(targets[i]);
      radius[i] = std::min(0.5 * eps, 0.5 * (eps - off));
    }
  }
  if (k == 1) return base;

  SplitMix64 rng(options.seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const bool constrained = !constraints.empty() && constraints[i].has_value();
    const Eigen::Index q = constrained ? constraints[i]->basis.cols() : d;
    std::optional<std::vector<std::size_t>> last_violation;
    bool placed = false;
    for (int attempt = 0; attempt < options.retry_budget && !placed; ++attempt) {
      Eigen::VectorXd step(q);
      for (Eigen::Index j = 0; j < q; ++j) step(j) = rng.uniform(-1.0, 1.0);
      if (q > 0) step *= radius[i] / std::sqrt(static_cast<double>(q));
      Eigen::VectorXd cand = constrained ? Eigen::VectorXd(base[i] + constraints[i]->basis * step)
                                         : Eigen::VectorXd(base[i] + step);
      if (options.keep_in_unit_cube) reflect_into_unit_cube(cand);
      if (constrained && constraints[i]->distance(cand) > 1e-12) continue;
      if (!((cand - targets[i]).norm() < eps)) continue;
      out.push_back(std::move(cand));
      last_violation = degenerate_with(out, i, options.rank_tolerance);
      if (last_violation) {
        out.pop_back();
        continue;
      }
      placed = true;
    }
    if (!placed) {
      std::vector<std::size_t> subset = last_violation.value_or(std::vector<std::size_t>{i});
      std::string s;
      for (std::size_t v : subset) s += (s.empty() ? "" : ",") + std::to_string(v);
      throw GeneralPositionError("general_position: retry budget exhausted at point " +
                                     std::to_string(i) + ", degenerate subset {" + s + "}",
                                 std::move(subset));
    }
  }
  return out;
}

}  // namespace dimlab
