#include "dimlab/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {

double max_entry(const Eigen::MatrixXd& d) { return d.size() == 0 ? 0.0 : d.maxCoeff(); }

}  // namespace

SampledSpace::SampledSpace(Eigen::MatrixXd distances, std::optional<Eigen::MatrixXd> coordinates,
                           double mesh)
    : distances_(std::move(distances)), coordinates_(std::move(coordinates)), mesh_(mesh),
      diameter_(max_entry(distances_)) {}

SampledSpace SampledSpace::from_coordinates(Eigen::MatrixXd coordinates, double mesh) {
  if (coordinates.rows() == 0) throw InputError("sampled space needs at least one point");
  if (coordinates.cols() == 0) throw InputError("points need at least one coordinate");
  if (!(mesh > 0.0) || !std::isfinite(mesh)) throw InputError("mesh must be a positive real");
  if (!coordinates.allFinite()) throw InputError("coordinates must be finite");
  const Eigen::Index n = coordinates.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dij = (coordinates.row(i) - coordinates.row(j)).norm();
      if (dij == 0.0)
        throw InputError("points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      d(i, j) = d(j, i) = dij;
    }
  }
  return SampledSpace(std::move(d), std::move(coordinates), mesh);
}

SampledSpace SampledSpace::from_distances(Eigen::MatrixXd d, double mesh, double tol) {
  const Eigen::Index n = d.rows();
  if (n == 0) throw InputError("sampled space needs at least one point");
  if (d.cols() != n) throw InputError("distance matrix must be square");
  if (!(mesh > 0.0) || !std::isfinite(mesh)) throw InputError("mesh must be a positive real");
  if (!d.allFinite()) throw InputError("distances must be finite");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) throw InputError("distance matrix diagonal must be zero at " + std::to_string(i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(d(i, j) - d(j, i)) > tol)
        throw InputError("distance matrix not symmetric at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      if (!(d(i, j) > 0.0))
        throw InputError("distinct points " + std::to_string(i) + "," + std::to_string(j) +
                         " have non-positive distance");
      const double sym = 0.5 * (d(i, j) + d(j, i));
      d(i, j) = d(j, i) = sym;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        if (d(i, k) > d(i, j) + d(j, k) + tol)
          throw InputError("triangle inequality violated for (" + std::to_string(i) + "," +
                           std::to_string(j) + "," + std::to_string(k) + ")");
  return SampledSpace(std::move(d), std::nullopt, mesh);
}

const Eigen::MatrixXd& SampledSpace::coordinates() const {
  if (!coordinates_) throw InputError("space has no ambient coordinates");
  return *coordinates_;
}

Eigen::VectorXd SampledSpace::point(std::size_t x) const {
  check_point(x);
  return coordinates().row(static_cast<Eigen::Index>(x)).transpose();
}

void SampledSpace::check_point(std::size_t x) const {
  if (x >= size())
    throw InputError("unknown point " + std::to_string(x) + " (space has " + std::to_string(size()) +
                     " points)");
}

Ball::Ball(Center c, double r) : center(std::move(c)), radius(r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("ball radius must be a positive real");
}

double distance_to_center(const SampledSpace& space, std::size_t x, const Center& c) {
  space.check_point(x);
  if (const auto* id = std::get_if<PointId>(&c)) {
    space.check_point(id->index);
    return space.distance(x, id->index);
  }
  const auto& v = std::get<Eigen::VectorXd>(c);
  const auto& coords = space.coordinates();
  if (v.size() != coords.cols()) throw InputError("ball center has wrong ambient dimension");
  return (coords.row(static_cast<Eigen::Index>(x)).transpose() - v).norm();
}

double center_distance(const SampledSpace& space, const Center& a, const Center& b) {
  if (const auto* ia = std::get_if<PointId>(&a)) return distance_to_center(space, ia->index, b);
  if (const auto* ib = std::get_if<PointId>(&b)) return distance_to_center(space, ib->index, a);
  const auto& va = std::get<Eigen::VectorXd>(a);
  const auto& vb = std::get<Eigen::VectorXd>(b);
  if (va.size() != vb.size()) throw InputError("ball centers have different dimensions");
  return (va - vb).norm();
}

CozeroFunction::CozeroFunction(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t x = 0; x < values_.size(); ++x)
    if (!(values_[x] >= 0.0 && values_[x] <= 1.0))
      throw InputError("cozero value at point " + std::to_string(x) + " outside [0,1]");
}

PointSet CozeroFunction::support() const {
  PointSet s(values_.size());
  for (std::size_t x = 0; x < values_.size(); ++x)
    if (values_[x] > 0.0) s.insert(x);
  return s;
}

bool CozeroFunction::empty() const {
  return std::none_of(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
}

CozeroFunction pointwise_min(const CozeroFunction& a, const CozeroFunction& b) {
  if (a.size() != b.size()) throw InputError("cozero functions live on different samples");
  std::vector<double> v(a.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = std::min(a[x], b[x]);
  return CozeroFunction(std::move(v));
}

CozeroFunction pointwise_max(const CozeroFunction& a, const CozeroFunction& b) {
  if (a.size() != b.size()) throw InputError("cozero functions live on different samples");
  std::vector<double> v(a.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = std::max(a[x], b[x]);
  return CozeroFunction(std::move(v));
}

CozeroFunction ball_cozero(const SampledSpace& space, const Ball& b) {
  std::vector<double> v(space.size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    const double d = distance_to_center(space, x, b.center);
    v[x] = std::clamp((b.radius - d) / b.radius, 0.0, 1.0);
  }
  return CozeroFunction(std::move(v));
}

CozeroFunction complement_cozero(const SampledSpace& space, const Ball& b) {
  std::vector<double> v(space.size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    const double d = distance_to_center(space, x, b.center);
    v[x] = std::clamp(d - b.radius, 0.0, 1.0);
  }
  return CozeroFunction(std::move(v));
}

bool formally_included(const SampledSpace& space, const Ball& inner, const Ball& outer) {
  return center_distance(space, inner.center, outer.center) <= outer.radius - inner.radius;
}

bool strictly_included(const SampledSpace& space, const Ball& inner, const Ball& outer) {
  return center_distance(space, inner.center, outer.center) < outer.radius - inner.radius;
}

namespace {

double vector_center_distance(const Ball& a, const Ball& b) {
  const auto* va = std::get_if<Eigen::VectorXd>(&a.center);
  const auto* vb = std::get_if<Eigen::VectorXd>(&b.center);
  if (!va || !vb) throw InputError("sample-point centers need a SampledSpace");
  if (va->size() != vb->size()) throw InputError("ball centers have different dimensions");
  return (*va - *vb).norm();
}

}  // namespace

bool formally_included(const Ball& inner, const Ball& outer) {
  return vector_center_distance(inner, outer) <= outer.radius - inner.radius;
}

bool strictly_included(const Ball& inner, const Ball& outer) {
  return vector_center_distance(inner, outer) < outer.radius - inner.radius;
}

std::vector<Ball> enumerate_balls(const SampledSpace& space, std::size_t radii_depth) {
  if (radii_depth < 1) throw InputError("radii_depth must be at least 1");
  const double base = space.diameter() > 0.0 ? space.diameter() : space.mesh();
  std::vector<Ball> balls;
  balls.reserve(space.size() * (radii_depth + 1));
  for (std::size_t k = 0; k <= radii_depth; ++k) {
    const double r = std::ldexp(base, -static_cast<int>(k));
    for (std::size_t p = 0; p < space.size(); ++p) balls.emplace_back(PointId{p}, r);
  }
  return balls;
}

std::vector<BallPair> strict_inclusion_pairs(const SampledSpace& space, std::span<const Ball> balls) {
  std::vector<BallPair> pairs;
  for (std::size_t j = 0; j < balls.size(); ++j)
    for (std::size_t i = 0; i < balls.size(); ++i)
      if (i != j && strictly_included(space, balls[i], balls[j])) pairs.push_back({i, j});
  return pairs;
}

}  // namespace dimlab
