#include "dimlab/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "dimlab/combinatorics.hpp"
#include "dimlab/error.hpp"
#include "dimlab/random.hpp"

namespace dimlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCubeTolerance = 1e-12;

std::string stage_location(std::size_t t) { return "stage " + std::to_string(t); }

std::string subset_string(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

// Rationals of [0,1] with denominator exactly q, numerators ascending.
std::vector<Rational> rationals_with_denominator(std::int64_t q) {
  std::vector<Rational> out;
  if (q == 1) return {{0, 1}, {1, 1}};
  for (std::int64_t p = 1; p < q; ++p)
    if (std::gcd(p, q) == 1) out.push_back({p, q});
  return out;
}

std::vector<Eigen::VectorXd> pick(std::span<const Eigen::VectorXd> v, const std::vector<std::size_t>& idx) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(v[i]);
  return out;
}

// All nonempty subsets of {0..k-1} with at most `max_size` elements, by size
// then lexicographically.
std::vector<std::vector<std::size_t>> small_subsets(std::size_t k, std::size_t max_size) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t r = 1; r <= std::min(k, max_size); ++r)
    for (Combinations c(k, r); !c.done(); c.next()) out.push_back(c.current());
  return out;
}

bool disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  for (std::size_t x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return false;
  return true;
}

}  // namespace

AffineFlat Hyperplane::flat() const {
  AffineFlat f;
  f.origin = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ambient_dim));
  for (std::size_t i = 0; i < coords.size(); ++i) f.origin(static_cast<Eigen::Index>(coords[i])) = values[i].value();
  const AffineConstraint c = constraint();
  f.directions = c.basis;
  return f;
}

AffineConstraint Hyperplane::constraint() const {
  AffineConstraint c;
  c.origin = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ambient_dim));
  for (std::size_t i = 0; i < coords.size(); ++i) c.origin(static_cast<Eigen::Index>(coords[i])) = values[i].value();
  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < ambient_dim; ++k)
    if (!std::binary_search(coords.begin(), coords.end(), k)) free.push_back(k);
  c.basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ambient_dim), static_cast<Eigen::Index>(free.size()));
  for (std::size_t j = 0; j < free.size(); ++j)
    c.basis(static_cast<Eigen::Index>(free[j]), static_cast<Eigen::Index>(j)) = 1.0;
  return c;
}

double Hyperplane::distance(const Eigen::VectorXd& p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double d = p(static_cast<Eigen::Index>(coords[i])) - values[i].value();
    s += d * d;
  }
  return std::sqrt(s);
}

double Hyperplane::max_violation(const Eigen::VectorXd& p) const {
  double m = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i)
    m = std::max(m, std::abs(p(static_cast<Eigen::Index>(coords[i])) - values[i].value()));
  return m;
}

std::vector<Hyperplane> enumerate_hyperplanes(int n, std::size_t count) {
  if (n < 0) throw InputError("enumerate_hyperplanes: n must be nonnegative");
  if (count == 0) throw InputError("enumerate_hyperplanes: at least one hyperplane requested");
  const std::size_t dim = 2 * static_cast<std::size_t>(n) + 1;
  const std::size_t fixed = static_cast<std::size_t>(n) + 1;
  std::vector<std::vector<std::size_t>> coord_sets;
  for (Combinations c(dim, fixed); !c.done(); c.next()) coord_sets.push_back(c.current());

  std::vector<Hyperplane> out;
  std::vector<Rational> ranked;  // all rationals with denominator <= q, by (den, num)
  for (std::int64_t q = 1; out.size() < count; ++q) {
    const std::size_t old_size = ranked.size();
    for (const Rational& r : rationals_with_denominator(q)) ranked.push_back(r);
    // Value tuples over `ranked` using at least one rational of denominator q,
    // in lexicographic order of ranks.
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<std::size_t> digits(fixed, 0);
    while (true) {
      if (std::any_of(digits.begin(), digits.end(), [&](std::size_t d) { return d >= old_size; }))
        tuples.push_back(digits);
      std::size_t pos = fixed;
      while (pos > 0 && digits[pos - 1] + 1 == ranked.size()) digits[--pos] = 0;
      if (pos == 0) break;
      ++digits[pos - 1];
    }
    for (const auto& cs : coord_sets) {
      for (const auto& tuple : tuples) {
        Hyperplane h;
        h.ambient_dim = dim;
        h.coords = cs;
        for (std::size_t d : tuple) h.values.push_back(ranked[d]);
        out.push_back(std::move(h));
        if (out.size() == count) return out;
      }
    }
  }
  return out;
}

std::vector<std::size_t> active_indices(const Cover& cozeros, std::size_t x) {
  if (x >= cozeros.point_count()) throw InputError("point " + std::to_string(x) + " out of range");
  return cozeros.active(x);
}

KappaResult kappa_map(const Cover& cozeros, std::span<const Eigen::VectorXd> vertices) {
  if (vertices.size() != cozeros.size())
    throw InputError("kappa_map: " + std::to_string(vertices.size()) + " vertices for " +
                     std::to_string(cozeros.size()) + " members");
  const std::size_t n = cozeros.point_count();
  const Eigen::Index d = vertices.empty() ? 0 : vertices[0].size();
  for (const auto& z : vertices)
    if (z.size() != d) throw InputError("kappa_map: vertices of different dimensions");
  KappaResult r;
  r.images = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), d);
  r.weights.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    double total = 0.0;
    const auto act = cozeros.active(x);
    for (std::size_t i : act) total += cozeros[i][x];
    if (!(total > 0.0))
      throw PreconditionError("kappa_map: no member contains point " + std::to_string(x), x);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(d);
    for (std::size_t i : act) {
      const double lambda = cozeros[i][x] / total;
      r.weights[x].emplace_back(i, lambda);
      y += lambda * vertices[i];
    }
    r.images.row(static_cast<Eigen::Index>(x)) = y.transpose();
  }
  return r;
}

double eta(std::span<const Eigen::VectorXd> vertices, int n, double tolerance) {
  if (vertices.empty()) return kInf;
  const std::size_t d = static_cast<std::size_t>(vertices[0].size());
  const auto subsets = small_subsets(vertices.size(), static_cast<std::size_t>(n) + 1);
  std::vector<AffineFlat> hulls;
  hulls.reserve(subsets.size());
  for (const auto& s : subsets) hulls.push_back(AffineFlat::hull(pick(vertices, s)));
  double best = kInf;
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    for (std::size_t b = a + 1; b < subsets.size(); ++b) {
      if (!disjoint(subsets[a], subsets[b])) continue;
      const double dist = affine_distance(hulls[a], hulls[b]);
      if (dist <= tolerance) {
        if (subsets[a].size() + subsets[b].size() <= d + 1) {
          std::vector<std::size_t> u = subsets[a];
          u.insert(u.end(), subsets[b].begin(), subsets[b].end());
          std::sort(u.begin(), u.end());
          throw GeneralPositionError("eta: hulls of " + subset_string(subsets[a]) + " and " +
                                         subset_string(subsets[b]) + " meet",
                                     std::move(u));
        }
        continue;
      }
      best = std::min(best, dist);
    }
  }
  return best;
}

double eta_prime(std::span<const Eigen::VectorXd> vertices, const Hyperplane& plane, int n, double tolerance) {
  const AffineFlat l = plane.flat();
  double best = kInf;
  for (const auto& s : small_subsets(vertices.size(), static_cast<std::size_t>(n) + 1)) {
    const double dist = affine_distance(AffineFlat::hull(pick(vertices, s)), l);
    if (dist <= tolerance)
      throw GeneralPositionError("eta_prime: hull of " + subset_string(s) + " meets the hyperplane", s);
    best = std::min(best, dist);
  }
  return best;
}

ImageMap initial_map(const SampledSpace& space, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd x;
  if (space.has_coordinates() && static_cast<std::size_t>(space.coordinates().cols()) <= dim) {
    x = space.coordinates();
  } else {
    // Classical multidimensional scaling.
    const Eigen::MatrixXd d2 = space.distances().array().square().matrix();
    const Eigen::MatrixXd j =
        Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    const Eigen::MatrixXd b = -0.5 * j * d2 * j;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    const Eigen::Index k = std::min<Eigen::Index>(static_cast<Eigen::Index>(dim), n);
    x = Eigen::MatrixXd::Zero(n, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      const Eigen::Index e = n - 1 - c;  // eigenvalues ascend
      const double lambda = es.eigenvalues()(e);
      if (lambda > 0.0) x.col(c) = es.eigenvectors().col(e) * std::sqrt(lambda);
    }
  }
  ImageMap f = ImageMap::Constant(n, static_cast<Eigen::Index>(dim), 0.5);
  const Eigen::RowVectorXd lo = x.colwise().minCoeff();
  const Eigen::RowVectorXd hi = x.colwise().maxCoeff();
  const double scale = x.cols() == 0 ? 0.0 : (hi - lo).maxCoeff();
  if (scale > 0.0)
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      f.col(c) = ((x.col(c).array() - lo(c)) / scale).cwiseMax(0.0).cwiseMin(1.0).matrix();
  return f;
}

Cover pair_cover(const SampledSpace& space, std::span<const Ball> balls, BallPair pair) {
  if (pair.inner >= balls.size() || pair.outer >= balls.size())
    throw InputError("ball pair index out of range");
  const Ball& inner = balls[pair.inner];
  const Ball& outer = balls[pair.outer];
  if (!strictly_included(space, inner, outer)) throw PreconditionError("ball pair is not strictly included");
  return Cover(space.size(), {ball_cozero(space, outer), complement_cozero(space, inner)});
}

DeltaGrid::DeltaGrid(std::size_t d, double dl)
    : dim(d), delta(dl), spacing(dl / std::sqrt(static_cast<double>(d))), last(0) {
  if (!(delta > 0.0) || dim == 0) throw InputError("grid needs positive delta and dimension");
  last = static_cast<std::int64_t>(std::ceil(1.0 / spacing));
}

Eigen::VectorXd DeltaGrid::center(const std::vector<std::int64_t>& key) const {
  Eigen::VectorXd c(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    c(static_cast<Eigen::Index>(i)) = std::min(static_cast<double>(key[i]) * spacing, 1.0);
  return c;
}

std::vector<std::vector<std::int64_t>> DeltaGrid::keys_near(const Eigen::VectorXd& y) const {
  std::vector<std::int64_t> lo(dim), hi(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double v = y(static_cast<Eigen::Index>(i));
    lo[i] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((v - delta) / spacing)), 0, last);
    hi[i] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil((v + delta) / spacing)), 0, last);
  }
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> key = lo;
  while (true) {
    if ((center(key) - y).norm() < delta) out.push_back(key);
    std::size_t pos = dim;
    while (pos > 0 && key[pos - 1] == hi[pos - 1]) {
      key[pos - 1] = lo[pos - 1];
      --pos;
    }
    if (pos == 0) break;
    ++key[pos - 1];
  }
  return out;
}

Cover grid_preimage_cover(const ImageMap& f, double delta) {
  const auto n = static_cast<std::size_t>(f.rows());
  const DeltaGrid grid(static_cast<std::size_t>(f.cols()), delta);
  std::map<std::vector<std::int64_t>, std::vector<std::size_t>> hits;
  for (std::size_t x = 0; x < n; ++x)
    for (auto& key : grid.keys_near(f.row(static_cast<Eigen::Index>(x)).transpose()))
      hits[std::move(key)].push_back(x);
  std::vector<CozeroFunction> members;
  std::map<std::vector<std::size_t>, bool> seen;
  for (const auto& [key, pts] : hits) {
    if (!seen.emplace(pts, true).second) continue;
    const Eigen::VectorXd g = grid.center(key);
    std::vector<double> u(n, 0.0);
    for (std::size_t x : pts)
      u[x] = std::clamp((delta - (f.row(static_cast<Eigen::Index>(x)).transpose() - g).norm()) / delta, 0.0, 1.0);
    members.emplace_back(std::move(u));
  }
  return Cover(n, std::move(members));
}

StageRecord embedding_stage(const StageState& state, BallPair pair, const Hyperplane& plane,
                            const StageContext& ctx) {
  const SampledSpace& space = ctx.space;
  const std::size_t npts = space.size();
  if (ctx.n < 0) throw InputError("n must be nonnegative");
  const std::size_t dim = 2 * static_cast<std::size_t>(ctx.n) + 1;
  if (static_cast<std::size_t>(state.f.rows()) != npts || static_cast<std::size_t>(state.f.cols()) != dim)
    throw InputError("stage map has the wrong shape");
  if (!(state.delta > 0.0)) throw InputError("stage delta must be positive");
  if (plane.ambient_dim != dim) throw InputError("hyperplane lives in the wrong dimension");
  if (state.f.minCoeff() < -kCubeTolerance || state.f.maxCoeff() > 1.0 + kCubeTolerance)
    throw PreconditionError("stage map leaves the unit cube");
  const std::string where = stage_location(state.t);

  StageRecord r;
  r.t = state.t;
  r.f_before = state.f;
  r.delta = state.delta;
  r.pair = pair;
  r.plane = plane;

  const Cover v = pair_cover(space, ctx.balls, pair);
  Cover w = grid_preimage_cover(state.f, state.delta);
  if (ctx.options.prune_subcovers) w = maximal_subcover(w).cover;
  const Cover vw = meet(v, w);
  const Cover reduced = drop_empty_members(reduce_order(vw, ctx.n, ctx.oracle)).cover;
  Cover refined = star_refinement(reduced).cover;
  if (ctx.options.prune_subcovers) refined = maximal_subcover(refined).cover;
  r.cover_u = drop_empty_members(reduce_order(refined, ctx.n, ctx.oracle)).cover;
  const int order = order_of(r.cover_u);
  if (order > ctx.n) throw CertificateError("order", where, static_cast<double>(ctx.n - order));
  if (!is_star_refinement(r.cover_u, vw)) throw CertificateError("star-refinement", where, -1.0);

  const std::size_t s = r.cover_u.size();
  std::vector<Eigen::VectorXd> targets;
  std::vector<std::optional<AffineConstraint>> constraints;
  for (std::size_t i = 0; i < s; ++i) {
    const auto support = r.cover_u.support(i).indices();
    r.chosen_points.push_back(support.front());
    targets.push_back(state.f.row(static_cast<Eigen::Index>(support.front())).transpose());
    constraints.emplace_back();
  }
  const AffineConstraint on_plane = plane.constraint();
  Eigen::VectorXd base = on_plane.origin;
  for (Eigen::Index j = 0; j < on_plane.basis.cols(); ++j) base += 0.5 * on_plane.basis.col(j);
  for (std::size_t j = 0; j <= static_cast<std::size_t>(ctx.n); ++j) {
    Eigen::VectorXd p = base;
    if (j > 0) p += 0.25 * on_plane.basis.col(static_cast<Eigen::Index>(j - 1));
    targets.push_back(std::move(p));
    constraints.emplace_back(on_plane);
  }
  GeneralPositionOptions gp;
  gp.rank_tolerance = ctx.options.rank_tolerance;
  gp.retry_budget = ctx.options.retry_budget;
  gp.seed = derive_seed(ctx.seed, state.t);
  gp.keep_in_unit_cube = true;
  std::vector<Eigen::VectorXd> placed = general_position(targets, state.delta, constraints, gp);
  r.vertices.assign(placed.begin(), placed.begin() + static_cast<std::ptrdiff_t>(s));
  r.anchors.assign(placed.begin() + static_cast<std::ptrdiff_t>(s), placed.end());
  for (std::size_t j = 0; j < r.anchors.size(); ++j)
    if (plane.max_violation(r.anchors[j]) > kCubeTolerance)
      throw CertificateError("anchor-on-plane", where + " anchor " + std::to_string(j),
                             -plane.max_violation(r.anchors[j]));

  const KappaResult kappa = kappa_map(r.cover_u, r.vertices);
  r.f_after = kappa.images;
  r.eta = eta(r.vertices, ctx.n, ctx.options.rank_tolerance);
  r.eta_prime = eta_prime(r.vertices, plane, ctx.n, ctx.options.rank_tolerance);
  r.delta_next = std::min({state.delta, r.eta / 8.0, r.eta_prime / 4.0}) / 3.0;

  std::size_t worst = 0;
  for (std::size_t x = 0; x < npts; ++x) {
    const double d = (state.f.row(static_cast<Eigen::Index>(x)) - r.f_after.row(static_cast<Eigen::Index>(x))).norm();
    if (d > r.contraction) {
      r.contraction = d;
      worst = x;
    }
  }
  if (!(r.contraction < 3.0 * state.delta))
    throw CertificateError("uniform-limit", where + " point " + std::to_string(worst),
                           3.0 * state.delta - r.contraction);
  if (!(r.delta_next > 0.0) || !(r.delta_next <= state.delta / 3.0))
    throw CertificateError("schedule", where, state.delta / 3.0 - r.delta_next);
  return r;
}

BallSchedule ball_schedule(const SampledSpace& space, std::size_t radii_depth, std::size_t stages) {
  constexpr std::size_t kMaxDepth = 48;
  for (std::size_t depth = radii_depth;; ++depth) {
    BallSchedule b{depth, enumerate_balls(space, depth), {}};
    b.pairs = strict_inclusion_pairs(space, b.balls);
    if (b.pairs.size() >= stages) return b;
    if (depth >= kMaxDepth) throw InputError("not enough strictly included ball pairs for the requested stages");
  }
}

std::pair<double, std::pair<std::size_t, std::size_t>> injectivity_margin(const ImageMap& f) {
  double best = kInf;
  std::pair<std::size_t, std::size_t> where{0, 0};
  for (Eigen::Index a = 0; a < f.rows(); ++a)
    for (Eigen::Index b = a + 1; b < f.rows(); ++b) {
      const double d = (f.row(a) - f.row(b)).norm();
      if (d < best) {
        best = d;
        where = {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
      }
    }
  return {best, where};
}

EmbeddingResult nobeling_embed(const SampledSpace& space, int n, std::size_t stages,
                               const SeparationOracle& oracle, std::uint64_t seed,
                               const EmbedOptions& options) {
  if (stages == 0) throw InputError("at least one stage required");
  if (space.size() == 0) throw InputError("empty sample");
  if (n < 0) throw InputError("n must be nonnegative");
  const std::size_t dim = 2 * static_cast<std::size_t>(n) + 1;
  const BallSchedule schedule = ball_schedule(space, options.radii_depth, stages);
  const std::vector<Hyperplane> planes = enumerate_hyperplanes(n, stages);

  EmbeddingResult res;
  res.n = n;
  res.seed = seed;
  res.radii_depth = schedule.radii_depth;
  const StageContext ctx{space, schedule.balls, n, oracle, seed, options};
  StageState state{0, initial_map(space, dim), 0.25};
  for (std::size_t t = 0; t < stages; ++t) {
    res.stages.push_back(embedding_stage(state, schedule.pairs[t], planes[t], ctx));
    state = next_state(res.stages.back());
  }
  res.f = state.f;

  for (std::size_t t = 0; t < stages; ++t) {
    AvoidedHyperplane a{planes[t], kInf, 0.0};
    std::size_t worst = 0;
    for (Eigen::Index x = 0; x < res.f.rows(); ++x) {
      const double d = planes[t].distance(res.f.row(x).transpose());
      if (d < a.min_distance) {
        a.min_distance = d;
        worst = static_cast<std::size_t>(x);
      }
    }
    a.margin = a.min_distance - res.stages[t].eta_prime / 2.0;
    if (!(a.margin > 0.0))
      throw CertificateError("line-avoiding", stage_location(t) + " point " + std::to_string(worst), a.margin);
    res.avoided.push_back(std::move(a));
  }
  const auto [margin, pair] = injectivity_margin(res.f);
  res.injectivity_margin = space.size() == 1 ? kInf : margin;
  res.closest_pair = pair;
  if (!(res.injectivity_margin > 0.0))
    throw CertificateError("injectivity",
                           "points " + std::to_string(pair.first) + "," + std::to_string(pair.second), margin);
  return res;
}

}  // namespace dimlab
