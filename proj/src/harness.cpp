#include "dimlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "dimlab/combinatorics.hpp"
#include "dimlab/covers.hpp"
#include "dimlab/error.hpp"
#include "dimlab/geometry.hpp"

namespace dimlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExact = 1e-12;
constexpr double kFeasibility = 1e-9;

Eigen::VectorXd row(const ImageMap& f, std::size_t x) { return f.row(static_cast<Eigen::Index>(x)).transpose(); }

// Accumulates the worst case of one named check.
class Tracker {
 public:
  Tracker(std::string name, std::optional<std::size_t> stage) {
    c_.name = std::move(name);
    c_.stage = stage;
    c_.margin = kInf;
  }

  // Records `margin` (pass iff ok) and keeps the location of the smallest one.
  void observe(double margin, bool ok, std::vector<std::size_t> points = {},
               std::vector<std::size_t> subset = {}) {
    const bool worse = !ok ? (c_.pass || margin < c_.margin) : (c_.pass && margin < c_.margin);
    if (worse) {
      c_.margin = margin;
      c_.points = std::move(points);
      c_.subset = std::move(subset);
    }
    c_.pass = c_.pass && ok;
  }

  CertificateCheck done() && { return std::move(c_); }

 private:
  CertificateCheck c_;
};

double max_abs_diff(const ImageMap& a, const ImageMap& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return kInf;
  return a.rows() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

// Smallest affine conditioning over all subsets of size 2..d+1.
std::pair<double, std::vector<std::size_t>> min_conditioning(const std::vector<Eigen::VectorXd>& pts) {
  if (pts.size() < 2) return {kInf, {}};
  const std::size_t d = static_cast<std::size_t>(pts[0].size());
  double best = kInf;
  std::vector<std::size_t> where;
  std::vector<Eigen::VectorXd> buf;
  for (std::size_t size = 2; size <= std::min(pts.size(), d + 1); ++size)
    for (Combinations c(pts.size(), size); !c.done(); c.next()) {
      buf.clear();
      for (std::size_t i : c.current()) buf.push_back(pts[i]);
      const double v = affine_conditioning(buf);
      if (v < best) {
        best = v;
        where = c.current();
      }
    }
  return {best, where};
}

std::vector<Eigen::VectorXd> anchor_targets(const Hyperplane& plane, int n) {
  const AffineConstraint c = plane.constraint();
  Eigen::VectorXd base = c.origin;
  for (Eigen::Index j = 0; j < c.basis.cols(); ++j) base += 0.5 * c.basis.col(j);
  std::vector<Eigen::VectorXd> out;
  for (int j = 0; j <= n; ++j) {
    Eigen::VectorXd p = base;
    if (j > 0) p += 0.25 * c.basis.col(j - 1);
    out.push_back(std::move(p));
  }
  return out;
}

struct Recomputed {
  double eta = 0.0;
  double eta_prime = 0.0;
  bool eta_ok = true;
  bool eta_prime_ok = true;
  std::vector<std::size_t> eta_subset;
  std::vector<std::size_t> eta_prime_subset;
};

Recomputed recompute_separation(const StageRecord& s, int n) {
  Recomputed r;
  try {
    r.eta = eta(s.vertices, n);
  } catch (const GeneralPositionError& e) {
    r.eta_ok = false;
    r.eta_subset = e.subset();
  }
  try {
    r.eta_prime = eta_prime(s.vertices, s.plane, n);
  } catch (const GeneralPositionError& e) {
    r.eta_prime_ok = false;
    r.eta_prime_subset = e.subset();
  }
  return r;
}

void check_stage_shape(const StageRecord& s, std::size_t npts, std::size_t dim) {
  const auto where = " at stage " + std::to_string(s.t);
  if (static_cast<std::size_t>(s.f_before.rows()) != npts || static_cast<std::size_t>(s.f_before.cols()) != dim ||
      static_cast<std::size_t>(s.f_after.rows()) != npts || static_cast<std::size_t>(s.f_after.cols()) != dim)
    throw InputError("map of the wrong shape" + where);
  if (s.cover_u.point_count() != npts) throw InputError("cover on the wrong sample" + where);
  if (s.vertices.size() != s.cover_u.size() || s.chosen_points.size() != s.cover_u.size())
    throw InputError("one vertex and one chosen point per member expected" + where);
  for (const auto& z : s.vertices)
    if (static_cast<std::size_t>(z.size()) != dim) throw InputError("vertex of the wrong dimension" + where);
  for (const auto& p : s.anchors)
    if (static_cast<std::size_t>(p.size()) != dim) throw InputError("anchor of the wrong dimension" + where);
  for (std::size_t x : s.chosen_points)
    if (x >= npts) throw InputError("chosen point out of range" + where);
  if (s.plane.ambient_dim != dim || s.plane.coords.size() != (dim + 1) / 2 ||
      s.plane.values.size() != s.plane.coords.size())
    throw InputError("hyperplane of the wrong shape" + where);
  for (std::size_t c : s.plane.coords)
    if (c >= dim) throw InputError("hyperplane coordinate out of range" + where);
  for (const Rational& q : s.plane.values)
    if (q.den <= 0 || q.num < 0 || q.num > q.den) throw InputError("hyperplane value outside [0,1]" + where);
  if (!(s.delta > 0.0)) throw InputError("non-positive delta" + where);
}

}  // namespace

std::string CertificateCheck::location() const {
  std::string out;
  if (stage) out = "stage " + std::to_string(*stage);
  if (!points.empty()) {
    out += out.empty() ? "" : ", ";
    out += points.size() == 1 ? "point " : "points ";
    for (std::size_t i = 0; i < points.size(); ++i) out += (i ? "," : "") + std::to_string(points[i]);
  }
  if (!subset.empty()) {
    out += out.empty() ? "" : ", ";
    out += "subset {";
    for (std::size_t i = 0; i < subset.size(); ++i) out += (i ? "," : "") + std::to_string(subset[i]);
    out += "}";
  }
  return out.empty() ? "global" : out;
}

bool CertificateReport::overall() const {
  return std::all_of(checks.begin(), checks.end(), [](const CertificateCheck& c) { return c.pass; });
}

const CertificateCheck* CertificateReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

CertificateReport verify_result(const EmbeddingResult& r, const SampledSpace& space, int n) {
  if (n < 0 || r.n != n) throw InputError("result was computed for a different n");
  if (r.stages.empty()) throw InputError("result has no stages");
  const std::size_t npts = space.size();
  const std::size_t dim = 2 * static_cast<std::size_t>(n) + 1;
  const std::size_t T = r.stages.size();
  if (static_cast<std::size_t>(r.f.rows()) != npts || static_cast<std::size_t>(r.f.cols()) != dim)
    throw InputError("final map of the wrong shape");
  for (const auto& s : r.stages) check_stage_shape(s, npts, dim);

  const BallSchedule schedule = ball_schedule(space, r.radii_depth, T);
  const std::vector<Hyperplane> planes = enumerate_hyperplanes(n, T);
  std::vector<Recomputed> sep;
  for (const auto& s : r.stages) sep.push_back(recompute_separation(s, n));

  CertificateReport report;
  auto add = [&](Tracker&& t) { report.checks.push_back(std::move(t).done()); };

  for (std::size_t t = 0; t < T; ++t) {
    const StageRecord& s = r.stages[t];
    const ImageMap& next = t + 1 < T ? r.stages[t + 1].f_before : r.f;

    {
      Tracker c("stage-index", t);
      const bool ok = s.t == t && s.pair == schedule.pairs[t] && s.plane == planes[t];
      c.observe(ok ? 0.0 : -1.0, ok);
      add(std::move(c));
    }
    {
      Tracker c("map-chain", t);
      const ImageMap& expected = t == 0 ? initial_map(space, dim) : r.stages[t - 1].f_after;
      const double diff = max_abs_diff(s.f_before, expected);
      c.observe(kExact - diff, diff <= kExact);
      const double diff_next = max_abs_diff(s.f_after, next);
      c.observe(kExact - diff_next, diff_next <= kExact);
      add(std::move(c));
    }
    {
      Tracker c("unit-cube", t);
      for (std::size_t x = 0; x < npts; ++x) {
        const double lo = s.f_after.row(static_cast<Eigen::Index>(x)).minCoeff();
        const double hi = s.f_after.row(static_cast<Eigen::Index>(x)).maxCoeff();
        const double m = std::min(lo, 1.0 - hi) + kExact;
        c.observe(m, m >= 0.0, {x});
      }
      add(std::move(c));
    }
    {
      Tracker cov("cover-order", t);
      if (auto x = s.cover_u.first_uncovered()) cov.observe(-1.0, false, {*x});
      const int order = order_of(s.cover_u);
      cov.observe(static_cast<double>(n - order), order <= n);
      add(std::move(cov));

      Tracker star("star-refinement", t);
      const Cover vw = meet(pair_cover(space, schedule.balls, s.pair), grid_preimage_cover(s.f_before, s.delta));
      std::optional<std::size_t> bad;
      for (std::size_t m = 0; m < s.cover_u.size() && !bad; ++m) {
        const PointSet st = star_of_member(m, s.cover_u);
        bool inside = false;
        for (std::size_t k = 0; k < vw.size() && !inside; ++k) inside = st.is_subset_of(vw.support(k));
        if (!inside) bad = m;
      }
      if (bad)
        star.observe(-1.0, false, s.cover_u.support(*bad).indices());
      else
        star.observe(0.0, true);
      add(std::move(star));
    }
    {
      Tracker c("vertex-choice", t);
      for (std::size_t i = 0; i < s.cover_u.size(); ++i) {
        const auto support = s.cover_u.support(i).indices();
        const std::size_t x = s.chosen_points[i];
        if (support.empty() || support.front() != x) {
          c.observe(-1.0, false, {x}, {i});
          continue;
        }
        const double m = s.delta - (s.vertices[i] - row(s.f_before, x)).norm();
        c.observe(m, m > 0.0, {x}, {i});
      }
      add(std::move(c));
    }
    {
      Tracker c("anchors", t);
      const auto targets = anchor_targets(s.plane, n);
      if (s.anchors.size() != targets.size()) c.observe(-1.0, false);
      for (std::size_t j = 0; j < std::min(targets.size(), s.anchors.size()); ++j) {
        const double off = s.plane.max_violation(s.anchors[j]);
        c.observe(kExact - off, off <= kExact, {}, {s.vertices.size() + j});
        const double m = s.delta - (s.anchors[j] - targets[j]).norm();
        c.observe(m, m > 0.0, {}, {s.vertices.size() + j});
      }
      add(std::move(c));
    }
    {
      Tracker c("general-position", t);
      std::vector<Eigen::VectorXd> family = s.vertices;
      family.insert(family.end(), s.anchors.begin(), s.anchors.end());
      const auto [cond, subset] = min_conditioning(family);
      c.observe(cond - kRankTolerance, cond > kRankTolerance, {}, subset);
      if (!sep[t].eta_ok) c.observe(-kRankTolerance, false, {}, sep[t].eta_subset);
      if (!sep[t].eta_prime_ok) c.observe(-kRankTolerance, false, {}, sep[t].eta_prime_subset);
      add(std::move(c));
    }

    // kappa: weights, image and convex-hull feasibility.
    Tracker weights("kappa-weights", t);
    Tracker image("kappa-image", t);
    Tracker hull("kappa-hull", t);
    for (std::size_t x = 0; x < npts; ++x) {
      const auto act = s.cover_u.active(x);
      if (act.empty()) {
        weights.observe(-1.0, false, {x});
        continue;
      }
      double total = 0.0;
      for (std::size_t i : act) total += s.cover_u[i][x];
      double sum = 0.0;
      Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
      for (std::size_t i : act) {
        const double lambda = s.cover_u[i][x] / total;
        sum += lambda;
        y += lambda * s.vertices[i];
      }
      weights.observe(kExact - std::abs(sum - 1.0), std::abs(sum - 1.0) <= kExact, {x});
      const double diff = (y - row(s.f_after, x)).cwiseAbs().maxCoeff();
      image.observe(kExact - diff, diff <= kExact, {x});

      // Barycentric coordinates of f_{t+1}(x) with respect to the active vertices.
      const auto k = static_cast<Eigen::Index>(act.size());
      Eigen::MatrixXd m(static_cast<Eigen::Index>(dim) + 1, k);
      for (Eigen::Index j = 0; j < k; ++j) {
        m.col(j).head(static_cast<Eigen::Index>(dim)) = s.vertices[act[static_cast<std::size_t>(j)]];
        m(static_cast<Eigen::Index>(dim), j) = 1.0;
      }
      Eigen::VectorXd b(static_cast<Eigen::Index>(dim) + 1);
      b.head(static_cast<Eigen::Index>(dim)) = row(s.f_after, x);
      b(static_cast<Eigen::Index>(dim)) = 1.0;
      const Eigen::VectorXd lambda = m.colPivHouseholderQr().solve(b);
      const double residual = (m * lambda - b).norm();
      const double low = lambda.minCoeff();
      if (residual > kFeasibility)
        hull.observe(-residual, false, {x});
      else
        hull.observe(low + kExact, low >= -kExact, {x});
    }
    add(std::move(weights));
    add(std::move(image));
    add(std::move(hull));

    {
      Tracker c("uniform-limit", t);
      for (std::size_t x = 0; x < npts; ++x) {
        const double m = 3.0 * s.delta - (row(s.f_after, x) - row(s.f_before, x)).norm();
        c.observe(m, m > 0.0, {x});
      }
      add(std::move(c));
    }
    {
      Tracker c("schedule", t);
      // delta_t against stage t-1, and delta_T against the last stage.
      auto expect = [&](double actual, std::size_t from) {
        const StageRecord& p = r.stages[from];
        const double expected = std::min({p.delta, sep[from].eta / 8.0, sep[from].eta_prime / 4.0}) / 3.0;
        if (actual != expected)
          c.observe(-std::abs(actual - expected), false);
        else
          c.observe(p.delta / 3.0 - actual, actual <= p.delta / 3.0 && actual > 0.0);
      };
      if (t == 0)
        c.observe(s.delta == 0.25 ? 0.0 : -std::abs(s.delta - 0.25), s.delta == 0.25);
      else
        expect(s.delta, t - 1);
      if (t + 1 == T) expect(s.delta_next, t);
      add(std::move(c));
    }
    {
      Tracker c("line-avoiding-step", t);
      for (std::size_t x = 0; x < npts; ++x) {
        const double m = s.plane.distance(row(s.f_after, x)) - sep[t].eta_prime;
        c.observe(m, m >= -kExact, {x});
      }
      add(std::move(c));
    }
  }

  // Claims about the truncated limit f = f_T.
  for (std::size_t t = 0; t < T; ++t) {
    const StageRecord& s = r.stages[t];
    double tail = 0.0;
    for (std::size_t u = t + 1; u < T; ++u) tail += 3.0 * r.stages[u].delta;
    const double next_delta = t + 1 < T ? r.stages[t + 1].delta : s.delta_next;

    Tracker avoid("line-avoiding", t);
    Tracker bound("line-avoiding-tail", t);
    for (std::size_t x = 0; x < npts; ++x) {
      const double d = s.plane.distance(row(r.f, x));
      avoid.observe(d - sep[t].eta_prime / 2.0, d > sep[t].eta_prime / 2.0, {x});
      const double m = d - (sep[t].eta_prime - tail);
      bound.observe(m, m >= -kExact, {x});
    }
    bound.observe(4.5 * next_delta - tail, tail <= 4.5 * next_delta);
    add(std::move(avoid));
    add(std::move(bound));

    Tracker vmap("v-mapping", t);
    const Cover v = pair_cover(space, schedule.balls, s.pair);
    const double radius = sep[t].eta / 4.0;
    for (std::size_t x = 0; x < npts; ++x) {
      // Best member of V_t: margin = distance to the nearest image outside it.
      double best = -kInf;
      std::vector<std::size_t> witness;
      for (std::size_t k = 0; k < v.size(); ++k) {
        double m = kInf;
        std::size_t outside = x;
        for (std::size_t y = 0; y < npts; ++y) {
          if (v[k].positive(y)) continue;
          const double gap = (row(r.f, y) - row(r.f, x)).norm() - radius;
          if (gap < m) {
            m = gap;
            outside = y;
          }
        }
        if (m > best) {
          best = m;
          witness = {x, outside};
        }
      }
      vmap.observe(best, best >= 0.0, witness);
    }
    add(std::move(vmap));
  }

  {
    Tracker c("injectivity", std::nullopt);
    if (npts > 1) {
      const auto [m, pair] = injectivity_margin(r.f);
      c.observe(m, m > 0.0, {pair.first, pair.second});
    } else {
      c.observe(kInf, true);
    }
    add(std::move(c));
  }
  return report;
}

CertificateReport verify_nobeling_membership(const EmbeddingResult& r, std::size_t stages) {
  CertificateReport report;
  const std::size_t T = std::min(stages, r.stages.size());
  const double root = std::sqrt(static_cast<double>(r.n) + 1.0);
  for (std::size_t t = 0; t < T; ++t) {
    const StageRecord& s = r.stages[t];
    const Recomputed sep = recompute_separation(s, r.n);
    const double threshold = sep.eta_prime / (2.0 * root);
    Tracker c("nobeling-membership", t);
    if (!sep.eta_prime_ok) c.observe(-kRankTolerance, false, {}, sep.eta_prime_subset);
    for (Eigen::Index x = 0; x < r.f.rows(); ++x) {
      const double m = s.plane.max_violation(r.f.row(x).transpose()) - threshold;
      c.observe(m, m > 0.0, {static_cast<std::size_t>(x)});
    }
    report.checks.push_back(std::move(c).done());
  }
  return report;
}

OpenImageCertificate open_image_certificate(const EmbeddingResult& r, const std::vector<std::size_t>& u,
                                            std::span<const Ball> balls, const SampledSpace& space) {
  const std::size_t npts = space.size();
  if (static_cast<std::size_t>(r.f.rows()) != npts) throw InputError("result does not fit the sample");
  PointSet in_u(npts);
  for (std::size_t b : u) {
    if (b >= balls.size()) throw InputError("ball " + std::to_string(b) + " is not in the enumerated list");
    in_u |= ball_cozero(space, balls[b]).support();
  }

  OpenImageCertificate cert;
  const auto dim = static_cast<std::size_t>(r.f.cols());
  if (npts > 0 && in_u.count() == npts) {
    cert.balls.emplace_back(Eigen::VectorXd(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), 0.5)),
                            std::sqrt(static_cast<double>(dim)));
    cert.stage.emplace_back();
  } else if (!u.empty()) {
    const std::set<std::size_t> outer_set(u.begin(), u.end());
    std::vector<PointSet> ball_support;
    for (const Ball& b : balls) ball_support.push_back(ball_cozero(space, b).support());
    for (std::size_t t = 0; t < r.stages.size(); ++t) {
      const StageRecord& s = r.stages[t];
      if (!outer_set.count(s.pair.outer) || s.pair.outer >= balls.size() || s.pair.inner >= balls.size())
        continue;
      const Recomputed sep = recompute_separation(s, r.n);
      if (!sep.eta_ok) continue;
      const double radius = std::min(sep.eta / 4.0, std::sqrt(static_cast<double>(dim)));
      const DeltaGrid grid(dim, radius);
      std::set<std::vector<std::int64_t>> tried;
      for (std::size_t x = 0; x < npts; ++x) {
        std::vector<std::int64_t> key(dim);
        for (std::size_t i = 0; i < dim; ++i)
          key[i] = std::clamp<std::int64_t>(
              static_cast<std::int64_t>(std::llround(r.f(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(i)) /
                                                     grid.spacing)),
              0, grid.last);
        if (!tried.insert(key).second) continue;
        const Eigen::VectorXd g = grid.center(key);
        PointSet pre(npts);
        for (std::size_t y = 0; y < npts; ++y)
          if ((row(r.f, y) - g).norm() < radius) pre.insert(y);
        bool keep = false;
        for (std::size_t b = 0; b < balls.size() && !keep; ++b)
          keep = !ball_support[b].empty() && ball_support[b].is_subset_of(pre) &&
                 formally_included(space, balls[b], balls[s.pair.inner]);
        if (keep) {
          cert.balls.emplace_back(g, radius);
          cert.stage.emplace_back(t);
        }
      }
    }
  }

  for (std::size_t x = 0; x < npts; ++x) {
    const Eigen::VectorXd y = row(r.f, x);
    bool hit = false;
    for (const Ball& j : cert.balls)
      if ((std::get<Eigen::VectorXd>(j.center) - y).norm() < j.radius) {
        hit = true;
        break;
      }
    if (in_u.contains(x) && !hit) cert.uncovered.push_back(x);
    if (!in_u.contains(x) && hit) cert.spurious.push_back(x);
  }
  return cert;
}

}  // namespace dimlab
