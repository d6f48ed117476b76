#include <doctest.h>

#include <numeric>

#include "dimlab/covers.hpp"
#include "dimlab/embedding.hpp"
#include "dimlab/error.hpp"
#include "support.hpp"

using namespace dimlab;
using testing_support::Rng;

namespace {

using Points = std::vector<Eigen::VectorXd>;

struct RankedPlane {
  std::int64_t max_den;
  std::vector<std::size_t> coords;
  std::vector<std::pair<std::int64_t, std::int64_t>> ranks;  // (den, num) per value
};

// Independent enumeration: every plane with denominators <= q, sorted.
std::vector<RankedPlane> sorted_planes(int n, std::int64_t q) {
  const std::size_t dim = 2 * static_cast<std::size_t>(n) + 1;
  std::vector<std::pair<std::int64_t, std::int64_t>> rats;
  for (std::int64_t den = 1; den <= q; ++den)
    for (std::int64_t num = 0; num <= den; ++num)
      if (std::gcd(num, den) == 1) rats.push_back({den, num});
  std::vector<RankedPlane> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dim); ++mask) {
    if (__builtin_popcountll(mask) != n + 1) continue;
    std::vector<std::size_t> coords;
    for (std::size_t i = 0; i < dim; ++i)
      if ((mask >> i) & 1U) coords.push_back(i);
    std::vector<std::size_t> idx(coords.size(), 0);
    while (true) {
      RankedPlane p{0, coords, {}};
      for (std::size_t i : idx) {
        p.ranks.push_back(rats[i]);
        p.max_den = std::max(p.max_den, rats[i].first);
      }
      out.push_back(p);
      std::size_t pos = idx.size();
      while (pos > 0 && idx[pos - 1] + 1 == rats.size()) idx[--pos] = 0;
      if (pos == 0) break;
      ++idx[pos - 1];
    }
  }
  std::sort(out.begin(), out.end(), [](const RankedPlane& a, const RankedPlane& b) {
    return std::tie(a.max_den, a.coords, a.ranks) < std::tie(b.max_den, b.coords, b.ranks);
  });
  return out;
}

// Unique barycentric weights of y w.r.t. affinely independent vertices.
Eigen::VectorXd barycentric(const Points& z, const Eigen::VectorXd& y) {
  const auto d = y.size();
  const auto k = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXd a(d + 1, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    a.block(0, j, d, 1) = z[static_cast<std::size_t>(j)];
    a(d, j) = 1.0;
  }
  Eigen::VectorXd rhs(d + 1);
  rhs << y, 1.0;
  return a.fullPivLu().solve(rhs);
}

SampledSpace eight_points() { return testing_support::interval_sample(8); }

double max_row_distance(const ImageMap& a, const ImageMap& b) {
  double m = 0.0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) m = std::max(m, (a.row(r) - b.row(r)).norm());
  return m;
}

}  // namespace

TEST_CASE("first hyperplane and distinct prefixes") {
  const auto first = enumerate_hyperplanes(1, 1);
  REQUIRE(first.size() == 1);
  CHECK(first[0].ambient_dim == 3);
  CHECK(first[0].coords == std::vector<std::size_t>{0, 1});
  CHECK(first[0].values == std::vector<Rational>{{0, 1}, {0, 1}});

  const auto planes = enumerate_hyperplanes(1, 50);
  REQUIRE(planes.size() == 50);
  for (std::size_t i = 0; i < planes.size(); ++i) {
    CHECK(planes[i].coords.size() == 2);
    CHECK(std::is_sorted(planes[i].coords.begin(), planes[i].coords.end()));
    CHECK(planes[i].coords[0] != planes[i].coords[1]);
    for (const auto& v : planes[i].values) {
      CHECK(v.num >= 0);
      CHECK(v.num <= v.den);
    }
    for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(planes[i] == planes[j]);
  }
  CHECK(enumerate_hyperplanes(1, 50) == planes);
}

TEST_CASE("hyperplane order matches a sorted enumeration") {
  for (int n : {0, 1, 2}) {
    const auto oracle = sorted_planes(n, 3);
    const std::size_t count = std::min<std::size_t>(oracle.size(), 400);
    const auto planes = enumerate_hyperplanes(n, count);
    for (std::size_t i = 0; i < count; ++i) {
      CHECK(planes[i].coords == oracle[i].coords);
      for (std::size_t c = 0; c < planes[i].values.size(); ++c) {
        CHECK(planes[i].values[c].den == oracle[i].ranks[c].first);
        CHECK(planes[i].values[c].num == oracle[i].ranks[c].second);
      }
    }
  }
}

TEST_CASE("hyperplane distances") {
  const auto plane = enumerate_hyperplanes(1, 1)[0];
  const Eigen::Vector3d p(0.3, 0.4, 0.9);
  CHECK(plane.distance(p) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(plane.max_violation(p) == doctest::Approx(0.4).epsilon(1e-15));
  const Points line{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0, 0, 1)};
  CHECK(plane.distance(p) == doctest::Approx(testing_support::lsq_hull_distance({p}, line)).epsilon(1e-12));
  CHECK(affine_distance(plane.flat(), AffineFlat::hull(Points{p})) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("kappa examples") {
  std::vector<CozeroFunction> m{CozeroFunction({1.0, 0.5, 0.0}), CozeroFunction({0.0, 0.5, 0.25})};
  const Cover c(3, std::move(m));
  const Points z{Eigen::Vector2d(0.1, 0.2), Eigen::Vector2d(0.9, 0.6)};
  const auto k = kappa_map(c, z);
  CHECK((k.images.row(0).transpose() - z[0]).norm() == 0.0);
  CHECK((k.images.row(2).transpose() - z[1]).norm() == 0.0);
  CHECK((k.images.row(1).transpose() - 0.5 * (z[0] + z[1])).norm() < 1e-15);
  CHECK(active_indices(c, 1) == std::vector<std::size_t>{0, 1});
  CHECK(active_indices(c, 2) == std::vector<std::size_t>{1});

  const Cover single(2, {CozeroFunction({0.4, 1.0})});
  CHECK(active_indices(single, 0) == std::vector<std::size_t>{0});

  const Cover hole(3, {CozeroFunction({1.0, 0.0, 0.0})});
  CHECK(active_indices(hole, 1).empty());
  try {
    kappa_map(hole, Points{Eigen::Vector2d(0, 0)});
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(e.point() == std::optional<std::size_t>(1));
  }
}

TEST_CASE("kappa lands in the hull of the active vertices") {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t s = 1 + rng.below(5);
    const Cover c = testing_support::random_value_cover(rng, 10, s, 0.5);
    Points z;
    for (std::size_t i = 0; i < s; ++i) z.push_back(Eigen::VectorXd::NullaryExpr(5, [&] { return rng.uniform(); }));
    const auto k = kappa_map(c, z);
    for (std::size_t x = 0; x < 10; ++x) {
      double sum = 0.0;
      for (const auto& [i, w] : k.weights[x]) sum += w;
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      Points act;
      for (std::size_t i : active_indices(c, x)) act.push_back(z[i]);
      const Eigen::VectorXd y = k.images.row(static_cast<Eigen::Index>(x)).transpose();
      const Eigen::VectorXd lambda = barycentric(act, y);
      CHECK(lambda.minCoeff() >= -1e-12);
      Eigen::VectorXd back = Eigen::VectorXd::Zero(5);
      for (std::size_t j = 0; j < act.size(); ++j) back += lambda(static_cast<Eigen::Index>(j)) * act[j];
      CHECK((back - y).norm() <= 1e-12);
    }
  }
}

TEST_CASE("eta on explicit configurations") {
  const Points two{Eigen::Vector2d(0.1, 0.1), Eigen::Vector2d(0.4, 0.5)};
  CHECK(eta(two, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::isinf(eta(Points{Eigen::Vector2d(0.1, 0.1)}, 0)));

  const Points collinear{Eigen::Vector2d(0, 0), Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(1, 1)};
  CHECK_THROWS_AS(eta(collinear, 1), GeneralPositionError);
}

TEST_CASE("eta matches exhaustive enumeration of disjoint hull pairs") {
  Rng rng(67);
  for (int trial = 0; trial < 30; ++trial) {
    Points z;
    for (int i = 0; i < 4; ++i) z.push_back(Eigen::Vector3d(rng.uniform(), rng.uniform(), rng.uniform()));
    double best = INFINITY;
    for (unsigned a = 1; a < 16; ++a)
      for (unsigned b = 1; b < 16; ++b) {
        if ((a & b) != 0 || __builtin_popcount(a) > 2 || __builtin_popcount(b) > 2) continue;
        Points pa, pb;
        for (unsigned i = 0; i < 4; ++i) {
          if ((a >> i) & 1U) pa.push_back(z[i]);
          if ((b >> i) & 1U) pb.push_back(z[i]);
        }
        best = std::min(best, testing_support::lsq_hull_distance(pa, pb));
      }
    CHECK(eta(z, 1) == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("eta prime") {
  Hyperplane zero;
  zero.ambient_dim = 1;
  zero.coords = {0};
  zero.values = {{0, 1}};
  CHECK(eta_prime(Points{Eigen::VectorXd::Constant(1, 0.3)}, zero, 0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK_THROWS_AS(eta_prime(Points{Eigen::VectorXd::Constant(1, 0.0)}, zero, 0), GeneralPositionError);

  const auto plane = enumerate_hyperplanes(1, 1)[0];
  const Points line{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0, 0, 1)};
  Rng rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    Points z;
    for (int i = 0; i < 3; ++i) z.push_back(Eigen::Vector3d(rng.uniform(), rng.uniform(), rng.uniform()));
    double best = INFINITY;
    for (std::size_t i = 0; i < 3; ++i) {
      best = std::min(best, testing_support::lsq_hull_distance({z[i]}, line));
      for (std::size_t j = i + 1; j < 3; ++j)
        best = std::min(best, testing_support::lsq_hull_distance({z[i], z[j]}, line));
    }
    CHECK(eta_prime(z, plane, 1) == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("initial map") {
  const auto line = eight_points();
  const ImageMap f = initial_map(line, 3);
  for (Eigen::Index x = 0; x < 8; ++x) {
    CHECK(f(x, 0) == doctest::Approx(static_cast<double>(x) / 7.0).epsilon(1e-15));
    CHECK(f(x, 1) == 0.5);
    CHECK(f(x, 2) == 0.5);
  }

  Rng rng(73);
  const auto cloud = testing_support::random_sample(rng, 7, 2);
  const auto metric = SampledSpace::from_distances(cloud.distances(), cloud.mesh());
  const ImageMap g = initial_map(metric, 3);
  CHECK(g.minCoeff() >= 0.0);
  CHECK(g.maxCoeff() <= 1.0);
  const double ratio = (g.row(0) - g.row(1)).norm() / cloud.distance(0, 1);
  for (Eigen::Index a = 0; a < 7; ++a)
    for (Eigen::Index b = a + 1; b < 7; ++b)
      CHECK((g.row(a) - g.row(b)).norm() ==
            doctest::Approx(ratio * cloud.distance(static_cast<std::size_t>(a), static_cast<std::size_t>(b))).epsilon(1e-9));
}

TEST_CASE("delta grid balls cover the cube") {
  Rng rng(79);
  for (std::size_t dim : {1U, 3U, 5U}) {
    const DeltaGrid grid(dim, 0.2);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd y = Eigen::VectorXd::NullaryExpr(static_cast<Eigen::Index>(dim), [&] { return rng.uniform(); });
      const auto keys = grid.keys_near(y);
      CHECK_FALSE(keys.empty());
      for (const auto& k : keys) CHECK((grid.center(k) - y).norm() < 0.2);
    }
  }
}

TEST_CASE("grid preimage cover") {
  Rng rng(83);
  ImageMap f(9, 3);
  for (Eigen::Index r = 0; r < 9; ++r)
    for (Eigen::Index c = 0; c < 3; ++c) f(r, c) = rng.uniform();
  const Cover w = grid_preimage_cover(f, 0.15);
  CHECK(testing_support::brute_covers(w));
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK_FALSE(w[i].empty());
    for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(w.support(i) == w.support(j));
    // every member is the preimage of one ball of radius delta
    const auto pts = w.support(i).indices();
    for (std::size_t a : pts)
      for (std::size_t b : pts) CHECK((f.row(static_cast<Eigen::Index>(a)) - f.row(static_cast<Eigen::Index>(b))).norm() < 0.3);
  }
}

TEST_CASE("stage on a one-point space") {
  Eigen::MatrixXd c(1, 1);
  c << 0.5;
  const auto one = SampledSpace::from_coordinates(c, 0.1);
  const auto oracle = make_separator_oracle(one);
  const auto r = nobeling_embed(one, 1, 2, oracle, 0);
  REQUIRE(r.stages.size() == 2);
  for (const auto& st : r.stages) {
    REQUIRE(st.vertices.size() == 1);
    CHECK((st.f_after.row(0).transpose() - st.vertices[0]).norm() == 0.0);
    CHECK(st.contraction < 3.0 * st.delta);
  }
  CHECK(std::isinf(r.injectivity_margin));
  for (const auto& a : r.avoided) CHECK(a.min_distance == doctest::Approx(a.plane.distance(r.f.row(0).transpose())).epsilon(1e-15));
}

TEST_CASE("one stage on eight points of the interval") {
  const auto line = eight_points();
  const auto oracle = make_separator_oracle(line);
  const auto schedule = ball_schedule(line, 4, 1);
  REQUIRE_FALSE(schedule.pairs.empty());
  const auto plane = enumerate_hyperplanes(1, 1)[0];
  const StageContext ctx{line, schedule.balls, 1, oracle, 0, {}};
  const StageState s0{0, initial_map(line, 3), 0.25};
  const StageRecord r = embedding_stage(s0, schedule.pairs[0], plane, ctx);

  CHECK(max_row_distance(r.f_before, r.f_after) < 3.0 * r.delta);
  CHECK(r.delta_next <= r.delta / 3.0);
  CHECK(r.delta_next == std::min({r.delta, r.eta / 8.0, r.eta_prime / 4.0}) / 3.0);
  CHECK(testing_support::brute_order(r.cover_u) <= 1);
  CHECK(testing_support::brute_covers(r.cover_u));
  const Cover vw = meet(pair_cover(line, schedule.balls, schedule.pairs[0]), grid_preimage_cover(r.f_before, r.delta));
  CHECK(testing_support::brute_star_refines(r.cover_u, vw));
  for (std::size_t i = 0; i < r.cover_u.size(); ++i) {
    CHECK(r.chosen_points[i] == r.cover_u.support(i).indices().front());
    CHECK((r.vertices[i] - r.f_before.row(static_cast<Eigen::Index>(r.chosen_points[i])).transpose()).norm() < r.delta);
  }
  REQUIRE(r.anchors.size() == 2);
  for (const auto& p : r.anchors) CHECK(plane.max_violation(p) <= 1e-12);
  for (Eigen::Index x = 0; x < 8; ++x) CHECK(plane.distance(r.f_after.row(x).transpose()) >= r.eta_prime - 1e-12);
  CHECK(r.f_after.minCoeff() >= 0.0);
  CHECK(r.f_after.maxCoeff() <= 1.0);
}

TEST_CASE("two consecutive stages") {
  const auto line = eight_points();
  const auto oracle = make_separator_oracle(line);
  const auto schedule = ball_schedule(line, 4, 2);
  const auto planes = enumerate_hyperplanes(1, 2);
  const StageContext ctx{line, schedule.balls, 1, oracle, 0, {}};
  const StageRecord r0 = embedding_stage({0, initial_map(line, 3), 0.25}, schedule.pairs[0], planes[0], ctx);
  const StageRecord r1 = embedding_stage(next_state(r0), schedule.pairs[1], planes[1], ctx);
  CHECK(r1.t == 1);
  CHECK(max_row_distance(r0.f_after, r1.f_before) == 0.0);
  CHECK(r1.delta == r0.delta_next);
  CHECK(max_row_distance(r1.f_before, r1.f_after) < 3.0 * r1.delta);
  CHECK(r1.delta_next <= r1.delta / 3.0);
  CHECK(r1.delta <= r0.delta / 3.0);
}

TEST_CASE("too few stages to separate the sample is reported") {
  const auto line = eight_points();
  CHECK_THROWS_AS(nobeling_embed(line, 1, 2, make_separator_oracle(line), 0), CertificateError);
}

TEST_CASE("ball schedule deepens the radii when short of pairs") {
  const auto line = testing_support::interval_sample(3);
  const auto shallow = ball_schedule(line, 1, 1);
  CHECK_THROWS_AS(ball_schedule(line, 0, 1), InputError);
  CHECK(shallow.pairs.size() >= 1);
  const auto many = ball_schedule(line, 1, 40);
  CHECK(many.pairs.size() >= 40);
  CHECK(many.pairs == strict_inclusion_pairs(line, many.balls));
}

TEST_CASE("injectivity margin") {
  ImageMap f(3, 2);
  f << 0, 0, 1, 0, 0.1, 0.2;
  const auto [d, pair] = injectivity_margin(f);
  CHECK(d == doctest::Approx(std::sqrt(0.05)).epsilon(1e-15));
  CHECK(pair == std::pair<std::size_t, std::size_t>{0, 2});
  CHECK(std::isinf(injectivity_margin(ImageMap::Zero(1, 3)).first));
}
