// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "dimlab/covers.hpp"
#include "dimlab/dimension.hpp"
#include "dimlab/embedding.hpp"
#include "dimlab/geometry.hpp"
#include "dimlab/harness.hpp"
#include "dimlab/io.hpp"
#include "dimlab/nerve.hpp"
#include "support.hpp"

using namespace dimlab;
using testing_support::Rng;

namespace {

using Points = std::vector<Eigen::VectorXd>;

struct Outcome {
  std::size_t passed = 0;
  std::size_t total = 0;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = o.total > 0 && o.passed == o.total && (budget_s <= 0.0 || secs < budget_s);
  if (!ok) ++failures;
  std::printf("%s criterion %d %-22s %zu/%zu  %.3f s", ok ? "PASS" : "FAIL", id, title, o.passed, o.total, secs);
  if (budget_s > 0.0) std::printf(" (budget %.0f s)", budget_s);
  if (!o.detail.empty()) std::printf("  %s", o.detail.c_str());
  std::printf("\n");
  std::fflush(stdout);
}

std::vector<Cover> nerve_pool;

Cover random_ball_cover(Rng& rng, std::size_t points, std::size_t max_k) {
  const auto s = testing_support::random_sample(rng, points, 2);
  return testing_support::ball_cover(s, testing_support::random_covering_balls(rng, s, 1 + rng.below(max_k)));
}

Outcome shrinking_suite() {
  Rng rng(1001);
  Outcome o{0, 200, {}};
  for (std::size_t trial = 0; trial < o.total; ++trial) {
    const Cover c = random_ball_cover(rng, 20, 6);
    const auto r = closed_shrinking(c);
    nerve_pool.push_back(c);
    nerve_pool.push_back(r.open_shrink);
    bool ok = true;
    for (std::size_t x = 0; x < 20; ++x) {
      bool in_f = false;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const bool w = r.open_shrink[i][x] > 0.0;
        const bool f = r.closed[i].contains(x);
        const bool u = c[i][x] > 0.0;
        ok = ok && (!w || f) && (!f || u);
        in_f = in_f || f;
      }
      ok = ok && in_f;
    }
    o.passed += ok ? 1 : 0;
  }
  return o;
}

Outcome star_suite() {
  Rng rng(2002);
  Outcome o{0, 100, {}};
  for (std::size_t trial = 0; trial < o.total; ++trial) {
    const Cover c = random_ball_cover(rng, 20, 5);
    const auto r = star_refinement(c);
    nerve_pool.push_back(c);
    nerve_pool.push_back(r.cover);
    o.passed += testing_support::brute_covers(r.cover) && testing_support::brute_star_refines(r.cover, c) ? 1 : 0;
  }
  return o;
}

Outcome order_suite() {
  Rng rng(3003);
  Outcome o{0, 100, {}};
  for (std::size_t trial = 0; trial < o.total; ++trial) {
    const auto s = testing_support::random_sample(rng, 20, 2);
    const Cover c = testing_support::ball_cover(s, testing_support::random_covering_balls(rng, s, 1 + rng.below(6)));
    const int n = static_cast<int>(trial % 2);
    const Cover r = reduce_order(c, n, make_separator_oracle(s));
    nerve_pool.push_back(c);
    nerve_pool.push_back(r);
    bool refines = true;
    for (const auto& v : r) {
      bool inside = false;
      for (const auto& u : c) inside = inside || testing_support::inside(v, u);
      refines = refines && inside;
    }
    o.passed += testing_support::brute_covers(r) && refines && testing_support::brute_order(r) <= n ? 1 : 0;
  }
  return o;
}

Outcome nerve_suite() {
  Outcome o{0, nerve_pool.size(), {}};
  for (const auto& c : nerve_pool) o.passed += nerve_of(c).dimension() == order_of(c) ? 1 : 0;
  return o;
}

double worst_conditioning(const Points& pts) {
  const std::size_t d = static_cast<std::size_t>(pts[0].size());
  double worst = INFINITY;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << pts.size()); ++mask) {
    const int k = __builtin_popcountll(mask);
    if (k < 2 || static_cast<std::size_t>(k) > d + 1) continue;
    Points sub;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if ((mask >> i) & 1U) sub.push_back(pts[i]);
    worst = std::min(worst, testing_support::gram_conditioning(sub));
  }
  return worst;
}

Outcome general_position_suite() {
  Rng rng(5005);
  Outcome o{0, 100, {}};
  double worst = INFINITY;
  for (std::size_t trial = 0; trial < o.total; ++trial) {
    const auto d = static_cast<Eigen::Index>(1 + rng.below(5));
    const std::size_t k = 1 + rng.below(8);
    // targets on a random line through the cube, some repeated
    const Eigen::VectorXd a = Eigen::VectorXd::NullaryExpr(d, [&] { return rng.uniform(); });
    const Eigen::VectorXd b = Eigen::VectorXd::NullaryExpr(d, [&] { return rng.uniform(); });
    Points targets;
    for (std::size_t i = 0; i < k; ++i) {
      if (i > 0 && rng.below(4) == 0)
        targets.push_back(targets[rng.below(i)]);
      else
        targets.push_back(a + rng.uniform() * (b - a));
    }
    GeneralPositionOptions opt;
    opt.seed = trial;
    const Points out = general_position(targets, 1e-2, {}, opt);
    bool near = true;
    for (std::size_t i = 0; i < k; ++i) near = near && (out[i] - targets[i]).norm() < 1e-2;
    const double c = k >= 2 ? worst_conditioning(out) : INFINITY;
    worst = std::min(worst, c);
    o.passed += near && c > 1e-9 ? 1 : 0;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "min sigma %.3g", worst);
  o.detail = buf;
  return o;
}

Outcome kappa_suite() {
  Rng rng(6006);
  Outcome o{0, 100, {}};
  double worst_sum = 0.0, worst_res = 0.0;
  for (std::size_t trial = 0; trial < o.total; ++trial) {
    const std::size_t s = 1 + rng.below(5);
    const Cover c = testing_support::random_value_cover(rng, 12, s, 0.5);
    Points z;
    for (std::size_t i = 0; i < s; ++i) z.push_back(Eigen::VectorXd::NullaryExpr(5, [&] { return rng.uniform(); }));
    const auto k = kappa_map(c, z);
    bool ok = true;
    for (std::size_t x = 0; x < 12; ++x) {
      double sum = 0.0;
      for (const auto& [i, w] : k.weights[x]) sum += w;
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
      ok = ok && std::abs(sum - 1.0) <= 1e-12;
      // feasibility: unique barycentric solve against the active vertices
      std::vector<std::size_t> act;
      for (std::size_t i = 0; i < s; ++i)
        if (c[i][x] > 0.0) act.push_back(i);
      Eigen::MatrixXd a(6, static_cast<Eigen::Index>(act.size()));
      for (std::size_t j = 0; j < act.size(); ++j) {
        a.block(0, static_cast<Eigen::Index>(j), 5, 1) = z[act[j]];
        a(5, static_cast<Eigen::Index>(j)) = 1.0;
      }
      Eigen::VectorXd rhs(6);
      rhs << k.images.row(static_cast<Eigen::Index>(x)).transpose(), 1.0;
      const Eigen::VectorXd lambda = a.fullPivLu().solve(rhs);
      const double res = (a * lambda - rhs).norm();
      worst_res = std::max(worst_res, res);
      ok = ok && lambda.minCoeff() >= -1e-12 && res <= 1e-12;
    }
    o.passed += ok ? 1 : 0;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max |sum-1| %.2g, max residual %.2g", worst_sum, worst_res);
  o.detail = buf;
  return o;
}

const SampledSpace& line() {
  static const SampledSpace s = testing_support::interval_sample(8);
  return s;
}

EmbeddingResult run_pipeline() { return nobeling_embed(line(), 1, 4, make_separator_oracle(line()), 0); }

Outcome pipeline_suite() {
  const EmbeddingResult r = run_pipeline();
  const auto schedule = ball_schedule(line(), r.radii_depth, r.stages.size());
  Outcome o{0, 0, {}};
  auto tally = [&](bool ok) {
    ++o.total;
    o.passed += ok ? 1 : 0;
  };
  for (std::size_t t = 0; t < r.stages.size(); ++t) {
    const auto& st = r.stages[t];
    double contraction = 0.0;
    for (Eigen::Index x = 0; x < st.f_before.rows(); ++x)
      contraction = std::max(contraction, (st.f_before.row(x) - st.f_after.row(x)).norm());
    tally(contraction < 3.0 * st.delta);
    tally(st.delta_next <= st.delta / 3.0);
    const double eta_t = eta(st.vertices, 1);
    const double eta_p = eta_prime(st.vertices, st.plane, 1);
    for (Eigen::Index x = 0; x < r.f.rows(); ++x) tally(st.plane.distance(r.f.row(x).transpose()) > eta_p / 2.0);
    // V-mapping, brute force over sample images
    const auto outer = ball_cozero(line(), schedule.balls[st.pair.outer]);
    const auto comp = complement_cozero(line(), schedule.balls[st.pair.inner]);
    for (Eigen::Index x = 0; x < r.f.rows(); ++x) {
      bool in_outer = true, in_comp = true;
      for (Eigen::Index y = 0; y < r.f.rows(); ++y)
        if ((r.f.row(y) - r.f.row(x)).norm() < eta_t / 4.0) {
          in_outer = in_outer && outer.positive(static_cast<std::size_t>(y));
          in_comp = in_comp && comp.positive(static_cast<std::size_t>(y));
        }
      tally(in_outer || in_comp);
    }
  }
  tally(injectivity_margin(r.f).first > 0.0);
  const auto report = verify_result(r, line(), 1);
  tally(report.overall());
  tally(verify_nobeling_membership(r, r.stages.size()).overall());
  char buf[96];
  std::snprintf(buf, sizeof buf, "injectivity margin %.3g", injectivity_margin(r.f).first);
  o.detail = buf;
  if (const auto* f = report.first_failure()) o.detail += ", " + f->name + " failed at " + f->location();
  return o;
}

bool located_failure(const CertificateReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name && !c.pass && (c.stage || !c.points.empty())) return true;
  return false;
}

Outcome tamper_suite() {
  const EmbeddingResult clean = run_pipeline();
  Outcome o{0, 3, {}};
  {
    EmbeddingResult r = clean;
    const auto& plane = r.stages[0].plane;
    for (std::size_t i = 0; i < plane.coords.size(); ++i)
      r.f(3, static_cast<Eigen::Index>(plane.coords[i])) = plane.values[i].value();
    o.passed += located_failure(verify_result(r, line(), 1), "line-avoiding") ? 1 : 0;
  }
  {
    EmbeddingResult r = clean;
    r.f.row(5) = r.f.row(2);
    o.passed += located_failure(verify_result(r, line(), 1), "injectivity") ? 1 : 0;
  }
  {
    EmbeddingResult r = clean;
    r.stages[2].delta *= 2.0;
    o.passed += located_failure(verify_result(r, line(), 1), "schedule") ? 1 : 0;
  }
  return o;
}

Outcome determinism_suite() {
  const EmbeddingResult a = run_pipeline();
  const EmbeddingResult b = run_pipeline();
  const auto ra = verify_result(a, line(), 1);
  const auto rb = verify_result(b, line(), 1);
  return {result_to_json(a, &ra) == result_to_json(b, &rb) ? 1U : 0U, 1, {}};
}

}  // namespace

int main() {
  criterion(1, "closed shrinking", 5.0, shrinking_suite);
  criterion(2, "star refinement", 10.0, star_suite);
  criterion(3, "order reduction", 30.0, order_suite);
  criterion(4, "nerve dimension", 0.0, nerve_suite);
  criterion(5, "general position", 10.0, general_position_suite);
  criterion(6, "kappa mapping", 0.0, kappa_suite);
  criterion(7, "pipeline", 60.0, pipeline_suite);
  criterion(8, "tamper detection", 0.0, tamper_suite);
  criterion(9, "determinism", 0.0, determinism_suite);
  return failures;
}
