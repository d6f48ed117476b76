#include "dimlab/covers.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>

#include "dimlab/error.hpp"

namespace dimlab {

Cover::Cover(std::size_t point_count, std::vector<CozeroFunction> members)
    : point_count_(point_count), members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (members_[i].size() != point_count_)
      throw InputError("cover member " + std::to_string(i) + " has " +
                       std::to_string(members_[i].size()) + " values, expected " +
                       std::to_string(point_count_));
}

std::vector<std::size_t> Cover::active(std::size_t x) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (members_[i].positive(x)) out.push_back(i);
  return out;
}

std::optional<std::size_t> Cover::first_uncovered() const {
  for (std::size_t x = 0; x < point_count_; ++x) {
    bool hit = false;
    for (const auto& m : members_)
      if (m.positive(x)) {
        hit = true;
        break;
      }
    if (!hit) return x;
  }
  return std::nullopt;
}

void Cover::require_covering(const char* operation) const {
  if (auto x = first_uncovered())
    throw PreconditionError(std::string(operation) + ": family does not cover point " +
                                std::to_string(*x),
                            *x);
}

IndexedCover drop_empty_members(const Cover& c) {
  std::vector<CozeroFunction> kept;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].empty()) {
      kept.push_back(c[i]);
      origin.push_back(i);
    }
  return {Cover(c.point_count(), std::move(kept)), std::move(origin)};
}

IndexedCover maximal_subcover(const Cover& c) {
  std::vector<PointSet> supports;
  supports.reserve(c.size());
  for (const auto& m : c) supports.push_back(m.support());
  std::vector<CozeroFunction> kept;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (supports[i].empty()) continue;
    bool dominated = false;
    for (std::size_t j = 0; j < c.size() && !dominated; ++j) {
      if (j == i || !supports[i].is_subset_of(supports[j])) continue;
      // Strictly larger set, or an equal set that comes first.
      dominated = !(supports[j] == supports[i]) || j < i;
    }
    if (!dominated) {
      kept.push_back(c[i]);
      origin.push_back(i);
    }
  }
  return {Cover(c.point_count(), std::move(kept)), std::move(origin)};
}

int order_of(const Cover& c) {
  int best = 0;
  for (std::size_t x = 0; x < c.point_count(); ++x) {
    int count = 0;
    for (const auto& m : c)
      if (m.positive(x)) ++count;
    best = std::max(best, count);
  }
  return best - 1;
}

RefinementWitness is_refinement(const Cover& v, const Cover& u) {
  if (v.point_count() != u.point_count()) throw InputError("covers live on different samples");
  RefinementWitness r;
  std::vector<PointSet> us;
  for (const auto& m : u) us.push_back(m.support());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const PointSet sj = v.support(j);
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < us.size(); ++i)
      if (sj.is_subset_of(us[i])) {
        hit = i;
        break;
      }
    if (!hit) {
      r.refines = false;
      r.failing_member = j;
      r.witness.clear();
      return r;
    }
    r.witness.push_back(*hit);
  }
  r.refines = true;
  return r;
}

bool is_shrinking(const Cover& v, const Cover& u) {
  if (v.size() != u.size() || v.point_count() != u.point_count()) return false;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t x = 0; x < v.point_count(); ++x)
      if (v[i].positive(x) && !u[i].positive(x)) return false;
  return true;
}

ShrinkResult closed_shrinking(const Cover& c) {
  c.require_covering("closed_shrinking");
  const std::size_t k = c.size();
  const std::size_t n = c.point_count();
  std::vector<std::vector<double>> tilde(k, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> prime(k, std::vector<double>(n, 0.0));

  for (std::size_t x = 0; x < n; ++x) {
    // suffix[i] = max_{t >= i} g_t(x)
    std::vector<double> suffix(k + 1, 0.0);
    for (std::size_t i = k; i-- > 0;) suffix[i] = std::max(suffix[i + 1], c[i][x]);
    double prefix_prime = 0.0;  // max_{s < i} g'_s(x)
    for (std::size_t i = 0; i < k; ++i) {
      const double gi = c[i][x];
      const double rest = std::max(prefix_prime, suffix[i + 1]);
      const double denom = gi + rest;
      if (!(denom > 0.0))
        throw PreconditionError("closed_shrinking: zero denominator at point " + std::to_string(x) +
                                    ", member " + std::to_string(i),
                                x);
      const double gt = gi / denom;
      tilde[i][x] = gt;
      prime[i][x] = std::max(0.0, gt - 0.5);
      prefix_prime = std::max(prefix_prime, prime[i][x]);
    }
  }

  ShrinkResult out;
  std::vector<CozeroFunction> w;
  w.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    PointSet f(n);
    for (std::size_t x = 0; x < n; ++x)
      if (tilde[i][x] >= 0.5 - kHalfTolerance) f.insert(x);
    out.closed.push_back(std::move(f));
    out.tilde.emplace_back(std::move(tilde[i]));
    w.emplace_back(std::move(prime[i]));
  }
  out.open_shrink = Cover(n, std::move(w));
  return out;
}

PointSet star(const PointSet& s, const Cover& c) {
  PointSet out(c.point_count());
  for (const auto& m : c) {
    const PointSet sm = m.support();
    if (sm.intersects(s)) out |= sm;
  }
  return out;
}

PointSet star_of_member(std::size_t i, const Cover& c) {
  if (i >= c.size()) throw InputError("member index out of range");
  return star(c.support(i), c);
}

StarRefinement star_refinement(const Cover& c) {
  const ShrinkResult shrink = closed_shrinking(c);
  const std::size_t k = c.size();
  const std::size_t n = c.point_count();

  // Cozero function of X \ F_i, consistent with the tolerance defining F_i.
  std::vector<std::vector<double>> outside(k, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t x = 0; x < n; ++x) {
      const double gt = shrink.tilde[i][x];
      outside[i][x] = gt < 0.5 - kHalfTolerance ? 0.5 - gt : 0.0;
    }

  // Nonempty members of the meet are exactly the choice patterns realised at
  // some sample point, so enumerate them pointwise.
  using Key = std::pair<std::size_t, std::vector<std::uint8_t>>;
  std::map<Key, bool> patterns;
  constexpr std::size_t kMaxMembers = std::size_t{1} << 22;
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<std::vector<std::uint8_t>> options(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (outside[i][x] > 0.0) options[i].push_back(0);
      if (c[i].positive(x)) options[i].push_back(1);
    }
    for (std::size_t l = 0; l < k; ++l) {
      if (!shrink.open_shrink[l].positive(x)) continue;
      std::vector<std::uint8_t> choice(k);
      std::vector<std::size_t> pos(k, 0);
      for (;;) {
        for (std::size_t i = 0; i < k; ++i) choice[i] = options[i][pos[i]];
        patterns.emplace(Key{l, choice}, true);
        if (patterns.size() > kMaxMembers)
          throw PreconditionError("star_refinement: meet has too many nonempty members");
        std::size_t i = 0;
        while (i < k && ++pos[i] == options[i].size()) pos[i++] = 0;
        if (i == k) break;
      }
    }
  }

  StarRefinement out;
  std::vector<CozeroFunction> members;
  members.reserve(patterns.size());
  for (const auto& [key, unused] : patterns) {
    const auto& [l, choice] = key;
    std::vector<double> v(n);
    for (std::size_t x = 0; x < n; ++x) {
      double m = shrink.open_shrink[l][x];
      for (std::size_t i = 0; i < k && m > 0.0; ++i)
        m = std::min(m, choice[i] ? c[i][x] : outside[i][x]);
      v[x] = m;
    }
    members.emplace_back(std::move(v));
    out.witness.push_back(l);
  }
  out.cover = Cover(n, std::move(members));
  return out;
}

Cover meet(const Cover& a, const Cover& b) {
  if (a.point_count() != b.point_count()) throw InputError("covers live on different samples");
  std::vector<CozeroFunction> members;
  for (const auto& ai : a)
    for (const auto& bj : b) {
      CozeroFunction m = pointwise_min(ai, bj);
      if (!m.empty()) members.push_back(std::move(m));
    }
  return Cover(a.point_count(), std::move(members));
}

namespace {

bool inside_some_member(const PointSet& s, const std::vector<PointSet>& members) {
  return std::any_of(members.begin(), members.end(),
                     [&](const PointSet& m) { return s.is_subset_of(m); });
}

std::vector<PointSet> supports_of(const Cover& c) {
  std::vector<PointSet> out;
  out.reserve(c.size());
  for (const auto& m : c) out.push_back(m.support());
  return out;
}

}  // namespace

bool is_point_star_refinement(const Cover& v, const Cover& u) {
  if (v.point_count() != u.point_count()) throw InputError("covers live on different samples");
  const auto us = supports_of(u);
  for (std::size_t x = 0; x < v.point_count(); ++x) {
    PointSet single(v.point_count());
    single.insert(x);
    if (!inside_some_member(star(single, v), us)) return false;
  }
  return true;
}

bool is_star_refinement(const Cover& v, const Cover& u) {
  if (v.point_count() != u.point_count()) throw InputError("covers live on different samples");
  const auto us = supports_of(u);
  for (std::size_t m = 0; m < v.size(); ++m)
    if (!inside_some_member(star_of_member(m, v), us)) return false;
  return true;
}

}  // namespace dimlab
