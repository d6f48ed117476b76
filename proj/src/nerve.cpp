#include "dimlab/nerve.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {

bool simplex_less(const Simplex& a, const Simplex& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct SimplexOrder {
  bool operator()(const Simplex& a, const Simplex& b) const { return simplex_less(a, b); }
};

constexpr std::size_t kMaxSimplices = std::size_t{1} << 24;

}  // namespace

int SimplicialComplex::dimension() const {
  int d = -1;
  for (const auto& s : simplices) d = std::max(d, static_cast<int>(s.size()) - 1);
  return d;
}

bool SimplicialComplex::contains(const Simplex& s) const {
  return std::binary_search(simplices.begin(), simplices.end(), s, simplex_less);
}

bool SimplicialComplex::is_downward_closed() const {
  for (const auto& s : simplices) {
    if (s.size() <= 1) continue;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex face;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (i != drop) face.push_back(s[i]);
      if (!contains(face)) return false;
    }
  }
  return true;
}

bool SimplicialComplex::is_subcomplex_of(const SimplicialComplex& other) const {
  return std::all_of(simplices.begin(), simplices.end(),
                     [&](const Simplex& s) { return other.contains(s); });
}

SimplicialComplex nerve_of(const Cover& c) {
  std::set<Simplex, SimplexOrder> all;
  for (std::size_t x = 0; x < c.point_count(); ++x) {
    const auto act = c.active(x);
    if (act.size() >= 63) throw PreconditionError("nerve_of: a point lies in too many members", x);
    const std::uint64_t count = std::uint64_t{1} << act.size();
    if (count > kMaxSimplices) throw PreconditionError("nerve_of: nerve too large to materialize", x);
    for (std::uint64_t mask = 1; mask < count; ++mask) {
      Simplex s;
      for (std::size_t b = 0; b < act.size(); ++b)
        if (mask & (std::uint64_t{1} << b)) s.push_back(act[b]);
      all.insert(std::move(s));
    }
    if (all.size() > kMaxSimplices) throw PreconditionError("nerve_of: nerve too large to materialize", x);
  }
  SimplicialComplex k;
  k.vertex_count = c.size();
  k.simplices.assign(all.begin(), all.end());
  return k;
}

std::string export_complex(const SimplicialComplex& k) {
  nlohmann::ordered_json j;
  j["vertices"] = k.vertex_count;
  auto simplices = nlohmann::ordered_json::array();
  std::vector<Simplex> sorted = k.simplices;
  std::sort(sorted.begin(), sorted.end(), simplex_less);
  for (const auto& s : sorted) simplices.push_back(s);
  j["simplices"] = std::move(simplices);
  if (k.coords) {
    if (k.coords->size() < k.vertex_count)
      throw InputError("realization is missing coordinates for vertex " +
                       std::to_string(k.coords->size()));
    auto coords = nlohmann::ordered_json::array();
    for (std::size_t v = 0; v < k.vertex_count; ++v) {
      const auto& p = (*k.coords)[v];
      coords.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    }
    j["coords"] = std::move(coords);
  }
  return j.dump();
}

SimplicialComplex import_complex(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SimplicialComplex k;
    k.vertex_count = j.at("vertices").get<std::size_t>();
    for (const auto& s : j.at("simplices")) {
      Simplex simplex = s.get<Simplex>();
      for (std::size_t v : simplex)
        if (v >= k.vertex_count) throw InputError("simplex vertex out of range");
      if (!std::is_sorted(simplex.begin(), simplex.end())) throw InputError("simplex not sorted");
      k.simplices.push_back(std::move(simplex));
    }
    std::sort(k.simplices.begin(), k.simplices.end(), simplex_less);
    if (j.contains("coords")) {
      std::vector<Eigen::VectorXd> coords;
      for (const auto& p : j.at("coords")) {
        const auto v = p.get<std::vector<double>>();
        coords.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
      }
      k.coords = std::move(coords);
    }
    return k;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed complex JSON: ") + e.what());
  }
}

}  // namespace dimlab
