#include "dimlab/io.hpp"

#include <cmath>
#include <json.hpp>
#include <limits>
#include <string>

#include "dimlab/error.hpp"

namespace dimlab {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

Json parse(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  }
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
double number(const Json& j) { return j.is_null() ? kInf : j.get<double>(); }

Json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const Json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

Eigen::MatrixXd matrix_from(const Json& j, std::optional<Eigen::Index> cols = std::nullopt) {
  if (!j.is_array()) throw InputError("expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index c = cols.value_or(rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].size()));
  Eigen::MatrixXd m(rows, c);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto v = j[static_cast<std::size_t>(r)].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(v.size()) != c)
      throw InputError("row " + std::to_string(r) + " has " + std::to_string(v.size()) + " entries, expected " +
                       std::to_string(c));
    for (Eigen::Index k = 0; k < c; ++k) m(r, k) = v[static_cast<std::size_t>(k)];
  }
  return m;
}

Json points_json(const std::vector<Eigen::VectorXd>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(vector_json(p));
  return a;
}

std::vector<Eigen::VectorXd> points_from(const Json& j) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& p : j) out.push_back(vector_from(p));
  return out;
}

Json cover_json(const Cover& c) {
  Json members = Json::array();
  for (const auto& m : c) {
    Json values = Json::object();
    for (std::size_t x = 0; x < m.size(); ++x)
      if (m[x] > 0.0) values[std::to_string(x)] = m[x];
    members.push_back(Json{{"values", std::move(values)}});
  }
  return Json{{"members", std::move(members)}};
}

Cover cover_from(const Json& j, std::size_t point_count) {
  std::vector<CozeroFunction> members;
  for (const auto& m : j.at("members")) {
    std::vector<double> values(point_count, 0.0);
    for (const auto& [key, value] : m.at("values").items()) {
      std::size_t pos = 0;
      unsigned long idx = 0;
      try {
        idx = std::stoul(key, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != key.size() || key.empty()) throw InputError("cover point key '" + key + "' is not an index");
      if (idx >= point_count) throw InputError("cover refers to point " + key + " outside the sample");
      values[idx] = value.get<double>();
    }
    members.emplace_back(std::move(values));
  }
  return Cover(point_count, std::move(members));
}

Json plane_json(const Hyperplane& h) {
  Json values = Json::array();
  for (const Rational& q : h.values) values.push_back({q.num, q.den});
  return Json{{"coords", h.coords}, {"values", std::move(values)}};
}

Hyperplane plane_from(const Json& j, std::size_t dim) {
  Hyperplane h;
  h.ambient_dim = dim;
  h.coords = j.at("coords").get<std::vector<std::size_t>>();
  for (const auto& v : j.at("values")) {
    const auto q = v.get<std::vector<std::int64_t>>();
    if (q.size() != 2 || q[1] <= 0) throw InputError("hyperplane value must be [numerator, denominator]");
    h.values.push_back({q[0], q[1]});
  }
  return h;
}

Json check_json(const CertificateCheck& c) {
  Json j{{"name", c.name}, {"pass", c.pass}, {"margin", number(c.margin)}};
  j["stage"] = c.stage ? Json(*c.stage) : Json(nullptr);
  j["points"] = c.points;
  j["subset"] = c.subset;
  j["location"] = c.location();
  return j;
}

}  // namespace

SampledSpace parse_space(std::string_view text) {
  const Json j = parse(text);
  return guarded("space", [&] {
    if (!j.is_object()) throw InputError("space must be a JSON object");
    const bool has_points = j.contains("points") && !j["points"].is_null();
    const bool has_matrix = j.contains("distance_matrix") && !j["distance_matrix"].is_null();
    if (has_points == has_matrix) throw InputError("space needs exactly one of points / distance_matrix");
    const double mesh = j.at("mesh").get<double>();
    if (has_points) return SampledSpace::from_coordinates(matrix_from(j["points"]), mesh);
    return SampledSpace::from_distances(matrix_from(j["distance_matrix"]), mesh);
  });
}

std::string space_to_json(const SampledSpace& space) {
  Json j;
  if (space.has_coordinates()) {
    j["points"] = matrix_json(space.coordinates());
    j["distance_matrix"] = nullptr;
  } else {
    j["points"] = nullptr;
    j["distance_matrix"] = matrix_json(space.distances());
  }
  j["mesh"] = space.mesh();
  return j.dump();
}

Cover parse_cover(std::string_view text, std::size_t point_count) {
  const Json j = parse(text);
  return guarded("cover", [&] { return cover_from(j, point_count); });
}

std::string cover_to_json(const Cover& c) { return cover_json(c).dump(); }

Eigen::MatrixXd parse_map(std::string_view text) {
  const Json j = parse(text);
  return guarded("map", [&] { return matrix_from(j.at("map")); });
}

GenposInput parse_genpos(std::string_view text) {
  const Json j = parse(text);
  return guarded("general-position input", [&] {
    GenposInput in;
    in.targets = points_from(j.at("targets"));
    if (j.contains("eps") && !j["eps"].is_null()) in.eps = j["eps"].get<double>();
    if (j.contains("constraints")) {
      const auto& cs = j["constraints"];
      if (cs.size() != in.targets.size()) throw InputError("one constraint entry per target expected");
      for (const auto& c : cs) {
        if (c.is_null()) {
          in.constraints.emplace_back();
          continue;
        }
        const auto pts = points_from(c);
        if (pts.empty()) throw InputError("constraint needs at least one point");
        in.constraints.emplace_back(AffineConstraint::through(pts));
      }
    }
    return in;
  });
}

std::string points_to_json(const std::vector<Eigen::VectorXd>& points) {
  return Json{{"points", points_json(points)}}.dump();
}

std::string result_to_json(const EmbeddingResult& r, const CertificateReport* report) {
  Json j;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["radii_depth"] = r.radii_depth;
  j["stage_count"] = r.stages.size();
  j["f"] = matrix_json(r.f);
  j["injectivity_margin"] = number(r.injectivity_margin);
  j["closest_pair"] = {r.closest_pair.first, r.closest_pair.second};
  Json avoided = Json::array();
  for (std::size_t t = 0; t < r.avoided.size(); ++t) {
    const auto& a = r.avoided[t];
    avoided.push_back(Json{{"t", t},
                           {"hyperplane", plane_json(a.plane)},
                           {"min_distance", number(a.min_distance)},
                           {"margin", number(a.margin)}});
  }
  j["avoided"] = std::move(avoided);
  Json stages = Json::array();
  for (const auto& s : r.stages) {
    Json st;
    st["t"] = s.t;
    st["delta"] = s.delta;
    st["pair_code"] = {s.pair.inner, s.pair.outer};
    st["hyperplane"] = plane_json(s.plane);
    st["f_t"] = matrix_json(s.f_before);
    st["cover_u"] = cover_json(s.cover_u);
    st["chosen_points"] = s.chosen_points;
    st["vertices"] = points_json(s.vertices);
    st["anchors"] = points_json(s.anchors);
    st["eta"] = number(s.eta);
    st["eta_prime"] = number(s.eta_prime);
    st["delta_next"] = s.delta_next;
    st["certificates"] = Json{
        {"uniform_limit",
         {{"pass", s.contraction < 3.0 * s.delta}, {"margin", number(3.0 * s.delta - s.contraction)}}},
        {"schedule",
         {{"pass", s.delta_next <= s.delta / 3.0}, {"margin", number(s.delta / 3.0 - s.delta_next)}}},
        {"order", {{"pass", order_of(s.cover_u) <= r.n}, {"margin", r.n - order_of(s.cover_u)}}}};
    stages.push_back(std::move(st));
  }
  j["stages"] = std::move(stages);
  if (report) j["report"] = Json::parse(report_to_json(*report));
  return j.dump();
}

EmbeddingResult parse_result(std::string_view text) {
  const Json j = parse(text);
  return guarded("result", [&] {
    EmbeddingResult r;
    r.n = j.at("n").get<int>();
    if (r.n < 0) throw InputError("result n must be nonnegative");
    const std::size_t dim = 2 * static_cast<std::size_t>(r.n) + 1;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.radii_depth = j.at("radii_depth").get<std::size_t>();
    r.f = matrix_from(j.at("f"), static_cast<Eigen::Index>(dim));
    const auto npts = static_cast<std::size_t>(r.f.rows());
    r.injectivity_margin = number(j.at("injectivity_margin"));
    const auto cp = j.at("closest_pair").get<std::vector<std::size_t>>();
    if (cp.size() != 2) throw InputError("closest_pair must have two entries");
    r.closest_pair = {cp[0], cp[1]};
    for (const auto& a : j.at("avoided"))
      r.avoided.push_back({plane_from(a.at("hyperplane"), dim), number(a.at("min_distance")),
                           number(a.at("margin"))});
    for (const auto& st : j.at("stages")) {
      StageRecord s;
      s.t = st.at("t").get<std::size_t>();
      s.delta = st.at("delta").get<double>();
      const auto pc = st.at("pair_code").get<std::vector<std::size_t>>();
      if (pc.size() != 2) throw InputError("pair_code must have two entries");
      s.pair = {pc[0], pc[1]};
      s.plane = plane_from(st.at("hyperplane"), dim);
      s.f_before = matrix_from(st.at("f_t"), static_cast<Eigen::Index>(dim));
      s.cover_u = cover_from(st.at("cover_u"), npts);
      s.chosen_points = st.at("chosen_points").get<std::vector<std::size_t>>();
      s.vertices = points_from(st.at("vertices"));
      s.anchors = points_from(st.at("anchors"));
      s.eta = st.contains("eta") ? number(st["eta"]) : 0.0;
      s.eta_prime = st.contains("eta_prime") ? number(st["eta_prime"]) : 0.0;
      s.delta_next = st.at("delta_next").get<double>();
      r.stages.push_back(std::move(s));
    }
    if (r.stages.empty()) throw InputError("result has no stages");
    for (std::size_t t = 0; t < r.stages.size(); ++t) {
      auto& s = r.stages[t];
      s.f_after = t + 1 < r.stages.size() ? r.stages[t + 1].f_before : r.f;
      if (s.f_before.rows() == s.f_after.rows())
        s.contraction = s.f_before.rows() == 0 ? 0.0 : (s.f_after - s.f_before).rowwise().norm().maxCoeff();
    }
    return r;
  });
}

std::string report_to_json(const CertificateReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) checks.push_back(check_json(c));
  return Json{{"overall", report.overall()}, {"checks", std::move(checks)}}.dump();
}

std::string open_image_to_json(const OpenImageCertificate& cert) {
  Json balls = Json::array();
  for (std::size_t i = 0; i < cert.balls.size(); ++i) {
    const Ball& b = cert.balls[i];
    balls.push_back(Json{{"center", vector_json(std::get<Eigen::VectorXd>(b.center))},
                         {"radius", b.radius},
                         {"stage", cert.stage[i] ? Json(*cert.stage[i]) : Json(nullptr)}});
  }
  return Json{{"verified", cert.verified()},
              {"balls", std::move(balls)},
              {"uncovered", cert.uncovered},
              {"spurious", cert.spurious}}
      .dump();
}

}  // namespace dimlab
