#include <pybind11/eigen.h>
#include <pybind11/iostream.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dimlab/cli.hpp"
#include "dimlab/covers.hpp"
#include "dimlab/dimension.hpp"
#include "dimlab/embedding.hpp"
#include "dimlab/error.hpp"
#include "dimlab/geometry.hpp"
#include "dimlab/harness.hpp"
#include "dimlab/io.hpp"
#include "dimlab/nerve.hpp"

namespace py = pybind11;
using namespace dimlab;

namespace {

// Rows are members, columns are sample points.
Cover cover_from_matrix(const Eigen::MatrixXd& m) {
  std::vector<CozeroFunction> members;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Eigen::VectorXd row = m.row(i).transpose();
    members.emplace_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  return Cover(static_cast<std::size_t>(m.cols()), std::move(members));
}

Eigen::MatrixXd cover_matrix(const Cover& c) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(c.size()), static_cast<Eigen::Index>(c.point_count()));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t x = 0; x < c.point_count(); ++x)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(x)) = c[i][x];
  return m;
}

std::vector<Eigen::VectorXd> rows_of(const Eigen::MatrixXd& m) {
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(m.row(r).transpose());
  return out;
}

Eigen::MatrixXd matrix_of(const std::vector<Eigen::VectorXd>& pts) {
  if (pts.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(pts.size()), pts[0].size());
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return m;
}

SeparationOracle oracle_for(const SampledSpace& space, const std::optional<Eigen::MatrixXd>& base_map) {
  if (base_map) return make_map_oracle(*base_map);
  return make_separator_oracle(space);
}

py::dict report_dict(const CertificateReport& r) {
  py::list checks;
  for (const auto& c : r.checks) {
    py::dict d;
    d["name"] = c.name;
    d["pass"] = c.pass;
    d["margin"] = c.margin;
    d["stage"] = c.stage ? py::cast(*c.stage) : py::none();
    d["points"] = c.points;
    d["subset"] = c.subset;
    d["location"] = c.location();
    checks.append(d);
  }
  py::dict out;
  out["overall"] = r.overall();
  out["checks"] = checks;
  return out;
}

CertificateReport full_report(const EmbeddingResult& r, const SampledSpace& space, int n) {
  CertificateReport rep = verify_result(r, space, n);
  for (auto& c : verify_nobeling_membership(r, r.stages.size()).checks) rep.checks.push_back(std::move(c));
  return rep;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cover calculus and embedding certificates on finite metric samples";
  m.attr("__version__") = version();

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<OracleError>(m, "OracleError", base.ptr());
  py::register_exception<GeneralPositionError>(m, "GeneralPositionError", base.ptr());
  py::register_exception<CertificateError>(m, "CertificateError", base.ptr());

  py::class_<SampledSpace>(m, "Space")
      .def_static("from_points", &SampledSpace::from_coordinates, py::arg("points"), py::arg("mesh"))
      .def_static("from_distances", &SampledSpace::from_distances, py::arg("distances"), py::arg("mesh"),
                  py::arg("tolerance") = kMetricTolerance)
      .def_static("from_json", &parse_space)
      .def("to_json", &space_to_json)
      .def_property_readonly("size", &SampledSpace::size)
      .def_property_readonly("mesh", &SampledSpace::mesh)
      .def_property_readonly("diameter", &SampledSpace::diameter)
      .def_property_readonly("distances", &SampledSpace::distances)
      .def("__len__", &SampledSpace::size);

  py::class_<Cover>(m, "Cover")
      .def(py::init(&cover_from_matrix), py::arg("values"), "Rows are members, columns are sample points.")
      .def_static("from_json", &parse_cover, py::arg("text"), py::arg("point_count"))
      .def_static("from_balls",
                  [](const SampledSpace& s, const std::vector<std::pair<std::size_t, double>>& balls) {
                    std::vector<CozeroFunction> members;
                    for (const auto& [c, r] : balls) members.push_back(ball_cozero(s, Ball(PointId{c}, r)));
                    return Cover(s.size(), std::move(members));
                  },
                  py::arg("space"), py::arg("balls"), "Cover by balls given as (center index, radius).")
      .def("to_json", &cover_to_json)
      .def_property_readonly("values", &cover_matrix)
      .def_property_readonly("point_count", &Cover::point_count)
      .def("covers", &Cover::covers)
      .def("support", [](const Cover& c, std::size_t i) { return c.support(i).indices(); })
      .def("__len__", &Cover::size);

  m.def("order_of", &order_of);
  m.def("is_refinement", [](const Cover& v, const Cover& u) {
    const auto r = is_refinement(v, u);
    return py::make_tuple(r.refines, r.witness);
  });
  m.def("is_star_refinement", &is_star_refinement);
  m.def("is_point_star_refinement", &is_point_star_refinement);
  m.def("closed_shrinking", [](const Cover& c) {
    const auto r = closed_shrinking(c);
    std::vector<std::vector<std::size_t>> closed;
    for (const auto& f : r.closed) closed.push_back(f.indices());
    return py::make_tuple(r.open_shrink, closed);
  }, "Returns (open shrinking W, closed sets F as index lists).");
  m.def("star_refinement", [](const Cover& c) {
    auto r = star_refinement(c);
    return py::make_tuple(std::move(r.cover), std::move(r.witness));
  });
  m.def("meet", &meet);
  m.def("reduce_order", [](const Cover& c, int n, const SampledSpace& space,
                           const std::optional<Eigen::MatrixXd>& base_map) {
    return reduce_order(c, n, oracle_for(space, base_map));
  }, py::arg("cover"), py::arg("n"), py::arg("space"), py::arg("base_map") = py::none(),
        "Order reduction with the nearest-set separator, or a map oracle when base_map is given.");
  m.def("nerve", [](const Cover& c) { return nerve_of(c).simplices; });
  m.def("nerve_json", [](const Cover& c) { return export_complex(nerve_of(c)); });

  m.def("general_position",
        [](const Eigen::MatrixXd& targets, double eps, std::uint64_t seed, bool keep_in_unit_cube) {
          GeneralPositionOptions o;
          o.seed = seed;
          o.keep_in_unit_cube = keep_in_unit_cube;
          const auto t = rows_of(targets);
          return matrix_of(general_position(t, eps, {}, o));
        },
        py::arg("targets"), py::arg("eps"), py::arg("seed") = 0, py::arg("keep_in_unit_cube") = false);
  m.def("affine_distance", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const auto pa = rows_of(a), pb = rows_of(b);
    return affine_distance(pa, pb);
  });
  m.def("kappa_map", [](const Cover& c, const Eigen::MatrixXd& vertices) {
    const auto z = rows_of(vertices);
    return kappa_map(c, z).images;
  });
  m.def("hyperplanes", [](int n, std::size_t count) {
    py::list out;
    for (const auto& h : enumerate_hyperplanes(n, count)) {
      std::vector<std::pair<std::int64_t, std::int64_t>> values;
      for (const auto& q : h.values) values.emplace_back(q.num, q.den);
      out.append(py::make_tuple(h.coords, values));
    }
    return out;
  }, "First hyperplanes of I^(2n+1) as (coords, [(num, den), ...]).");

  py::class_<EmbeddingResult>(m, "EmbeddingResult")
      .def_static("from_json", &parse_result)
      .def("to_json", [](const EmbeddingResult& r) { return result_to_json(r); })
      .def_readonly("n", &EmbeddingResult::n)
      .def_readonly("seed", &EmbeddingResult::seed)
      .def_readonly("f", &EmbeddingResult::f)
      .def_readonly("injectivity_margin", &EmbeddingResult::injectivity_margin)
      .def_readonly("closest_pair", &EmbeddingResult::closest_pair)
      .def_property_readonly("stage_count", [](const EmbeddingResult& r) { return r.stages.size(); })
      .def_property_readonly("deltas", [](const EmbeddingResult& r) {
        std::vector<double> d;
        for (const auto& s : r.stages) d.push_back(s.delta);
        return d;
      })
      .def_property_readonly("avoided_margins", [](const EmbeddingResult& r) {
        std::vector<double> d;
        for (const auto& a : r.avoided) d.push_back(a.margin);
        return d;
      });

  m.def("embed", [](const SampledSpace& space, int n, std::size_t stages, std::uint64_t seed,
                    std::size_t radii_depth, const std::optional<Eigen::MatrixXd>& base_map) {
    EmbedOptions o;
    o.radii_depth = radii_depth;
    return nobeling_embed(space, n, stages, oracle_for(space, base_map), seed, o);
  }, py::arg("space"), py::arg("n"), py::arg("stages"), py::arg("seed") = 0, py::arg("radii_depth") = 4,
        py::arg("base_map") = py::none(), py::call_guard<py::gil_scoped_release>());
  m.def("verify", [](const EmbeddingResult& r, const SampledSpace& space, int n) {
    return report_dict(full_report(r, space, n));
  });
  m.def("open_image", [](const EmbeddingResult& r, const SampledSpace& space, const std::vector<std::size_t>& u) {
    const auto schedule = ball_schedule(space, r.radii_depth, r.stages.size());
    const auto cert = open_image_certificate(r, u, schedule.balls, space);
    return py::make_tuple(cert.verified(), cert.balls.size(), cert.uncovered, cert.spurious);
  }, "Returns (verified, ball count, uncovered points, spurious points).");

  m.def("main", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"dimlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    py::scoped_ostream_redirect out(std::cout, py::module_::import("sys").attr("stdout"));
    py::scoped_ostream_redirect err(std::cerr, py::module_::import("sys").attr("stderr"));
    return cli_main(static_cast<int>(argv.size()), argv.data(), std::cout, std::cerr);
  }, "Runs the command line tool with the given arguments and returns its exit code.");
}
