#include "dimlab/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "dimlab/covers.hpp"
#include "dimlab/dimension.hpp"
#include "dimlab/embedding.hpp"
#include "dimlab/error.hpp"
#include "dimlab/harness.hpp"
#include "dimlab/io.hpp"
#include "dimlab/nerve.hpp"

#ifndef DIMLAB_VERSION
#define DIMLAB_VERSION "0.0.0"
#endif

namespace dimlab {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text << '\n';
}

SeparationOracle oracle_from(const std::string& name, const SampledSpace& space, double tolerance) {
  if (name == "separator") return make_separator_oracle(space, tolerance);
  if (name.rfind("map:", 0) == 0) {
    Eigen::MatrixXd g = parse_map(read_file(name.substr(4)));
    if (static_cast<std::size_t>(g.rows()) != space.size())
      throw InputError("oracle map has " + std::to_string(g.rows()) + " rows for " +
                       std::to_string(space.size()) + " points");
    return make_map_oracle(std::move(g), tolerance);
  }
  throw InputError("unknown oracle '" + name + "' (expected separator or map:FILE)");
}

std::vector<std::size_t> parse_indices(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size()) throw InputError("'" + item + "' is not an index");
    out.push_back(v);
  }
  return out;
}

struct Options {
  std::uint64_t seed = 0;
  double tolerance = kMetricTolerance;
  std::string space;
  std::string cover;
  std::string with;
  std::string oracle = "separator";
  std::string out;
  std::string result;
  std::string input;
  std::string u;
  int n = 1;
  std::size_t stages = 4;
  std::size_t radii_depth = 4;
  std::optional<double> eps;
};

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty())
    out << text << '\n';
  else
    write_file(path, text);
}

int run_cover(const std::string& op, const Options& o, std::ostream& out) {
  const SampledSpace space = parse_space(read_file(o.space));
  const Cover c = parse_cover(read_file(o.cover), space.size());
  if (op == "order") {
    out << order_of(c) << '\n';
    return 0;
  }
  if (op == "shrink") {
    const ShrinkResult s = closed_shrinking(c);
    Json j = Json::parse(cover_to_json(s.open_shrink));
    Json closed = Json::array();
    for (const auto& f : s.closed) closed.push_back(f.indices());
    j["closed"] = std::move(closed);
    emit(out, o.out, j.dump());
    return 0;
  }
  if (op == "star") {
    const StarRefinement s = star_refinement(c);
    Json j = Json::parse(cover_to_json(s.cover));
    j["witness"] = s.witness;
    emit(out, o.out, j.dump());
    return 0;
  }
  if (op == "meet") {
    if (o.with.empty()) throw InputError("cover meet needs --with");
    emit(out, o.out, cover_to_json(meet(c, parse_cover(read_file(o.with), space.size()))));
    return 0;
  }
  // reduce-order
  const SeparationOracle oracle = oracle_from(o.oracle, space, o.tolerance);
  emit(out, o.out, cover_to_json(reduce_order(c, o.n, oracle)));
  return 0;
}

int run_nerve(const Options& o, std::ostream& out) {
  const SampledSpace space = parse_space(read_file(o.space));
  const Cover c = parse_cover(read_file(o.cover), space.size());
  emit(out, o.out, export_complex(nerve_of(c)));
  return 0;
}

int run_genpos(const Options& o, std::ostream& out) {
  const GenposInput in = parse_genpos(read_file(o.input));
  const double eps = o.eps ? *o.eps : in.eps.value_or(1e-2);
  GeneralPositionOptions gp;
  gp.seed = o.seed;
  gp.rank_tolerance = o.tolerance;
  emit(out, o.out, points_to_json(general_position(in.targets, eps, in.constraints, gp)));
  return 0;
}

CertificateReport full_report(const EmbeddingResult& r, const SampledSpace& space, int n) {
  CertificateReport report = verify_result(r, space, n);
  for (auto& c : verify_nobeling_membership(r, r.stages.size()).checks) report.checks.push_back(std::move(c));
  return report;
}

int run_embed(const Options& o, std::ostream& out, std::ostream& err) {
  const SampledSpace space = parse_space(read_file(o.space));
  const SeparationOracle oracle = oracle_from(o.oracle, space, o.tolerance);
  EmbedOptions eo;
  eo.radii_depth = o.radii_depth;
  eo.rank_tolerance = o.tolerance;
  const EmbeddingResult r = nobeling_embed(space, o.n, o.stages, oracle, o.seed, eo);
  const CertificateReport report = full_report(r, space, o.n);
  emit(out, o.out, result_to_json(r, &report));
  if (const auto* f = report.first_failure()) {
    err << "certificate " << f->name << " failed at " << f->location() << " (margin " << f->margin << ")\n";
    return 1;
  }
  return 0;
}

int run_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const SampledSpace space = parse_space(read_file(o.space));
  const EmbeddingResult r = parse_result(read_file(o.result));
  const CertificateReport report = full_report(r, space, o.n);
  emit(out, o.out, report_to_json(report));
  if (const auto* f = report.first_failure()) {
    err << "certificate " << f->name << " failed at " << f->location() << " (margin " << f->margin << ")\n";
    return 1;
  }
  return 0;
}

int run_open_image(const Options& o, std::ostream& out) {
  const SampledSpace space = parse_space(read_file(o.space));
  const EmbeddingResult r = parse_result(read_file(o.result));
  const BallSchedule schedule = ball_schedule(space, r.radii_depth, r.stages.size());
  const OpenImageCertificate cert = open_image_certificate(r, parse_indices(o.u), schedule.balls, space);
  emit(out, o.out, open_image_to_json(cert));
  return cert.verified() ? 0 : 1;
}

}  // namespace

const char* version() { return DIMLAB_VERSION; }

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cover calculus and embedding certificates on finite metric samples", "dimlab"};
  app.set_version_flag("--version", std::string("dimlab ") + version());
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "Random seed")->envname("DIMLAB_SEED")->capture_default_str();
  app.add_option("--tolerance", o.tolerance, "Numerical tolerance")->capture_default_str();

  auto* cover = app.add_subcommand("cover", "Operations on covers");
  cover->require_subcommand(1);
  for (const char* op : {"shrink", "star", "meet", "order", "reduce-order"}) {
    auto* sub = cover->add_subcommand(op);
    sub->add_option("--space", o.space)->required()->check(CLI::ExistingFile);
    sub->add_option("--cover", o.cover)->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output file (default: stdout)");
    if (std::string(op) == "meet") sub->add_option("--with", o.with)->required()->check(CLI::ExistingFile);
    if (std::string(op) == "reduce-order") {
      sub->add_option("--n", o.n)->required()->check(CLI::NonNegativeNumber);
      sub->add_option("--oracle", o.oracle, "separator or map:FILE")->capture_default_str();
    }
  }

  auto* nerve = app.add_subcommand("nerve", "Nerve of a cover");
  nerve->add_option("--space", o.space)->required()->check(CLI::ExistingFile);
  nerve->add_option("--cover", o.cover)->required()->check(CLI::ExistingFile);
  nerve->add_option("--out", o.out);

  auto* genpos = app.add_subcommand("genpos", "Perturb points into general position");
  genpos->add_option("--input", o.input)->required()->check(CLI::ExistingFile);
  genpos->add_option("--eps", o.eps);
  genpos->add_option("--out", o.out);

  auto* embed = app.add_subcommand("embed", "Run the embedding pipeline");
  embed->add_option("--space", o.space)->required()->check(CLI::ExistingFile);
  embed->add_option("--n", o.n)->required()->check(CLI::NonNegativeNumber);
  embed->add_option("--stages", o.stages)->required()->check(CLI::PositiveNumber);
  embed->add_option("--radii-depth", o.radii_depth)->capture_default_str();
  embed->add_option("--oracle", o.oracle, "separator or map:FILE")->capture_default_str();
  embed->add_option("--out", o.out);

  auto* verify = app.add_subcommand("verify", "Re-verify an embedding result");
  verify->add_option("--result", o.result)->required()->check(CLI::ExistingFile);
  verify->add_option("--space", o.space)->required()->check(CLI::ExistingFile);
  verify->add_option("--n", o.n)->required()->check(CLI::NonNegativeNumber);
  verify->add_option("--out", o.out);

  auto* open = app.add_subcommand("open-image", "Image of an open set under an embedding result");
  open->add_option("--result", o.result)->required()->check(CLI::ExistingFile);
  open->add_option("--space", o.space)->required()->check(CLI::ExistingFile);
  open->add_option("--u", o.u, "Comma separated ball indices")->required();
  open->add_option("--out", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cover)
      for (auto* sub : cover->get_subcommands())
        if (*sub) return run_cover(sub->get_name(), o, out);
    if (*nerve) return run_nerve(o, out);
    if (*genpos) return run_genpos(o, out);
    if (*embed) return run_embed(o, out, err);
    if (*verify) return run_verify(o, out, err);
    if (*open) return run_open_image(o, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return 2;
  } catch (const CertificateError& e) {
    err << "certificate " << e.claim() << " failed at " << e.location() << " (margin " << e.margin() << ")\n";
    return 1;
  } catch (const GeneralPositionError& e) {
    err << "general position: " << e.what() << '\n';
    return 1;
  } catch (const OracleError& e) {
    err << "oracle: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace dimlab
