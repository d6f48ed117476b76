#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dimlab/covers.hpp"
#include "dimlab/embedding.hpp"
#include "dimlab/geometry.hpp"
#include "dimlab/harness.hpp"
#include "dimlab/metric_space.hpp"

// JSON formats. Every writer produces deterministic output (fixed key order,
// shortest round-trip doubles, +inf written as null). Readers throw
// InputError on malformed input.
namespace dimlab {

/// {"points": [[...], ...] | null, "distance_matrix": [[...], ...] | null, "mesh": m}
SampledSpace parse_space(std::string_view text);
std::string space_to_json(const SampledSpace& space);

/// {"members": [{"values": {"<point>": value, ...}}, ...]}; absent points are 0.
Cover parse_cover(std::string_view text, std::size_t point_count);
std::string cover_to_json(const Cover& c);

/// {"map": [[g_0(x), ..., g_n(x)], ...]}, one row per sample point.
Eigen::MatrixXd parse_map(std::string_view text);

/// {"targets": [[...], ...], "eps": e, "constraints": [null | [[...], ...], ...]}
/// where a constraint lists points spanning the affine subspace.
struct GenposInput {
  std::vector<Eigen::VectorXd> targets;
  std::optional<double> eps;
  std::vector<std::optional<AffineConstraint>> constraints;
};
GenposInput parse_genpos(std::string_view text);
std::string points_to_json(const std::vector<Eigen::VectorXd>& points);

std::string result_to_json(const EmbeddingResult& r, const CertificateReport* report = nullptr);
EmbeddingResult parse_result(std::string_view text);

std::string report_to_json(const CertificateReport& report);
std::string open_image_to_json(const OpenImageCertificate& cert);

}  // namespace dimlab
