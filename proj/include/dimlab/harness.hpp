#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dimlab/embedding.hpp"
#include "dimlab/metric_space.hpp"

namespace dimlab {

/// Outcome of one named check. `margin` is signed: negative (or zero for the
/// strict inequalities) means violated. `stage` and `points` locate the worst
/// case; `subset` carries vertex indices for general-position checks.
struct CertificateCheck {
  std::string name;
  bool pass = true;
  double margin = 0.0;
  std::optional<std::size_t> stage;
  std::vector<std::size_t> points;
  std::vector<std::size_t> subset;

  std::string location() const;
};

struct CertificateReport {
  std::vector<CertificateCheck> checks;

  bool overall() const;
  /// First failing check, if any.
  const CertificateCheck* first_failure() const;
};

/// Re-derives every stage invariant of `r` from the maps, covers, vertices,
/// anchors and deltas it records; stored eta, eta', contraction and margins
/// are ignored. Throws InputError when `r` does not fit `space` and `n`.
CertificateReport verify_result(const EmbeddingResult& r, const SampledSpace& space, int n);

/// Finite check that f avoids the first `stages` hyperplanes: some fixed
/// coordinate of f(x) is off its rational value by more than
/// eta'_t / (2 sqrt(n+1)), which d(f(x), L_t) > eta'_t / 2 implies.
CertificateReport verify_nobeling_membership(const EmbeddingResult& r, std::size_t stages);

struct OpenImageCertificate {
  /// Image-side balls J_i.
  std::vector<Ball> balls;
  /// Stage whose eta bounds the radius of balls[i]; empty for the trivial
  /// certificate of a set containing the whole sample.
  std::vector<std::optional<std::size_t>> stage;
  /// Sample points of u whose image lies in no J_i.
  std::vector<std::size_t> uncovered;
  /// Sample points outside u whose image lies in some J_i.
  std::vector<std::size_t> spurious;

  bool verified() const { return uncovered.empty() && spurious.empty(); }
};

/// Image of the open set u = union of balls[i] for i in `u` under r.f. For
/// every computed stage whose pair is <v, u_e> with u_e in `u`, candidate
/// balls of radius eta_t / 4 with grid centres near the images are kept when
/// an enumerated ball whose sample support lies in the candidate's preimage is
/// formally included in the inner ball v. When u contains the whole sample a
/// single ball around the cube is returned. Throws InputError for an index
/// outside `balls`.
OpenImageCertificate open_image_certificate(const EmbeddingResult& r, const std::vector<std::size_t>& u,
                                            std::span<const Ball> balls, const SampledSpace& space);

}  // namespace dimlab
