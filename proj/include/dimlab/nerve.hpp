#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dimlab/covers.hpp"

namespace dimlab {

using Simplex = std::vector<std::size_t>;

/// Abstract simplicial complex on vertices {0..vertex_count-1}, stored fully
/// (downward closed), simplices sorted by (size, lexicographic).
struct SimplicialComplex {
  std::size_t vertex_count = 0;
  std::vector<Simplex> simplices;
  /// Optional geometric realization, one point per vertex.
  std::optional<std::vector<Eigen::VectorXd>> coords;

  /// Largest simplex size minus one; -1 for the empty complex.
  int dimension() const;
  bool contains(const Simplex& s) const;
  bool is_downward_closed() const;
  bool is_subcomplex_of(const SimplicialComplex& other) const;
};

/// Vertex per member; a simplex for every set of members sharing a sample point.
SimplicialComplex nerve_of(const Cover& c);

/// Deterministic JSON {"vertices": n, "simplices": [...], "coords": [...]}.
/// Throws InputError when the realization misses a vertex.
std::string export_complex(const SimplicialComplex& k);
SimplicialComplex import_complex(const std::string& json);

}  // namespace dimlab
