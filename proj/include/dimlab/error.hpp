#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed data: unknown point identifiers, bad JSON, schema violations.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on data violating its documented precondition,
/// e.g. a family that does not cover the sample.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, std::optional<std::size_t> point = std::nullopt)
      : Error(what), point_(point) {}

  /// Sample point witnessing the violation, when there is one.
  std::optional<std::size_t> point() const noexcept { return point_; }

 private:
  std::optional<std::size_t> point_;
};

/// A separation oracle returned data that does not satisfy the witness invariants.
class OracleError : public Error {
 public:
  using Error::Error;
};

/// Perturbation could not reach general position within the retry budget, or a
/// configuration that must be in general position is not.
class GeneralPositionError : public Error {
 public:
  GeneralPositionError(const std::string& what, std::vector<std::size_t> subset)
      : Error(what), subset_(std::move(subset)) {}

  const std::vector<std::size_t>& subset() const noexcept { return subset_; }

 private:
  std::vector<std::size_t> subset_;
};

/// A certificate of the embedding pipeline failed. Carries the claim name and
/// a human readable location (stage / point indices).
class CertificateError : public Error {
 public:
  CertificateError(std::string claim, std::string location, double margin)
      : Error(claim + " failed at " + location), claim_(std::move(claim)),
        location_(std::move(location)), margin_(margin) {}

  const std::string& claim() const noexcept { return claim_; }
  const std::string& location() const noexcept { return location_; }
  double margin() const noexcept { return margin_; }

 private:
  std::string claim_;
  std::string location_;
  double margin_;
};

}  // namespace dimlab
