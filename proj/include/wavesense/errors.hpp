#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wavesense {

/// LU factorization hit an exactly zero pivot.
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(std::size_t pivot)
      : std::runtime_error("singular matrix: zero pivot at index " + std::to_string(pivot)),
        pivot_(pivot) {}

  std::size_t pivot_index() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// Layer potential requested too close to the boundary for the trapezoidal rule.
class NearBoundaryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series oracle failed to reach its truncation tolerance.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pipeline stage produced non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration; field() names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// File could not be read or written; path() is the offending file.
class IoError : public std::runtime_error {
 public:
  IoError(std::string path, const std::string& what)
      : std::runtime_error(what + ": " + path), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace wavesense
