#pragma once

#include <stdexcept>
#include <string>

namespace contactdd {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Degenerate elements, untagged edges, broken connectivity.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// A boundary selector matched no edge.
class NoMatchError : public MeshError {
 public:
  using MeshError::MeshError;
};

/// Contact and Dirichlet tags requested on the same edge.
class TagConflictError : public MeshError {
 public:
  using MeshError::MeshError;
};

class InvalidMaterial : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Paired contact traces have different node counts.
class NonmatchingMeshError : public Error {
 public:
  using Error::Error;
};

/// Paired contact nodes are not aligned along the interface.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

/// Raised when an iteration produces non-finite values or keeps growing.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace contactdd
