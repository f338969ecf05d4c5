#pragma once

#include <stdexcept>
#include <string>

namespace roughweyl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Structural problems with a mesh or a mesh file.
class MeshError : public Error {
public:
  using Error::Error;
};

// Bad experiment configuration (unknown keys, malformed field specs).
class ConfigError : public Error {
public:
  using Error::Error;
};

// The continuous problem is ill-posed as stated: zero weight mean on a
// Neumann problem, comparability violations, singular samples.
class ModelingError : public Error {
public:
  using Error::Error;
};

// Factorization or eigensolver failure.
class SolverError : public Error {
public:
  using Error::Error;
};

} // namespace roughweyl
