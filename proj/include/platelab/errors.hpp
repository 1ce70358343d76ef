#pragma once

#include <stdexcept>
#include <string>

namespace platelab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
public:
  using Error::Error;
};

class ParameterError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class DegenerateSpace : public Error {
public:
  using Error::Error;
};

class BoundaryMismatch : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class SingularMatrix : public Error {
public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
  using Error::Error;
};

class WindowError : public Error {
public:
  using Error::Error;
};

class NonpositiveEnergy : public Error {
public:
  using Error::Error;
};

class DegenerateInterval : public Error {
public:
  using Error::Error;
};

class PreconditionViolated : public Error {
public:
  using Error::Error;
};

}  // namespace platelab
