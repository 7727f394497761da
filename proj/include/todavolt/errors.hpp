#pragma once

#include <stdexcept>
#include <string>

namespace todavolt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state or tensor of the wrong phase-space kind was supplied.
class KindError : public Error {
 public:
  using Error::Error;
};

/// Point outside the open domain (a_i <= 0, wrong parity, bad size, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference stencil left the domain even after shrinking the step.
class StencilError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Spectrum is too close to degenerate for the spectral map.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A bivector failed the involution-invariance check required for reduction.
class InvarianceViolation : public Error {
 public:
  using Error::Error;
};

/// Integration reached a state with some a_i <= 0.
class DomainExit : public Error {
 public:
  using Error::Error;
};

class StepUnderflow : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace todavolt
