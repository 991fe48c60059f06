#pragma once

#include <stdexcept>
#include <string>

namespace swt {

/// Precondition violated by the caller (bad step, count, smoothing regime, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// A requested phase-space grid or evaluation point lies outside the data.
class OutOfDomain : public std::out_of_range {
 public:
  explicit OutOfDomain(const std::string& what) : std::out_of_range(what) {}
};

/// Input is valid in principle but outside what this library implements.
class Unsupported : public std::logic_error {
 public:
  explicit Unsupported(const std::string& what) : std::logic_error(what) {}
};

/// A solver stopped because a runtime diagnostic failed (e.g. mass reached the boundary).
class SolverAbort : public std::runtime_error {
 public:
  explicit SolverAbort(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed file, config or symbol text.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace swt
