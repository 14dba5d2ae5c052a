#pragma once

#include <stdexcept>
#include <string>

namespace dpg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected input (degenerate geometry, out-of-range parameters, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Element assembly failed, e.g. non-finite coefficient data or a test
/// Gram matrix that is not positive definite.
class AssemblyError : public Error {
 public:
  using Error::Error;
};

/// The global system could not be solved.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// API misuse, such as estimating on a mesh the solution was not computed on.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpg
