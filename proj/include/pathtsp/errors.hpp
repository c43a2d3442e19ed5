#pragma once

#include <stdexcept>
#include <string>

namespace pathtsp {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad TSPLIB document, invalid endpoints, broken metric.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A certified internal inconsistency: a runtime invariant that should hold
/// for every correct run was violated (oracle contract breach, disconnected
/// support of a Held-Karp point, wrong parity set, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// A resource guard fired: rational bit-size limit, instance size limit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace pathtsp
