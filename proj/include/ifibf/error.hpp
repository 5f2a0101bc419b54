#pragma once

#include <stdexcept>
#include <string>

namespace ifibf {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Parameter outside its mathematical domain (p not in (0,1), m = 0, ...).
struct InvalidParameter : Error {
  explicit InvalidParameter(const std::string& what) : Error(what) {}
};

// An encoded name or serialized blob does not fit the filter geometry.
struct GeometryMismatch : Error {
  explicit GeometryMismatch(const std::string& what) : Error(what) {}
};

// Malformed text input (names, topology files, streams).
struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Malformed binary input (wire names, filter blobs).
struct DecodeError : Error {
  explicit DecodeError(const std::string& what) : Error(what) {}
};

// An estimator was finalized with nothing observed.
struct NoData : Error {
  explicit NoData(const std::string& what) : Error(what) {}
};

// A node id that the topology or database does not know.
struct UnknownNode : Error {
  explicit UnknownNode(const std::string& what) : Error(what) {}
};

}  // namespace ifibf
