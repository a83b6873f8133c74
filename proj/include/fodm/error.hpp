#pragma once

#include <stdexcept>
#include <string>

namespace fodm {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed bytes: CSV cells, config documents, ontology XML.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// Structurally sound input that violates a semantic precondition.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Data on which the requested clustering cannot produce distinct centers.
class DegenerateDataError : public Error {
 public:
  explicit DegenerateDataError(const std::string& what) : Error(what) {}
};

/// A broken internal invariant; indicates a bug, not bad input.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace fodm
