#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aal {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  enum class Kind { Syntax, UnknownConnective, ArityMismatch };

  ParseError(Kind kind, std::size_t offset, const std::string& what)
      : Error("parse error at byte " + std::to_string(offset) + ": " + what), kind_(kind), offset_(offset) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// A formula, algebra or morphism was used with a signature it does not belong to.
class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A bounded search would exceed its configured limit.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

class NotImplicative : public Error {
 public:
  using Error::Error;
};

class NotHeyting : public Error {
 public:
  using Error::Error;
};

}  // namespace aal
