#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace kgpath {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input files, unreadable/unwritable paths.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid or inconsistent configuration (dims, unknown keys, bad flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Tensor shape mismatch; message names the op and the offending shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Lookup of a concept, relation, parameter, or key that does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

template <typename... Parts>
std::string msg(const Parts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace kgpath
