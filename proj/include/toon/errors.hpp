#ifndef TOON_ERRORS_HPP
#define TOON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace toon {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (range, size, ordering).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two operands disagree on width, height, channel count or length.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The filesystem refused a read or write, or the file does not exist.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File content is of a kind we do not read (wrong magic, unsupported variant).
class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

/// File announces a supported format but its header or payload is damaged.
class CorruptFile : public Error {
 public:
  using Error::Error;
};

}  // namespace toon

#endif  // TOON_ERRORS_HPP
