#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace turbmit {

// Base class for every error raised by the library. `category()` is the
// short machine-readable tag the CLI prints as `error: <category>: ...`.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* category() const noexcept = 0;
};

// Invalid argument or violated precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "parameter"; }
};

// Malformed file contents. `offset()` is the byte position where parsing
// failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  const char* category() const noexcept override { return "format"; }
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

// File system failure: missing file, unreadable image, failed write.
class IoError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "io"; }
};

// A computation produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "numeric"; }
};

}  // namespace turbmit
