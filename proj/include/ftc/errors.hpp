#pragma once

#include <stdexcept>
#include <string>

namespace ftc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration: missing columns, empty prompt classes, unreadable files.
struct ConfigError : Error {
  using Error::Error;
};

// Violated precondition on a function argument.
struct ArgumentError : Error {
  using Error::Error;
};

// Too many malformed dataset rows.
struct DatasetError : Error {
  using Error::Error;
};

// A span could not be located in the hypothesis.
struct NoMatchError : Error {
  using Error::Error;
};

// Network-level failure; the caller may retry.
struct TransportError : Error {
  using Error::Error;
};

// The remote side answered, but not with something we understand.
struct ProtocolError : Error {
  ProtocolError(const std::string& message, int status = 0, std::string raw = {})
      : Error(message), status(status), raw_body(std::move(raw)) {}

  int status;
  std::string raw_body;
};

}  // namespace ftc
