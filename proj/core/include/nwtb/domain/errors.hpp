#pragma once

#include <stdexcept>
#include <string>

namespace nwtb {

// A procedure was rejected by a network function's state machine
// (double registration, handover to the serving cell, ...).
class ProcedureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Error carrying an HTTP-ish status code (400, 404, ...). Service handlers
// translate it into a response with that status.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

// The destination could not be reached at all. Distinct from any status.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scenario or NWDAF configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nwtb
