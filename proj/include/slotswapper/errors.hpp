#pragma once

#include <stdexcept>
#include <string>

namespace slotswapper {

/// A caller passed a value outside an operation's domain.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The base scheduler could not place every hop of every instance.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No connected graph satisfies the requested degree bounds.
class DegreeInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No admissible route exists for the requested endpoints.
class RouteInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact schedule entropy was requested on an instance too large to enumerate.
class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed topology, flow, schedule, or pool file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slotswapper
