#pragma once

#include <stdexcept>
#include <string>

namespace ptd {

// Every failure raised by the library derives from Error so callers can catch
// the whole family in one place; the subclasses name the violated contract.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidObjectError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct OrderingError : Error { using Error::Error; };
struct SelfComparisonError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct ProtocolError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct ComparisonError : Error { using Error::Error; };

}  // namespace ptd
