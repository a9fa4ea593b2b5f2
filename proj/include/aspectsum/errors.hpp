#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aspectsum {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration: unbound template placeholder, unknown config key value, etc.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A domain value violates one of its invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Persistent storage could not be read or written.
class StorageError : public Error {
public:
    using Error::Error;
};

/// A table file is missing a required column or is unreadable.
class SchemaError : public Error {
public:
    using Error::Error;
};

enum class GatewayErrorCode {
    ExhaustedRetries,
    Timeout,
    AuthFailure,
    MalformedOutput,
    InvalidRequest,
};

std::string_view to_string(GatewayErrorCode code);

class GatewayError : public Error {
public:
    GatewayError(GatewayErrorCode code, const std::string& message)
        : Error(std::string(to_string(code)) + ": " + message), code_(code) {}

    GatewayErrorCode code() const noexcept { return code_; }

private:
    GatewayErrorCode code_;
};

}  // namespace aspectsum
