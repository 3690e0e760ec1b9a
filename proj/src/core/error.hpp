#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace apg {

enum class ErrorCode {
    InvalidArgument,  // bad inputs, violated preconditions
    Config,           // unknown names, malformed config
    Io,               // file system failures
    Transport,        // network failure after retries (transient)
    Provider,         // permanent provider-side rejection (HTTP 4xx)
    Capability,       // provider lacks a required feature (e.g. logprobs)
    Optimization,     // optimizer could not make progress (e.g. unparsable output)
    Partial,          // some work completed; message lists what failed
    Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Transport failure that exhausted its retry budget.
class TransportError : public Error {
public:
    TransportError(std::string message, int attempts)
        : Error(ErrorCode::Transport, std::move(message)), attempts_(attempts) {}

    int attempts() const noexcept { return attempts_; }

private:
    int attempts_ = 0;
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::Config: return "config";
        case ErrorCode::Io: return "io";
        case ErrorCode::Transport: return "transport";
        case ErrorCode::Provider: return "provider";
        case ErrorCode::Capability: return "capability";
        case ErrorCode::Optimization: return "optimization";
        case ErrorCode::Partial: return "partial";
        case ErrorCode::Internal: return "internal";
    }
    return "unknown";
}

}  // namespace apg
