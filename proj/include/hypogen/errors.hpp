#pragma once
// Error taxonomy shared across the library.

#include <stdexcept>
#include <string>
#include <utility>

namespace hypogen {

enum class ErrorKind {
    Io,
    Parse,
    Pattern,
    Argument,
    Config,
    Backend,
    Generation,
    Paraphrase,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Io: return "io";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Pattern: return "pattern";
        case ErrorKind::Argument: return "argument";
        case ErrorKind::Config: return "config";
        case ErrorKind::Backend: return "backend";
        case ErrorKind::Generation: return "generation";
        case ErrorKind::Paraphrase: return "paraphrase";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::string(error_kind_name(kind)) + " error: " + message),
          kind_(kind),
          message_(std::move(message)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

// Pipeline failures carry the stage that raised them.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& cause)
        : Error(cause.kind(), "stage " + stage + ": " + cause.message()), stage_(std::move(stage)) {}

    StageError(std::string stage, ErrorKind kind, const std::string& message)
        : Error(kind, "stage " + stage + ": " + message), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace hypogen
