#pragma once

#include <stdexcept>
#include <string>

namespace hemopipe {

/// Base class for all pipeline errors. `code()` is a short stable
/// machine-readable identifier used by the CLI error reporting.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error("validation", msg) {}
};

struct RangeError : Error {
    explicit RangeError(const std::string& msg) : Error("range", msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error("domain", msg) {}
};

struct SingularityError : Error {
    explicit SingularityError(const std::string& msg) : Error("singular", msg) {}
};

struct InsufficientDataError : Error {
    explicit InsufficientDataError(const std::string& msg) : Error("insufficient-data", msg) {}
};

struct DegenerateRegressorError : Error {
    explicit DegenerateRegressorError(const std::string& msg) : Error("degenerate-regressor", msg) {}
};

struct ParameterError : Error {
    explicit ParameterError(const std::string& msg) : Error("parameter", msg) {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& msg) : Error("schema", msg) {}
};

struct DegenerateTrainingError : Error {
    explicit DegenerateTrainingError(const std::string& msg) : Error("degenerate-training", msg) {}
};

struct FoldError : Error {
    explicit FoldError(const std::string& msg) : Error("fold", msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("io", msg) {}
};

}  // namespace hemopipe
