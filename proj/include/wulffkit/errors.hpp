#pragma once

#include <stdexcept>
#include <string>

namespace wulffkit {

// Grammar / spec-text problems. Carries the byte offset of the first
// offending character in the input.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Invalid parameters: nonpositive axis, dimension mismatch, resolution bounds.
class SpecError : public std::runtime_error {
public:
    explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation left the declared domain: log of nonpositive, sqrt of negative,
// division by ~0.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures in the pipeline: degenerate metric, pole proximity,
// Cholesky breakdown (= convexity violation at a point).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class CholeskyError : public NumericalError {
public:
    explicit CholeskyError(const std::string& msg) : NumericalError(msg) {}
};

} // namespace wulffkit
