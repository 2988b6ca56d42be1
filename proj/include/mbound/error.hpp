#ifndef MBOUND_ERROR_HPP
#define MBOUND_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mbound {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two operands of different order.
class DimensionError : public Error {
public:
    DimensionError() : Error("order mismatch") {}
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Argument outside the operation's domain (nonpositive eps, bad exponents, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// The matrix does not belong to the class an operation requires
// (nonnegative, Z-matrix, nonsingular M-matrix).
class ClassError : public Error {
public:
    explicit ClassError(const std::string& msg) : Error(msg) {}
};

class SingularError : public Error {
public:
    explicit SingularError(const std::string& msg) : Error(msg) {}
};

// Power iteration ran out of iterations; carries the last estimate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double best_estimate, double residual)
        : Error(msg), best_estimate_(best_estimate), residual_(residual) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double residual() const noexcept { return residual_; }

private:
    double best_estimate_;
    double residual_;
};

// Malformed matrix file. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : Error(format(msg, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& msg, std::size_t line, std::size_t column)
    {
        if (line == 0) return msg;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
    }

    std::size_t line_;
    std::size_t column_;
};

} // namespace mbound

#endif
