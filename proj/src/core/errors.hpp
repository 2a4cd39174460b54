#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hexflow {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// A value would leave the representable range (lengths past the cap,
// cosh/sinh overflow, 1/(cosh l - 1) past 1e300).
class RangeError : public Error {
public:
    using Error::Error;
};

// Conformal factor outside the admissible set. Carries the violated edge id
// (-1 when no edge applies) and the signed margin at the violation.
class AdmissibilityError : public Error {
public:
    AdmissibilityError(int edge_id, double margin, const std::string& msg)
        : Error(msg), edge_id_(edge_id), margin_(margin) {}
    int edge_id() const { return edge_id_; }
    double margin() const { return margin_; }

private:
    int edge_id_;
    double margin_;
};

// Combinatorial structure failed validation.
class ValidationError : public Error {
public:
    ValidationError(std::vector<std::string> problems, const std::string& msg)
        : Error(msg), problems_(std::move(problems)) {}
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// Bad call arguments: size mismatches, nonpositive targets, null inputs.
class UsageError : public Error {
public:
    using Error::Error;
};

// Numerical breakdown: quadrature refinement exhausted, Cholesky failure.
class NumericError : public Error {
public:
    using Error::Error;
};

// Iteration budget exhausted before reaching the tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(double residual, const std::string& msg)
        : Error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// Step size collapsed below the useful floor.
class StiffnessError : public Error {
public:
    using Error::Error;
};

class ProbeError : public Error {
public:
    using Error::Error;
};

}  // namespace hexflow
