#pragma once

#include <stdexcept>
#include <string>

namespace equilib {

// Base class for every failure reported by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

// Malformed instance file.
class ParseError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// x coincides with a charge position.
class SingularPoint : public Error {
public:
    using Error::Error;
};

class DegreeOverflow : public Error {
public:
    using Error::Error;
};

class InvalidTau : public Error {
public:
    using Error::Error;
};

class EmptySum : public Error {
public:
    using Error::Error;
};

class EmptyProduct : public Error {
public:
    using Error::Error;
};

class TooFewCharges : public Error {
public:
    using Error::Error;
};

class UnboundedDomain : public Error {
public:
    using Error::Error;
};

class EmptyPolytope : public Error {
public:
    using Error::Error;
};

class SingularHessian : public Error {
public:
    using Error::Error;
};

class TooFine : public Error {
public:
    using Error::Error;
};

// Double precision cannot resolve the requested tolerance.
class PrecisionLimit : public Error {
public:
    using Error::Error;
};

// The feasibility kernel hit its subdivision cap. `cell` names the grid cell
// being processed when the caller knows it.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& what, std::string cell = {})
        : Error(what), cell_(std::move(cell)) {}
    const std::string& cell() const noexcept { return cell_; }
    void set_cell(std::string cell) { cell_ = std::move(cell); }

private:
    std::string cell_;
};

} // namespace equilib
