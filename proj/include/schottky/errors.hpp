#pragma once

#include <stdexcept>
#include <string>

namespace schottky {

// No valuation is available for the requested (p, ell) pair.
struct UnsupportedField : std::invalid_argument {
    explicit UnsupportedField(const std::string& what) : std::invalid_argument(what) {}
};

// Division by zero, inversion of zero, and similar.
struct ArithmeticError : std::domain_error {
    explicit ArithmeticError(const std::string& what) : std::domain_error(what) {}
};

// order_p_fixing called with a == b.
struct DegeneratePair : std::invalid_argument {
    explicit DegeneratePair(const std::string& what) : std::invalid_argument(what) {}
};

// A tree was requested for a configuration that is not clustered in separated pairs.
struct NotPaired : std::invalid_argument {
    explicit NotPaired(const std::string& what) : std::invalid_argument(what) {}
};

// Input violating a documented precondition (cardinality, infinity count, ...).
struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace schottky
