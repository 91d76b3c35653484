#pragma once

#include <stdexcept>
#include <string>

namespace ivsfun {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Coefficient criterion not met within the term budget.
struct CapExceeded : std::runtime_error {
    CapExceeded(const std::string& msg, double achieved)
        : std::runtime_error(msg), achieved_criterion(achieved) {}
    double achieved_criterion;
};

// Normalizer sum underflowed or lost all significance.
struct DegenerateDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivergentFunctional : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateRates : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MaxTermsExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidTail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ivsfun
