#pragma once

#include <stdexcept>
#include <string>

namespace lrk {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid arguments / violated preconditions.
struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// A dense allocation would exceed the configured matrix memory budget.
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

// Triangular factorization hit a non-positive pivot. Carries the pivot
// diagnostics so callers can report the conditioning evidence.
struct IllConditioned : Error {
    IllConditioned(const std::string& msg, std::size_t pivot_index,
                   double pivot_value, double pivot_ratio)
        : Error(msg),
          pivot_index(pivot_index),
          pivot_value(pivot_value),
          pivot_ratio(pivot_ratio) {}
    std::size_t pivot_index;
    double pivot_value;
    double pivot_ratio;
};

// Iterative eigenvalue reduction failed to converge.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgument(msg);
}

}  // namespace lrk
