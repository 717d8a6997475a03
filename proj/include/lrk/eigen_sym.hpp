#pragma once

#include <vector>

#include "lrk/exec.hpp"
#include "lrk/matrix.hpp"

namespace lrk::linalg {

struct SymEigenResult {
    std::vector<double> values;  // descending
    Matrix vectors;              // n x n, column j pairs with values[j]; empty if not requested
};

// Full eigendecomposition of a symmetric matrix: Householder reduction to
// tridiagonal form followed by implicit-shift QL, or cyclic Jacobi for
// n <= 64. Deterministic for a given input regardless of thread count.
// Throws InvalidArgument if the input is asymmetric beyond 1e-12 per entry,
// NoConvergence if the QL iteration stalls.
SymEigenResult eigen_sym(const Matrix& a, bool want_vectors, Exec exec = Exec::openmp);

// Jacobi path, exposed for tests (n <= 64 enforced).
SymEigenResult jacobi_eigen(const Matrix& a, bool want_vectors);

}  // namespace lrk::linalg
