#pragma once

#include <cstddef>
#include <vector>

#include "lrk/exec.hpp"
#include "lrk/matrix.hpp"

namespace lrk::linalg {

// C = A * B. Parallel over rows of C; each row is accumulated in a fixed
// serial order, so the result does not depend on the thread count.
Matrix multiply(const Matrix& a, const Matrix& b, Exec exec = Exec::openmp);

// C = A' * B.
Matrix crossprod(const Matrix& a, const Matrix& b, Exec exec = Exec::openmp);

// y = A * x.
std::vector<double> multiply_vec(const Matrix& a, const std::vector<double>& x,
                                 Exec exec = Exec::openmp);

double frobenius_norm(const Matrix& a);

double max_abs_asymmetry(const Matrix& a);

// Replaces the columns of a (rows >= cols) with an orthonormal basis of
// their span (Householder QR, Q1 extraction). Serial; panels are small.
void orthonormalize_columns(Matrix& a);

struct CholeskyResult {
    Matrix factor;            // lower-triangular L with V = L L' (valid iff ok)
    bool ok = false;
    std::size_t fail_index = 0;  // first non-positive pivot (iff !ok)
    double fail_value = 0.0;
    double min_pivot = 0.0;   // over columns factored so far, of L(j,j)^2
    double max_pivot = 0.0;
    double pivot_ratio() const { return min_pivot > 0.0 ? max_pivot / min_pivot : 0.0; }
};

// Left-looking Cholesky of a symmetric matrix. Does not throw on breakdown;
// the caller decides what a non-positive pivot means.
CholeskyResult cholesky(const Matrix& v, Exec exec = Exec::openmp);

// Solve L L' x = b in place.
void cholesky_solve(const Matrix& l, std::vector<double>& b);

// Solve L L' X = B in place, column by column.
void cholesky_solve_matrix(const Matrix& l, Matrix& b);

// Solve L X = B in place (B is n x m), i.e. X = L^{-1} B.
void solve_lower_matrix(const Matrix& l, Matrix& b);

}  // namespace lrk::linalg
