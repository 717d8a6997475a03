#pragma once

#include <cstdint>

#include "lrk/design.hpp"
#include "lrk/kernels.hpp"
#include "lrk/matrix.hpp"
#include "lrk/spectral.hpp"

namespace lrk {

// sum_i E(Y(s_i) - P[Y(s_i) | span(B'Y)])^2
//   = trace(V) - trace((B'VB)^{-1} B'V^2B)
// for a full-column-rank coefficient matrix B (n x k).
double projection_residual(const Matrix& v, const Matrix& b, Exec exec = Exec::openmp);

struct OptimalityCReport {
    double eigen_residual = 0.0;      // residual at the top-k eigenvector subspace
    double tail_sum = 0.0;            // sum_{i>k} l_i
    double min_random_residual = 0.0; // best residual over the random trials
    std::size_t trials = 0;
    bool passes = false;
};

// Checks that the top-k eigenvector subspace attains the tail sum (relative
// 1e-8) and that `trials` seeded random subspaces never go below it.
OptimalityCReport optimality_c_check(const Matrix& v, std::size_t k, std::size_t trials,
                                     std::uint64_t seed, Exec exec = Exec::openmp);

// Nystrom eigenvalues of the projected-process kernel
// K*(s, x) = k(s)' V_n^{-1} k(x) on the same equal-weight quadrature grid
// as continuous_spectrum.
ContinuousSpectrum predictive_process_spectrum(const KernelSpec& spec, const Design& design,
                                               std::size_t quadrature_m,
                                               const AssembleOptions& opts = {});

struct OptimalityBDecomposition {
    double tail_star = 0.0;          // sum_{i>k} l*_i
    double residual_integral = 0.0;  // integral of K(s,s) - k(s)' V^{-1} k(s)
    double total() const { return tail_star + residual_integral; }
};

// The two terms of the integrated low-rank error minimum over subspaces of
// the observation span: the projected-process tail plus the projection
// residual integral, on a shared quadrature grid.
OptimalityBDecomposition optimality_b_decomposition(const KernelSpec& spec,
                                                    const Design& design, std::size_t k,
                                                    std::size_t quadrature_m,
                                                    const AssembleOptions& opts = {});

struct EckartYoungReport {
    double truncation_dist_sq = 0.0;   // |V - V_k|_F^2
    double tail_sq_sum = 0.0;          // sum_{i>k} l_i^2
    double min_random_dist_sq = 0.0;   // best |V - M|_F^2 over random rank-k M
    std::size_t trials = 0;
    bool passes = false;
};

// Checks |V - V_k|_F^2 = sum_{i>k} l_i^2 and that seeded random rank-k
// matrices never come closer in Frobenius distance.
EckartYoungReport eckart_young_check(const Matrix& v, std::size_t k, std::size_t trials,
                                     std::uint64_t seed, Exec exec = Exec::openmp);

}  // namespace lrk
