#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lrk/design.hpp"
#include "lrk/exec.hpp"
#include "lrk/kernels.hpp"
#include "lrk/matrix.hpp"

namespace lrk {

inline constexpr std::size_t kDefaultMatrixBudget = std::size_t(2) << 30;  // 2 GiB

// Eigenpairs of a covariance matrix, eigenvalues non-increasing. Negative
// numerical eigenvalues are kept as computed (downstream pseudo-inversion
// clips, this type does not).
struct EigenSystem {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;  // n x k, column i pairs with eigenvalues[i]
    std::size_t n = 0;    // ambient dimension
    bool complete = false;

    std::size_t k() const { return eigenvalues.size(); }
};

// Nystrom approximations of the covariance operator's eigenvalues.
struct ContinuousSpectrum {
    std::vector<double> eigenvalues;  // non-increasing
    std::size_t quadrature_m = 0;     // nodes actually used (a d-th power)
    double domain_volume = 0.0;
};

struct TailSums {
    std::vector<double> cumulative;  // cumulative[k-1] = sum_{i<=k}, k = 1..n
    std::vector<double> tail;        // tail[k] = sum_{i>k}, k = 0..n-1
};

struct ConditionNumbers {
    double strict = 0.0;            // (l_1 + ridge) / (l_min + ridge)
    double paper_convention = 0.0;  // l_1 / ridge (ridge > 0 only)
};

struct AssembleOptions {
    Exec exec = Exec::openmp;
    std::size_t max_matrix_bytes = kDefaultMatrixBudget;
};

// V(i,j) = K(s_i, s_j), computed once per unordered pair and mirrored, so
// the result is exactly symmetric.
Matrix assemble_covariance(const KernelSpec& spec, const Design& design,
                           const AssembleOptions& opts = {});

// Full spectral decomposition, eigenvalues descending. See eigen_sym for
// the algorithm; negative numerical eigenvalues are reported unclipped.
EigenSystem dense_eigen(const Matrix& v, Exec exec = Exec::openmp);

// Eigenvalues only (skips accumulating the orthogonal factor).
std::vector<double> dense_eigenvalues(const Matrix& v, Exec exec = Exec::openmp);

// Applies V to a block: out = V * in.
using BlockOperator = std::function<void(const Matrix& in, Matrix& out)>;

// Randomized block subspace iteration for the top-k eigenpairs: a seeded
// n x (k + oversampling) Gaussian block, power_iterations applications of
// V with re-orthonormalization in between, then Rayleigh-Ritz on the final
// basis. Deterministic given the seed. The block is clamped to n columns,
// so k = n reproduces the dense decomposition.
EigenSystem truncated_eigen(const BlockOperator& apply, std::size_t n, std::size_t k,
                            std::size_t oversampling, std::size_t power_iterations,
                            std::uint64_t seed, Exec exec = Exec::openmp);
EigenSystem truncated_eigen(const Matrix& v, std::size_t k, std::size_t oversampling,
                            std::size_t power_iterations, std::uint64_t seed,
                            Exec exec = Exec::openmp);

// Equal-weight Nystrom estimate of the covariance operator's eigenvalues on
// a uniform grid of floor(quadrature_m^(1/d))^d midpoints: kernel-matrix
// eigenvalues scaled by |D| / m, descending. Their sum approximates the
// trace integral of K over the domain.
ContinuousSpectrum continuous_spectrum(const KernelSpec& spec, const Box& domain,
                                       std::size_t quadrature_m,
                                       const AssembleOptions& opts = {});

// Cumulative and tail sums of a descending spectrum; tails are accumulated
// smallest-first.
TailSums tail_sums(const std::vector<double>& eigenvalues);
inline TailSums tail_sums(const EigenSystem& es) { return tail_sums(es.eigenvalues); }

// strict = (l_1 + ridge)/(l_min + ridge); paper_convention = l_1 / ridge,
// the reading under which a rank-k + tau*I covariance has condition number
// (l_1 + tau)/tau ~ l_1/tau.
ConditionNumbers condition_number(const EigenSystem& es, double ridge);

}  // namespace lrk
