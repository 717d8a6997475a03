#pragma once

#include <cstdint>
#include <vector>

#include "lrk/design.hpp"
#include "lrk/kernels.hpp"
#include "lrk/matrix.hpp"
#include "lrk/spectral.hpp"

namespace lrk {

enum class KrigingMode { exact, pseudo_rank, perturbed };

struct FitRequest {
    KrigingMode mode = KrigingMode::exact;
    std::size_t k = 0;       // rank for pseudo_rank / perturbed
    double tau = 0.0;        // perturbation for perturbed
    double clip_threshold = 1e-12;  // relative eigenvalue floor for pseudo-inversion

    static FitRequest exact() { return {}; }
    static FitRequest pseudo_rank(std::size_t k) {
        return {KrigingMode::pseudo_rank, k, 0.0, 1e-12};
    }
    static FitRequest perturbed(std::size_t k, double tau) {
        return {KrigingMode::perturbed, k, tau, 1e-12};
    }
};

struct FitOptions {
    Exec exec = Exec::openmp;
    std::size_t max_matrix_bytes = kDefaultMatrixBudget;
    // dense top-k up to this n, randomized block iteration beyond
    std::size_t dense_threshold = 2048;
    std::size_t oversampling = 10;
    std::size_t power_iterations = 4;
    std::uint64_t seed = 20260810;
};

// A fitted predictor. Exact mode stores the Cholesky factor of V_n;
// pseudo_rank / perturbed store the retained eigenpairs (eigenvalues at or
// below clip_threshold * l_1 are dropped from the rank-k sum). Immutable
// after fit; predict is safe to call concurrently.
class KrigingModel {
public:
    KrigingMode mode() const { return mode_; }
    const Design& design() const { return design_; }
    const KernelSpec& spec() const { return spec_; }
    std::size_t rank() const { return retained_; }
    double tau() const { return tau_; }
    // l_{k+1}: first eigenvalue past the requested rank (0 when k = n)
    double next_eigenvalue() const { return next_eigenvalue_; }
    const EigenSystem& eigensystem() const { return eigen_; }
    const Matrix& cholesky_factor() const { return factor_; }

private:
    friend KrigingModel fit(const KernelSpec&, const Design&, const FitRequest&,
                            const FitOptions&);
    KrigingModel() = default;

    Design design_;
    KernelSpec spec_;
    KrigingMode mode_ = KrigingMode::exact;
    std::size_t requested_k_ = 0;
    std::size_t retained_ = 0;
    double tau_ = 0.0;
    double clip_threshold_ = 1e-12;
    double next_eigenvalue_ = 0.0;
    Matrix factor_;      // exact mode
    EigenSystem eigen_;  // low-rank modes
};

struct Prediction {
    std::vector<double> weights;  // alpha(s); predicted value is weights' Y
    double variance = 0.0;        // K(s,s) - 2 w'k(s) + w' V w
    double weight_norm = 0.0;     // ||weights||_2
};

struct ExcessRisk {
    double excess = 0.0;  // variance(pseudo) - variance(exact)
    double bound = 0.0;   // ||alpha||^2 l_{k+1}
};

// Fits a model. Exact mode throws IllConditioned when the factorization
// hits a non-positive pivot (the documented signal to switch to a low-rank
// mode).
KrigingModel fit(const KernelSpec& spec, const Design& design, const FitRequest& request,
                 const FitOptions& opts = {});

Prediction predict(const KrigingModel& model, const double* s, Exec exec = Exec::openmp);
Prediction predict(const KrigingModel& model, const std::vector<double>& s,
                   Exec exec = Exec::openmp);

// Theorem-2 style comparison of a rank-k pseudo-inverse predictor against
// exact kriging weights at the same point.
ExcessRisk excess_risk(const KrigingModel& pseudo_model,
                       const std::vector<double>& exact_weights, const double* s,
                       Exec exec = Exec::openmp);

// In-sample mean squared error of the perturbed interpolant
// V (V_k + tau I)^{-1} Y via the spectral identity
// sum_{i<=k} l_i/(1+l_i/tau)^2 + sum_{i>k} l_i (1 - l_i/tau)^2.
double perturbation_mse(const std::vector<double>& eigenvalues, std::size_t k, double tau);

// Brute-force trace oracle for the same quantity:
// trace((I-A) V (I-A)') with A = V (V_k + tau I)^{-1} formed explicitly.
double perturbation_mse_oracle(const Matrix& v, std::size_t k, double tau,
                               Exec exec = Exec::openmp,
                               std::size_t max_matrix_bytes = kDefaultMatrixBudget);

// sum_{i>k} l_i^3 / sum_{i>k} l_i^2, the tau below which the tail term of
// the perturbation MSE is decreasing; never exceeds l_{k+1}. Zero tail
// returns 0.
double optimal_tau_threshold(const std::vector<double>& eigenvalues, std::size_t k);

// sum_{i>k} l_i: in-sample MSE of rank-k pseudo-inverse kriging.
double pseudo_insample_mse(const std::vector<double>& eigenvalues, std::size_t k);

}  // namespace lrk
