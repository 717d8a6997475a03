#include "lrk/kriging.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "lrk/error.hpp"
#include "lrk/linalg.hpp"

namespace lrk {

namespace {

std::vector<double> cross_covariance(const KernelSpec& spec, const Design& design,
                                     const double* s) {
    std::vector<double> k(design.n);
    for (std::size_t i = 0; i < design.n; ++i)
        k[i] = evaluate(spec, s, design.point(i), design.d);
    return k;
}

// V w with V assembled row by row on the fly; the models keep the design,
// not the n^2 matrix.
std::vector<double> apply_covariance(const KernelSpec& spec, const Design& design,
                                     const std::vector<double>& w, Exec exec) {
    const std::size_t n = design.n, d = design.d;
    std::vector<double> out(n, 0.0);
    const std::int64_t n_i = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (exec == Exec::openmp && n > 256)
    for (std::int64_t ii = 0; ii < n_i; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* xi = design.point(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += evaluate(spec, xi, design.point(j), d) * w[j];
        out[i] = acc;
    }
    return out;
}

double quadratic_form_variance(const KernelSpec& spec, const Design& design,
                               const double* s, const std::vector<double>& w, Exec exec) {
    const double kss = evaluate(spec, s, s, design.d);
    const std::vector<double> ks = cross_covariance(spec, design, s);
    const std::vector<double> vw = apply_covariance(spec, design, w, exec);
    double wk = 0.0, wvw = 0.0;
    for (std::size_t i = 0; i < design.n; ++i) {
        wk += w[i] * ks[i];
        wvw += w[i] * vw[i];
    }
    return kss - 2.0 * wk + wvw;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

KrigingModel fit(const KernelSpec& spec, const Design& design, const FitRequest& request,
                 const FitOptions& opts) {
    spec.validate();
    design.validate();
    const std::size_t n = design.n;
    KrigingModel model;
    model.design_ = design;
    model.spec_ = spec;
    model.mode_ = request.mode;
    model.clip_threshold_ = request.clip_threshold;

    if (request.mode == KrigingMode::exact) {
        Matrix v = assemble_covariance(spec, design, {opts.exec, opts.max_matrix_bytes});
        auto chol = linalg::cholesky(v, opts.exec);
        if (!chol.ok)
            throw IllConditioned(
                "fit: Cholesky factorization of V_n failed at pivot " +
                    std::to_string(chol.fail_index) + " (value " +
                    std::to_string(chol.fail_value) +
                    "); the kernel matrix is numerically singular - use a "
                    "pseudo-rank or perturbed fit",
                chol.fail_index, chol.fail_value, chol.pivot_ratio());
        model.factor_ = std::move(chol.factor);
        return model;
    }

    require(request.k >= 1 && request.k <= n, "fit: rank k must satisfy 1 <= k <= n");
    if (request.mode == KrigingMode::perturbed)
        require(request.tau > 0.0, "fit: perturbed mode needs tau > 0");
    model.requested_k_ = request.k;
    model.tau_ = request.tau;

    // top-(k+1) eigenpairs so the l_{k+1} bound term is available
    const std::size_t want = std::min(n, request.k + 1);
    EigenSystem es;
    {
        Matrix v = assemble_covariance(spec, design, {opts.exec, opts.max_matrix_bytes});
        es = n <= opts.dense_threshold
                 ? dense_eigen(v, opts.exec)
                 : truncated_eigen(v, want, opts.oversampling, opts.power_iterations,
                                   opts.seed, opts.exec);
    }
    model.next_eigenvalue_ = request.k < n ? es.eigenvalues[request.k] : 0.0;

    // retain eigenpairs above the relative clip threshold
    const double floor = request.clip_threshold * std::max(es.eigenvalues[0], 0.0);
    std::size_t retained = 0;
    while (retained < request.k && es.eigenvalues[retained] > floor) ++retained;
    require(retained >= 1, "fit: no eigenvalue above the clip threshold");
    EigenSystem top;
    top.n = n;
    top.complete = (retained == n);
    top.eigenvalues.assign(es.eigenvalues.begin(),
                           es.eigenvalues.begin() + static_cast<std::ptrdiff_t>(retained));
    top.eigenvectors = Matrix(n, retained);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < retained; ++j) top.eigenvectors(i, j) = es.eigenvectors(i, j);
    model.retained_ = retained;
    model.eigen_ = std::move(top);
    return model;
}

Prediction predict(const KrigingModel& model, const double* s, Exec exec) {
    const Design& design = model.design();
    require(design.domain.contains(s), "predict: point outside the domain");
    Prediction pred;
    std::vector<double> ks = cross_covariance(model.spec(), design, s);

    if (model.mode() == KrigingMode::exact) {
        pred.weights = ks;
        linalg::cholesky_solve(model.cholesky_factor(), pred.weights);
    } else {
        const EigenSystem& es = model.eigensystem();
        const std::size_t n = design.n, k = model.rank();
        std::vector<double> proj(k, 0.0);  // u_i' k(s)
        for (std::size_t i = 0; i < n; ++i) {
            const double* ui = es.eigenvectors.row(i);
            for (std::size_t j = 0; j < k; ++j) proj[j] += ui[j] * ks[i];
        }
        pred.weights.assign(n, 0.0);
        if (model.mode() == KrigingMode::pseudo_rank) {
            for (std::size_t j = 0; j < k; ++j) proj[j] /= es.eigenvalues[j];
            for (std::size_t i = 0; i < n; ++i) {
                const double* ui = es.eigenvectors.row(i);
                double acc = 0.0;
                for (std::size_t j = 0; j < k; ++j) acc += ui[j] * proj[j];
                pred.weights[i] = acc;
            }
        } else {
            // (V_k + tau I)^{-1} = tau^{-1} I + sum_i ((l_i+tau)^{-1} - tau^{-1}) u_i u_i'
            const double tau = model.tau();
            for (std::size_t j = 0; j < k; ++j)
                proj[j] *= 1.0 / (es.eigenvalues[j] + tau) - 1.0 / tau;
            for (std::size_t i = 0; i < n; ++i) {
                const double* ui = es.eigenvectors.row(i);
                double acc = ks[i] / tau;
                for (std::size_t j = 0; j < k; ++j) acc += ui[j] * proj[j];
                pred.weights[i] = acc;
            }
        }
    }

    pred.variance = quadratic_form_variance(model.spec(), design, s, pred.weights, exec);
    pred.weight_norm = norm2(pred.weights);
    return pred;
}

Prediction predict(const KrigingModel& model, const std::vector<double>& s, Exec exec) {
    require(s.size() == model.design().d, "predict: point dimension mismatch");
    return predict(model, s.data(), exec);
}

ExcessRisk excess_risk(const KrigingModel& pseudo_model,
                       const std::vector<double>& exact_weights, const double* s,
                       Exec exec) {
    require(pseudo_model.mode() == KrigingMode::pseudo_rank,
            "excess_risk: model must be a pseudo-rank fit");
    require(exact_weights.size() == pseudo_model.design().n,
            "excess_risk: exact weight vector has wrong length");
    const Prediction pseudo = predict(pseudo_model, s, exec);
    const double exact_variance = quadratic_form_variance(
        pseudo_model.spec(), pseudo_model.design(), s, exact_weights, exec);
    ExcessRisk er;
    er.excess = pseudo.variance - exact_variance;
    const double alpha_norm = norm2(exact_weights);
    er.bound = alpha_norm * alpha_norm * pseudo_model.next_eigenvalue();
    return er;
}

double perturbation_mse(const std::vector<double>& eigenvalues, std::size_t k, double tau) {
    require(tau > 0.0, "perturbation_mse: tau must be > 0");
    require(k <= eigenvalues.size(), "perturbation_mse: k exceeds spectrum size");
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = 1.0 + eigenvalues[i] / tau;
        head += eigenvalues[i] / (r * r);
    }
    for (std::size_t i = eigenvalues.size(); i-- > k;) {
        const double r = 1.0 - eigenvalues[i] / tau;
        tail += eigenvalues[i] * r * r;
    }
    return head + tail;
}

double perturbation_mse_oracle(const Matrix& v, std::size_t k, double tau, Exec exec,
                               std::size_t max_matrix_bytes) {
    require(tau > 0.0, "perturbation_mse_oracle: tau must be > 0");
    const std::size_t n = v.rows();
    require(n * n * sizeof(double) <= max_matrix_bytes,
            "perturbation_mse_oracle: matrix exceeds memory budget");
    EigenSystem es = dense_eigen(v, exec);
    require(k <= n, "perturbation_mse_oracle: k exceeds n");
    // V_k + tau I from the top-k eigenpairs
    Matrix vk(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* ui_row = es.eigenvectors.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double* uj_row = es.eigenvectors.row(j);
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) acc += es.eigenvalues[t] * ui_row[t] * uj_row[t];
            vk(i, j) = acc;
        }
        vk(i, i) += tau;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (vk(i, j) + vk(j, i));
            vk(i, j) = vk(j, i) = s;
        }
    auto chol = linalg::cholesky(vk, exec);
    require(chol.ok, "perturbation_mse_oracle: V_k + tau I not positive definite");
    // A' = (V_k + tau I)^{-1} V, so A = V (V_k + tau I)^{-1}
    Matrix at = v;
    linalg::cholesky_solve_matrix(chol.factor, at);
    // M = I - A, with A(i,j) = at(j,i)
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = (i == j ? 1.0 : 0.0) - at(j, i);
    Matrix mv = linalg::multiply(m, v, exec);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* mvi = mv.row(i);
        const double* mi = m.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += mvi[j] * mi[j];
        trace += acc;
    }
    return trace;
}

double optimal_tau_threshold(const std::vector<double>& eigenvalues, std::size_t k) {
    require(k < eigenvalues.size(), "optimal_tau_threshold: need k < n");
    double num = 0.0, den = 0.0;
    for (std::size_t i = eigenvalues.size(); i-- > k;) {
        const double l = eigenvalues[i];
        num += l * l * l;
        den += l * l;
    }
    if (den == 0.0) return 0.0;
    return num / den;
}

double pseudo_insample_mse(const std::vector<double>& eigenvalues, std::size_t k) {
    double s = 0.0;
    for (std::size_t i = eigenvalues.size(); i-- > k;) s += eigenvalues[i];
    return s;
}

}  // namespace lrk
