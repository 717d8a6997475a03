#include "lrk/optimality.hpp"

#include <cmath>
#include <limits>

#include "lrk/error.hpp"
#include "lrk/linalg.hpp"
#include "lrk/rng.hpp"

namespace lrk {

double projection_residual(const Matrix& v, const Matrix& b, Exec exec) {
    const std::size_t n = v.rows(), k = b.cols();
    require(k == 0 || b.rows() == n, "projection_residual: B row count mismatch");
    require(k <= n, "projection_residual: bad subspace dimension");
    double trace_v = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace_v += v(i, i);
    if (k == 0) return trace_v;

    Matrix vb = linalg::multiply(v, b, exec);        // V B
    Matrix bvb = linalg::crossprod(b, vb, exec);     // B' V B
    Matrix bv2b = linalg::crossprod(vb, vb, exec);   // B' V^2 B
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const double s = 0.5 * (bvb(i, j) + bvb(j, i));
            bvb(i, j) = bvb(j, i) = s;
        }
    auto chol = linalg::cholesky(bvb, exec);
    if (!chol.ok)
        throw IllConditioned("projection_residual: B'VB is numerically rank deficient",
                             chol.fail_index, chol.fail_value, chol.pivot_ratio());
    Matrix x = bv2b;
    linalg::cholesky_solve_matrix(chol.factor, x);   // (B'VB)^{-1} B'V^2B
    double trace_proj = 0.0;
    for (std::size_t i = 0; i < k; ++i) trace_proj += x(i, i);
    return trace_v - trace_proj;
}

OptimalityCReport optimality_c_check(const Matrix& v, std::size_t k, std::size_t trials,
                                     std::uint64_t seed, Exec exec) {
    const std::size_t n = v.rows();
    require(k <= n, "optimality_c_check: k exceeds n");
    OptimalityCReport report;
    report.trials = trials;

    EigenSystem es = dense_eigen(v, exec);
    for (std::size_t i = n; i-- > k;) report.tail_sum += es.eigenvalues[i];
    if (k == 0) {
        report.eigen_residual = projection_residual(v, Matrix(), exec);
    } else {
        Matrix bk(n, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) bk(i, j) = es.eigenvectors(i, j);
        report.eigen_residual = projection_residual(v, bk, exec);
    }

    double best = std::numeric_limits<double>::infinity();
    if (k > 0) {
        for (std::size_t t = 0; t < trials; ++t) {
            Rng rng(Rng::derive_seed(seed, t));
            Matrix b(n, k);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < k; ++j) b(i, j) = rng.normal();
            best = std::min(best, projection_residual(v, b, exec));
        }
    }
    report.min_random_residual = trials > 0 && k > 0 ? best : report.eigen_residual;

    const double scale = std::abs(report.tail_sum) + 1e-30;
    const bool exact_at_eigen =
        std::abs(report.eigen_residual - report.tail_sum) <= 1e-8 * std::max(scale, 1.0);
    const bool dominated = report.min_random_residual >= report.tail_sum - 1e-8 * std::max(scale, 1.0);
    report.passes = exact_at_eigen && dominated;
    return report;
}

ContinuousSpectrum predictive_process_spectrum(const KernelSpec& spec, const Design& design,
                                               std::size_t quadrature_m,
                                               const AssembleOptions& opts) {
    const std::size_t n = design.n, d = design.d;
    require(quadrature_m >= 100, "predictive_process_spectrum: quadrature_m must be >= 100");

    // shared quadrature grid (midpoint rule, |D|/m weights)
    std::size_t g = static_cast<std::size_t>(std::floor(
        std::pow(static_cast<double>(quadrature_m), 1.0 / static_cast<double>(d)) + 1e-9));
    if (g < 2) g = 2;
    std::size_t m = 1;
    for (std::size_t a = 0; a < d; ++a) m *= g;
    require(m * m * sizeof(double) <= opts.max_matrix_bytes,
            "predictive_process_spectrum: quadrature matrix exceeds memory budget");

    Matrix v = assemble_covariance(spec, design, opts);
    auto chol = linalg::cholesky(v, opts.exec);
    if (!chol.ok)
        throw IllConditioned("predictive_process_spectrum: V_n factorization failed",
                             chol.fail_index, chol.fail_value, chol.pivot_ratio());

    // C(q, j) = K(node_q, s_j); K* matrix on nodes is (C L^{-T}) (C L^{-T})'
    Matrix c(m, n);
    std::vector<double> node(d);
    for (std::size_t q = 0; q < m; ++q) {
        std::size_t code = q;
        for (std::size_t a = 0; a < d; ++a) {
            const std::size_t gi = code % g;
            code /= g;
            node[a] = design.domain.lo[a] +
                      (design.domain.hi[a] - design.domain.lo[a]) *
                          (static_cast<double>(gi) + 0.5) / static_cast<double>(g);
        }
        for (std::size_t j = 0; j < n; ++j)
            c(q, j) = evaluate(spec, node.data(), design.point(j), d);
    }
    // K* on the nodes is W W' with W = C L^{-T}, i.e. W' = L^{-1} C'
    Matrix wt(n, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) wt(j, i) = c(i, j);
    linalg::solve_lower_matrix(chol.factor, wt);
    Matrix kstar = linalg::crossprod(wt, wt, opts.exec);
    std::vector<double> vals = dense_eigenvalues(kstar, opts.exec);
    const double weight = design.domain.volume() / static_cast<double>(m);
    for (double& x : vals) x *= weight;
    ContinuousSpectrum cs;
    cs.eigenvalues = std::move(vals);
    cs.quadrature_m = m;
    cs.domain_volume = design.domain.volume();
    return cs;
}

OptimalityBDecomposition optimality_b_decomposition(const KernelSpec& spec,
                                                    const Design& design, std::size_t k,
                                                    std::size_t quadrature_m,
                                                    const AssembleOptions& opts) {
    const std::size_t n = design.n, d = design.d;
    require(k <= n, "optimality_b_decomposition: k exceeds n");
    ContinuousSpectrum star = predictive_process_spectrum(spec, design, quadrature_m, opts);

    OptimalityBDecomposition out;
    for (std::size_t i = star.eigenvalues.size(); i-- > k;) out.tail_star += star.eigenvalues[i];

    // residual integral: quadrature of K(s,s) - k(s)' V^{-1} k(s) over the
    // same grid; the projected trace reuses the Cholesky factor
    std::size_t g = static_cast<std::size_t>(std::floor(
        std::pow(static_cast<double>(quadrature_m), 1.0 / static_cast<double>(d)) + 1e-9));
    if (g < 2) g = 2;
    std::size_t m = 1;
    for (std::size_t a = 0; a < d; ++a) m *= g;

    Matrix v = assemble_covariance(spec, design, opts);
    auto chol = linalg::cholesky(v, opts.exec);
    if (!chol.ok)
        throw IllConditioned("optimality_b_decomposition: V_n factorization failed",
                             chol.fail_index, chol.fail_value, chol.pivot_ratio());
    std::vector<double> node(d), ks(n);
    double acc = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
        std::size_t code = q;
        for (std::size_t a = 0; a < d; ++a) {
            const std::size_t gi = code % g;
            code /= g;
            node[a] = design.domain.lo[a] +
                      (design.domain.hi[a] - design.domain.lo[a]) *
                          (static_cast<double>(gi) + 0.5) / static_cast<double>(g);
        }
        for (std::size_t j = 0; j < n; ++j)
            ks[j] = evaluate(spec, node.data(), design.point(j), d);
        std::vector<double> sol = ks;
        linalg::cholesky_solve(chol.factor, sol);
        double proj = 0.0;
        for (std::size_t j = 0; j < n; ++j) proj += ks[j] * sol[j];
        acc += evaluate(spec, node.data(), node.data(), d) - proj;
    }
    out.residual_integral = acc * design.domain.volume() / static_cast<double>(m);
    return out;
}

EckartYoungReport eckart_young_check(const Matrix& v, std::size_t k, std::size_t trials,
                                     std::uint64_t seed, Exec exec) {
    const std::size_t n = v.rows();
    require(k <= n, "eckart_young_check: k exceeds n");
    EckartYoungReport report;
    report.trials = trials;
    EigenSystem es = dense_eigen(v, exec);

    for (std::size_t i = n; i-- > k;)
        report.tail_sq_sum += es.eigenvalues[i] * es.eigenvalues[i];

    // |V - V_k|_F^2 computed from the explicit truncation
    Matrix diff = v;
    for (std::size_t i = 0; i < n; ++i) {
        const double* ui = es.eigenvectors.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double* uj = es.eigenvectors.row(j);
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) acc += es.eigenvalues[t] * ui[t] * uj[t];
            diff(i, j) -= acc;
        }
    }
    const double dn = linalg::frobenius_norm(diff);
    report.truncation_dist_sq = dn * dn;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(Rng::derive_seed(seed, t));
        Matrix x(n, std::max<std::size_t>(k, 1)), y(std::max<std::size_t>(k, 1), n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = rng.normal();
        for (std::size_t i = 0; i < y.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) y(i, j) = rng.normal();
        if (k == 0) break;
        // least-squares scale of the random direction keeps trials honest:
        // best multiple of M along V, min_c |V - c M|_F
        Matrix mrand = linalg::multiply(x, y, exec);
        double mm = 0.0, mv = 0.0;
        const double* mp = mrand.data();
        const double* vp = v.data();
        for (std::size_t i = 0; i < n * n; ++i) {
            mm += mp[i] * mp[i];
            mv += mp[i] * vp[i];
        }
        const double scale = mm > 0.0 ? mv / mm : 0.0;
        double dist = 0.0;
        for (std::size_t i = 0; i < n * n; ++i) {
            const double r = vp[i] - scale * mp[i];
            dist += r * r;
        }
        best = std::min(best, dist);
    }
    report.min_random_dist_sq = trials > 0 && k > 0 ? best : report.truncation_dist_sq;

    const double scale = std::max(1.0, report.tail_sq_sum);
    const bool exact = std::abs(report.truncation_dist_sq - report.tail_sq_sum) <= 1e-8 * scale;
    const bool dominated = report.min_random_dist_sq >= report.tail_sq_sum - 1e-8 * scale;
    report.passes = exact && dominated;
    return report;
}

}  // namespace lrk
