#include "lrk/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "lrk/eigen_sym.hpp"
#include "lrk/error.hpp"
#include "lrk/linalg.hpp"
#include "lrk/rng.hpp"

namespace lrk {

namespace {

void check_budget(std::size_t n, std::size_t max_bytes, const char* who) {
    const std::size_t need = n * n * sizeof(double);
    if (n != 0 && (need / n / sizeof(double) != n || need > max_bytes))
        throw BudgetExceeded(std::string(who) + ": dense matrix of dimension " +
                             std::to_string(n) + " exceeds the matrix memory budget");
}

}  // namespace

Matrix assemble_covariance(const KernelSpec& spec, const Design& design,
                           const AssembleOptions& opts) {
    spec.validate();
    const std::size_t n = design.n, d = design.d;
    check_budget(n, opts.max_matrix_bytes, "assemble_covariance");
    Matrix v(n, n);
    const std::int64_t n_i = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8) if (opts.exec == Exec::openmp)
    for (std::int64_t ii = 0; ii < n_i; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* xi = design.point(i);
        for (std::size_t j = i; j < n; ++j)
            v(i, j) = evaluate(spec, xi, design.point(j), d);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) v(j, i) = v(i, j);
    return v;
}

EigenSystem dense_eigen(const Matrix& v, Exec exec) {
    auto res = linalg::eigen_sym(v, true, exec);
    EigenSystem es;
    es.eigenvalues = std::move(res.values);
    es.eigenvectors = std::move(res.vectors);
    es.n = v.rows();
    es.complete = true;
    return es;
}

std::vector<double> dense_eigenvalues(const Matrix& v, Exec exec) {
    return linalg::eigen_sym(v, false, exec).values;
}

EigenSystem truncated_eigen(const BlockOperator& apply, std::size_t n, std::size_t k,
                            std::size_t oversampling, std::size_t power_iterations,
                            std::uint64_t seed, Exec exec) {
    require(k >= 1 && k <= n, "truncated_eigen: need 1 <= k <= n");
    const std::size_t block = std::min(n, k + oversampling);
    Matrix q(n, block);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < block; ++j) q(i, j) = rng.normal();
    linalg::orthonormalize_columns(q);
    Matrix y(n, block);
    for (std::size_t t = 0; t < power_iterations; ++t) {
        apply(q, y);
        std::swap(q, y);
        linalg::orthonormalize_columns(q);
    }
    apply(q, y);                                   // y = V q
    Matrix b = linalg::crossprod(q, y, exec);      // b = q' V q
    for (std::size_t i = 0; i < block; ++i)
        for (std::size_t j = i + 1; j < block; ++j) {
            const double s = 0.5 * (b(i, j) + b(j, i));
            b(i, j) = b(j, i) = s;
        }
    auto small = linalg::eigen_sym(b, true, exec);
    Matrix w(block, k);
    for (std::size_t i = 0; i < block; ++i)
        for (std::size_t j = 0; j < k; ++j) w(i, j) = small.vectors(i, j);
    EigenSystem es;
    es.eigenvalues.assign(small.values.begin(), small.values.begin() + static_cast<std::ptrdiff_t>(k));
    es.eigenvectors = linalg::multiply(q, w, exec);
    es.n = n;
    es.complete = (k == n);
    return es;
}

EigenSystem truncated_eigen(const Matrix& v, std::size_t k, std::size_t oversampling,
                            std::size_t power_iterations, std::uint64_t seed, Exec exec) {
    BlockOperator apply = [&v, exec](const Matrix& in, Matrix& out) {
        out = linalg::multiply(v, in, exec);
    };
    return truncated_eigen(apply, v.rows(), k, oversampling, power_iterations, seed, exec);
}

ContinuousSpectrum continuous_spectrum(const KernelSpec& spec, const Box& domain,
                                       std::size_t quadrature_m, const AssembleOptions& opts) {
    require(quadrature_m >= 100, "continuous_spectrum: quadrature_m must be >= 100");
    const std::size_t d = domain.dim();
    std::size_t g = static_cast<std::size_t>(
        std::floor(std::pow(static_cast<double>(quadrature_m), 1.0 / static_cast<double>(d)) + 1e-9));
    if (g < 2) g = 2;
    std::size_t m = 1;
    for (std::size_t a = 0; a < d; ++a) m *= g;
    check_budget(m, opts.max_matrix_bytes, "continuous_spectrum");

    // midpoint-rule nodes, equal weight |D|/m
    Design nodes;
    nodes.n = m;
    nodes.d = d;
    nodes.domain = domain;
    nodes.coords.resize(m * d);
    for (std::size_t idx = 0; idx < m; ++idx) {
        std::size_t c = idx;
        for (std::size_t a = 0; a < d; ++a) {
            const std::size_t gi = c % g;
            c /= g;
            nodes.coords[idx * d + a] =
                domain.lo[a] + (domain.hi[a] - domain.lo[a]) *
                                   (static_cast<double>(gi) + 0.5) / static_cast<double>(g);
        }
    }
    Matrix km = assemble_covariance(spec, nodes, opts);
    std::vector<double> vals = dense_eigenvalues(km, opts.exec);
    const double w = domain.volume() / static_cast<double>(m);
    for (double& v : vals) v *= w;
    ContinuousSpectrum cs;
    cs.eigenvalues = std::move(vals);
    cs.quadrature_m = m;
    cs.domain_volume = domain.volume();
    return cs;
}

TailSums tail_sums(const std::vector<double>& eigenvalues) {
    const std::size_t n = eigenvalues.size();
    TailSums ts;
    ts.cumulative.resize(n);
    ts.tail.resize(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += eigenvalues[i];
        ts.cumulative[i] = acc;
    }
    // tail[k] = sum of eigenvalues with 1-based index > k, smallest first
    acc = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        acc += eigenvalues[k];
        ts.tail[k] = acc;
    }
    return ts;
}

ConditionNumbers condition_number(const EigenSystem& es, double ridge) {
    require(ridge >= 0.0, "condition_number: ridge must be >= 0");
    require(es.complete || ridge > 0.0,
            "condition_number: need a complete spectrum or a positive ridge");
    require(!es.eigenvalues.empty(), "condition_number: empty spectrum");
    ConditionNumbers c;
    const double top = es.eigenvalues.front();
    const double bottom = es.complete ? es.eigenvalues.back() : 0.0;
    if (ridge == 0.0) {
        require(bottom > 0.0, "condition_number: ridge = 0 with non-positive smallest eigenvalue");
        c.strict = top / bottom;
        c.paper_convention = std::numeric_limits<double>::infinity();
    } else {
        c.strict = (top + ridge) / (bottom + ridge);
        c.paper_convention = top / ridge;
    }
    return c;
}

}  // namespace lrk
