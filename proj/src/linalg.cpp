#include "lrk/linalg.hpp"

#include <cmath>
#include <cstdint>

#include "lrk/error.hpp"

namespace lrk::linalg {

Matrix multiply(const Matrix& a, const Matrix& b, Exec exec) {
    require(a.cols() == b.rows(), "multiply: inner dimension mismatch");
    const std::int64_t m = static_cast<std::int64_t>(a.rows());
    const std::size_t n = b.cols(), k = a.cols();
    Matrix c(a.rows(), n, 0.0);
#pragma omp parallel for schedule(static) if (exec == Exec::openmp)
    for (std::int64_t i = 0; i < m; ++i) {
        double* ci = c.row(i);
        const double* ai = a.row(static_cast<std::size_t>(i));
        for (std::size_t l = 0; l < k; ++l) {
            const double ail = ai[l];
            const double* bl = b.row(l);
            for (std::size_t j = 0; j < n; ++j) ci[j] += ail * bl[j];
        }
    }
    return c;
}

Matrix crossprod(const Matrix& a, const Matrix& b, Exec exec) {
    require(a.rows() == b.rows(), "crossprod: row mismatch");
    const std::int64_t m = static_cast<std::int64_t>(a.cols());
    const std::size_t n = b.cols(), k = a.rows();
    Matrix c(a.cols(), n, 0.0);
#pragma omp parallel for schedule(static) if (exec == Exec::openmp)
    for (std::int64_t i = 0; i < m; ++i) {
        double* ci = c.row(i);
        for (std::size_t l = 0; l < k; ++l) {
            const double ali = a(l, static_cast<std::size_t>(i));
            const double* bl = b.row(l);
            for (std::size_t j = 0; j < n; ++j) ci[j] += ali * bl[j];
        }
    }
    return c;
}

std::vector<double> multiply_vec(const Matrix& a, const std::vector<double>& x, Exec exec) {
    require(a.cols() == x.size(), "multiply_vec: dimension mismatch");
    const std::int64_t m = static_cast<std::int64_t>(a.rows());
    std::vector<double> y(a.rows(), 0.0);
#pragma omp parallel for schedule(static) if (exec == Exec::openmp)
    for (std::int64_t i = 0; i < m; ++i) {
        const double* ai = a.row(static_cast<std::size_t>(i));
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += ai[j] * x[j];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    const double* p = a.data();
    const std::size_t n = a.rows() * a.cols();
    for (std::size_t i = 0; i < n; ++i) s += p[i] * p[i];
    return std::sqrt(s);
}

double max_abs_asymmetry(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - a(j, i)));
    return m;
}

void orthonormalize_columns(Matrix& a) {
    const std::size_t n = a.rows(), m = a.cols();
    require(n >= m, "orthonormalize_columns: need rows >= cols");
    // Householder QR stored as (v, beta) pairs, then explicit Q1 build.
    Matrix vs(n, m, 0.0);
    std::vector<double> betas(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double sigma = 0.0;
        for (std::size_t i = j; i < n; ++i) sigma += a(i, j) * a(i, j);
        double alpha = std::sqrt(sigma);
        const double ajj = a(j, j);
        if (ajj > 0.0) alpha = -alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = j; i < n; ++i) {
            double vi = a(i, j);
            if (i == j) vi -= alpha;
            vs(i, j) = vi;
            vnorm2 += vi * vi;
        }
        betas[j] = vnorm2 > 0.0 ? 2.0 / vnorm2 : 0.0;
        // apply reflector to remaining columns
        for (std::size_t c = j; c < m; ++c) {
            double s = 0.0;
            for (std::size_t i = j; i < n; ++i) s += vs(i, j) * a(i, c);
            s *= betas[j];
            for (std::size_t i = j; i < n; ++i) a(i, c) -= s * vs(i, j);
        }
    }
    // Build Q1 = H_0 ... H_{m-1} * [I_m; 0]
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) a(i, j) = (i == j) ? 1.0 : 0.0;
    for (std::size_t j = m; j-- > 0;) {
        for (std::size_t c = 0; c < m; ++c) {
            double s = 0.0;
            for (std::size_t i = j; i < n; ++i) s += vs(i, j) * a(i, c);
            s *= betas[j];
            for (std::size_t i = j; i < n; ++i) a(i, c) -= s * vs(i, j);
        }
    }
}

CholeskyResult cholesky(const Matrix& v, Exec exec) {
    require(v.rows() == v.cols(), "cholesky: matrix must be square");
    const std::size_t n = v.rows();
    CholeskyResult res;
    res.factor = Matrix(n, n, 0.0);
    Matrix& l = res.factor;
    res.min_pivot = res.max_pivot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double* lj = l.row(j);
        double pivot = v(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= lj[k] * lj[k];
        if (j == 0) {
            res.min_pivot = res.max_pivot = pivot;
        } else {
            res.min_pivot = std::min(res.min_pivot, pivot);
            res.max_pivot = std::max(res.max_pivot, pivot);
        }
        if (!(pivot > 0.0)) {
            res.ok = false;
            res.fail_index = j;
            res.fail_value = pivot;
            return res;
        }
        const double ljj = std::sqrt(pivot);
        l(j, j) = ljj;
        const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (exec == Exec::openmp && n - j > 256)
        for (std::int64_t i = static_cast<std::int64_t>(j) + 1; i < nn; ++i) {
            const double* li = l.row(static_cast<std::size_t>(i));
            double s = v(static_cast<std::size_t>(i), j);
            for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
            l(static_cast<std::size_t>(i), j) = s / ljj;
        }
    }
    res.ok = true;
    return res;
}

void cholesky_solve(const Matrix& l, std::vector<double>& b) {
    const std::size_t n = l.rows();
    require(b.size() == n, "cholesky_solve: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        const double* li = l.row(i);
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= li[k] * b[k];
        b[i] = s / li[i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
        b[i] = s / l(i, i);
    }
}

void cholesky_solve_matrix(const Matrix& l, Matrix& b) {
    const std::size_t n = l.rows(), m = b.cols();
    require(b.rows() == n, "cholesky_solve_matrix: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        const double* li = l.row(i);
        for (std::size_t c = 0; c < m; ++c) {
            double s = b(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= li[k] * b(k, c);
            b(i, c) = s / li[i];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t c = 0; c < m; ++c) {
            double s = b(i, c);
            for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * b(k, c);
            b(i, c) = s / l(i, i);
        }
    }
}

void solve_lower_matrix(const Matrix& l, Matrix& b) {
    const std::size_t n = l.rows(), m = b.cols();
    require(b.rows() == n, "solve_lower_matrix: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        const double* li = l.row(i);
        for (std::size_t c = 0; c < m; ++c) {
            double s = b(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= li[k] * b(k, c);
            b(i, c) = s / li[i];
        }
    }
}

}  // namespace lrk::linalg
