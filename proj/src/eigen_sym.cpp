#include "lrk/eigen_sym.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "lrk/error.hpp"
#include "lrk/linalg.hpp"

namespace lrk::linalg {

namespace {

// Householder reduction of a symmetric matrix held in full storage to
// tridiagonal form (diagonal d, subdiagonal e with e[i] coupling i-1 and i).
// If want_q, a is overwritten with the orthogonal Q such that Q' V Q = T;
// otherwise a is scratch. The active leading block stays fully symmetric
// throughout, so all matrix sweeps run over contiguous rows.
void tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e,
                    bool want_q, Exec exec) {
    const std::size_t n = a.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    if (n == 1) {
        d[0] = a(0, 0);
        a(0, 0) = 1.0;
        return;
    }
    std::vector<double> q(n, 0.0);
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            double* ui = a.row(i);
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(ui[k]);
            if (scale == 0.0) {
                e[i] = ui[l];
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    ui[k] /= scale;
                    h += ui[k] * ui[k];
                }
                double f = ui[l];
                const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                ui[l] = f - g;
                // p = A u / h over the active block, stored in q
                const std::int64_t ll = static_cast<std::int64_t>(l);
#pragma omp parallel for schedule(static) if (exec == Exec::openmp && l > 256)
                for (std::int64_t j = 0; j <= ll; ++j) {
                    const double* aj = a.row(static_cast<std::size_t>(j));
                    double s = 0.0;
                    for (std::size_t k = 0; k <= l; ++k) s += aj[k] * ui[k];
                    q[static_cast<std::size_t>(j)] = s / h;
                }
                if (want_q)
                    for (std::size_t j = 0; j <= l; ++j) a(j, i) = ui[j] / h;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) f += q[j] * ui[j];
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) q[j] -= hh * ui[j];
                // rank-2 update of the full active block
#pragma omp parallel for schedule(static) if (exec == Exec::openmp && l > 256)
                for (std::int64_t j = 0; j <= ll; ++j) {
                    double* aj = a.row(static_cast<std::size_t>(j));
                    const double uj = ui[static_cast<std::size_t>(j)];
                    const double qj = q[static_cast<std::size_t>(j)];
                    for (std::size_t k = 0; k <= l; ++k) aj[k] -= uj * q[k] + qj * ui[k];
                }
            }
        } else {
            e[i] = a(i, 0);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    if (!want_q) {
        // the reduced diagonal lives at a(i,i): step i freezes it and later
        // steps only touch strictly smaller leading blocks
        for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
        return;
    }
    // accumulate Q in place (forward pass over stored reflectors)
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t l = i == 0 ? 0 : i - 1;
        if (i > 0 && d[i] != 0.0) {
            const double* ui = a.row(i);
            std::fill(g.begin(), g.begin() + l + 1, 0.0);
            const std::size_t cols = l + 1;
#pragma omp parallel if (exec == Exec::openmp && l > 256)
            {
                const int nt = omp_get_num_threads();
                const int tid = omp_get_thread_num();
                const std::size_t chunk = (cols + nt - 1) / nt;
                const std::size_t jlo = std::min(cols, chunk * static_cast<std::size_t>(tid));
                const std::size_t jhi = std::min(cols, jlo + chunk);
                if (jlo < jhi) {
                    for (std::size_t k = 0; k <= l; ++k) {
                        const double uk = ui[k];
                        const double* qk = a.row(k);
                        for (std::size_t j = jlo; j < jhi; ++j) g[j] += uk * qk[j];
                    }
                }
            }
            const std::int64_t ll = static_cast<std::int64_t>(l);
#pragma omp parallel for schedule(static) if (exec == Exec::openmp && l > 256)
            for (std::int64_t k = 0; k <= ll; ++k) {
                const double w = a(static_cast<std::size_t>(k), i);
                double* qk = a.row(static_cast<std::size_t>(k));
                for (std::size_t j = 0; j <= l; ++j) qk[j] -= g[j] * w;
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        if (i > 0)
            for (std::size_t j = 0; j <= l; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

struct Rotation {
    std::size_t i;
    double c, s;
};

// Implicit-shift QL on the tridiagonal (d, off) where off[i] couples i and
// i+1. Rotations of each QL step are buffered and applied to z row-wise in
// their generation order, which keeps the result independent of threading.
void tql_implicit(std::vector<double>& d, std::vector<double>& off, Matrix* z, Exec exec) {
    const std::size_t n = d.size();
    if (n <= 1) return;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<Rotation> rots;
    rots.reserve(n);
    // Deflate couplings below eps * |T| (Gershgorin row-sum norm). Zeroing
    // them perturbs eigenvalues by at most that amount and keeps the trace
    // exact; a locally relative test never terminates on blocks that sit at
    // roundoff level while the matrix norm is large.
    double anorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(d[i]);
        if (i + 1 < n) row += std::abs(off[i]);
        if (i >= 1) row += std::abs(off[i - 1]);
        anorm = std::max(anorm, row);
    }
    const double deflate_tol = eps * anorm;
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        while (true) {
            std::size_t m = l;
            while (m + 1 < n) {
                if (std::abs(off[m]) <= deflate_tol) break;
                ++m;
            }
            if (m == l) break;
            if (++iter > 50)
                throw NoConvergence("tql_implicit: QL iteration did not converge");
            double g = (d[l + 1] - d[l]) / (2.0 * off[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + off[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            rots.clear();
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * off[i];
                const double b = c * off[i];
                r = std::hypot(f, g);
                off[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (z) rots.push_back({i, c, s});
            }
            if (z && !rots.empty()) {
                const std::int64_t nn = static_cast<std::int64_t>(z->rows());
#pragma omp parallel for schedule(static) if (exec == Exec::openmp && z->rows() > 256)
                for (std::int64_t row = 0; row < nn; ++row) {
                    double* zr = z->row(static_cast<std::size_t>(row));
                    for (const Rotation& rot : rots) {
                        const double f = zr[rot.i + 1];
                        zr[rot.i + 1] = rot.s * zr[rot.i] + rot.c * f;
                        zr[rot.i] = rot.c * zr[rot.i] - rot.s * f;
                    }
                }
            }
            if (underflow) continue;
            d[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
}

SymEigenResult sort_descending(std::vector<double> d, Matrix* z) {
    const std::size_t n = d.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
    SymEigenResult res;
    res.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) res.values[j] = d[idx[j]];
    if (z) {
        res.vectors = Matrix(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const double* zi = z->row(i);
            double* vi = res.vectors.row(i);
            for (std::size_t j = 0; j < n; ++j) vi[j] = zi[idx[j]];
        }
    }
    return res;
}

}  // namespace

SymEigenResult jacobi_eigen(const Matrix& a, bool want_vectors) {
    const std::size_t n = a.rows();
    require(n == a.cols() && n >= 1, "jacobi_eigen: matrix must be square");
    require(n <= 64, "jacobi_eigen: intended for n <= 64");
    Matrix m = a;
    Matrix v = Matrix::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double offdiag = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) offdiag += m(p, q) * m(p, q);
        if (offdiag == 0.0) break;
        double scale = 0.0;
        for (std::size_t p = 0; p < n; ++p) scale += std::abs(m(p, p));
        if (std::sqrt(offdiag) <= 1e-15 * std::max(scale, 1e-300)) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = m(i, i);
    return sort_descending(std::move(d), want_vectors ? &v : nullptr);
}

SymEigenResult eigen_sym(const Matrix& a, bool want_vectors, Exec exec) {
    const std::size_t n = a.rows();
    require(n == a.cols() && n >= 1, "eigen_sym: matrix must be square");
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
    const double asym = max_abs_asymmetry(a);
    require(asym <= 1e-12 * std::max(1.0, scale),
            "eigen_sym: input is not symmetric to 1e-12 per entry");
    if (n <= 64) return jacobi_eigen(a, want_vectors);
    Matrix work = a;
    std::vector<double> d, e;
    tridiagonalize(work, d, e, want_vectors, exec);
    // off[i] couples i and i+1
    std::vector<double> off(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) off[i - 1] = e[i];
    tql_implicit(d, off, want_vectors ? &work : nullptr, exec);
    return sort_descending(std::move(d), want_vectors ? &work : nullptr);
}

}  // namespace lrk::linalg
