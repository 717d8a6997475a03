#include "lrk/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "lrk/error.hpp"

namespace lrk {

KernelSpec KernelSpec::exponential(double range, double variance) {
    KernelSpec s;
    s.family = KernelFamily::exponential;
    s.range = range;
    s.variance = variance;
    s.validate();
    return s;
}

KernelSpec KernelSpec::matern_25(double range, double variance) {
    KernelSpec s;
    s.family = KernelFamily::matern25;
    s.range = range;
    s.variance = variance;
    s.validate();
    return s;
}

KernelSpec KernelSpec::squared_exponential(double range, double variance) {
    KernelSpec s;
    s.family = KernelFamily::squared_exponential;
    s.range = range;
    s.variance = variance;
    s.validate();
    return s;
}

KernelSpec KernelSpec::matern_nu(double nu, double range, double variance) {
    KernelSpec s;
    s.family = KernelFamily::matern;
    s.nu = nu;
    s.range = range;
    s.variance = variance;
    s.validate();
    return s;
}

KernelSpec KernelSpec::polynomial(int degree, double offset) {
    KernelSpec s;
    s.family = KernelFamily::polynomial;
    s.degree = degree;
    s.offset = offset;
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    if (family == KernelFamily::polynomial) {
        require(degree >= 1, "KernelSpec: polynomial degree must be positive");
        require(offset >= 0.0 && std::isfinite(offset),
                "KernelSpec: polynomial offset must be >= 0");
        return;
    }
    require(range > 0.0 && std::isfinite(range), "KernelSpec: range must be > 0");
    require(variance > 0.0 && std::isfinite(variance), "KernelSpec: variance must be > 0");
    if (family == KernelFamily::matern)
        require(nu > 0.0 && nu <= 100.0, "KernelSpec: matern smoothness must be in (0, 100]");
}

namespace {

// 2^{1-nu}/Gamma(nu) x^nu K_nu(x), the normalized Matern profile in the
// scaled argument x = sqrt(2 nu) h / phi. Small arguments switch to the
// leading series terms; the direct product would overflow inside the
// Bessel routine when nu log(2/x) is large.
double matern_profile(double nu, double x) {
    if (x <= 0.0) return 1.0;
    const bool bessel_safe = nu * std::log10(2.0 / x) < 280.0;
    if (x < 1e-6 || !bessel_safe) {
        if (nu > 1.0) return 1.0 - x * x / (4.0 * (nu - 1.0));
        if (nu < 1.0) {
            const double g = std::tgamma(1.0 - nu) / std::tgamma(1.0 + nu);
            return 1.0 - g * std::pow(0.5 * x, 2.0 * nu);
        }
        // nu == 1: K_1 is representable down to denormal arguments
        return std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * x * std::cyl_bessel_k(nu, x);
    }
    return std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(x, nu) *
           std::cyl_bessel_k(nu, x);
}

}  // namespace

double evaluate_at_lag(const KernelSpec& spec, double h) {
    require(h >= 0.0 && std::isfinite(h), "evaluate_at_lag: lag must be finite and >= 0");
    switch (spec.family) {
        case KernelFamily::exponential:
            return spec.variance * std::exp(-h / spec.range);
        case KernelFamily::matern25: {
            const double t = std::sqrt(5.0) * h / spec.range;
            return spec.variance * (1.0 + t + 5.0 * h * h / (3.0 * spec.range * spec.range)) *
                   std::exp(-t);
        }
        case KernelFamily::squared_exponential:
            return spec.variance * std::exp(-h * h / spec.range);
        case KernelFamily::matern: {
            const double x = std::sqrt(2.0 * spec.nu) * h / spec.range;
            return spec.variance * matern_profile(spec.nu, x);
        }
        case KernelFamily::polynomial:
            throw InvalidArgument("evaluate_at_lag: polynomial kernel is not stationary");
    }
    throw InvalidArgument("evaluate_at_lag: unknown family");
}

double evaluate(const KernelSpec& spec, const double* x, const double* y, std::size_t d) {
    require(d >= 1, "evaluate: dimension must be >= 1");
    for (std::size_t i = 0; i < d; ++i)
        require(std::isfinite(x[i]) && std::isfinite(y[i]),
                "evaluate: coordinates must be finite");
    if (spec.family == KernelFamily::polynomial) {
        double base = spec.offset + dot(x, y, d);
        double r = 1.0;
        for (int p = 0; p < spec.degree; ++p) r *= base;
        return r;
    }
    return evaluate_at_lag(spec, distance(x, y, d));
}

double c_delta(const KernelSpec& spec, const Box& domain, double delta, int resolution) {
    require(resolution >= 2, "c_delta: resolution must be >= 2");
    require(delta >= 0.0, "c_delta: delta must be >= 0");
    require(delta <= domain.diameter() + 1e-12, "c_delta: delta exceeds domain diameter");
    const std::size_t d = domain.dim();
    if (delta == 0.0) return 1.0;

    // direction set: all of {-1, 0, 1}^d minus the origin, normalized
    std::vector<std::vector<double>> dirs;
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        std::vector<double> dir(d);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            dir[i] = static_cast<double>(static_cast<int>(c % 3) - 1);
            norm2 += dir[i] * dir[i];
            c /= 3;
        }
        if (norm2 == 0.0) continue;
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < d; ++i) dir[i] *= inv;
        dirs.push_back(std::move(dir));
    }

    double inf = 1.0;
    std::vector<double> x2(d), x1(d);
    std::vector<std::size_t> grid_idx(d, 0);
    std::size_t grid_total = 1;
    for (std::size_t i = 0; i < d; ++i) grid_total *= static_cast<std::size_t>(resolution);
    for (std::size_t g = 0; g < grid_total; ++g) {
        std::size_t c = g;
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t gi = c % static_cast<std::size_t>(resolution);
            c /= static_cast<std::size_t>(resolution);
            x2[i] = domain.lo[i] + (domain.hi[i] - domain.lo[i]) * static_cast<double>(gi) /
                                       static_cast<double>(resolution - 1);
        }
        const double k22 = evaluate(spec, x2.data(), x2.data(), d);
        for (const auto& dir : dirs) {
            for (std::size_t i = 0; i < d; ++i) x1[i] = x2[i] + delta * dir[i];
            domain.clamp(x1.data());
            const double k12 = evaluate(spec, x1.data(), x2.data(), d);
            const double k11 = evaluate(spec, x1.data(), x1.data(), d);
            if (k22 > 0.0) inf = std::min(inf, (k12 / k22) * (k12 / k22));
            if (k11 > 0.0) inf = std::min(inf, (k12 / k11) * (k12 / k11));
        }
    }
    if (inf < 0.0) inf = 0.0;
    return inf;
}

namespace {

const char* family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::exponential: return "exponential";
        case KernelFamily::matern25: return "matern25";
        case KernelFamily::squared_exponential: return "squaredexponential";
        case KernelFamily::matern: return "matern";
        case KernelFamily::polynomial: return "polynomial";
    }
    return "?";
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string format_kernel(const KernelSpec& spec) {
    std::ostringstream os;
    os << "family=" << family_name(spec.family);
    if (spec.family == KernelFamily::polynomial) {
        os << " degree=" << spec.degree << " offset=" << format_double(spec.offset);
        return os.str();
    }
    if (spec.family == KernelFamily::matern) os << " nu=" << format_double(spec.nu);
    os << " range=" << format_double(spec.range)
       << " variance=" << format_double(spec.variance);
    return os.str();
}

KernelSpec parse_kernel(const std::string& text) {
    KernelSpec spec;
    bool family_seen = false;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        require(eq != std::string::npos, "parse_kernel: expected key=value, got '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        try {
            if (key == "family") {
                family_seen = true;
                if (val == "exponential") spec.family = KernelFamily::exponential;
                else if (val == "matern25") spec.family = KernelFamily::matern25;
                else if (val == "squaredexponential") spec.family = KernelFamily::squared_exponential;
                else if (val == "matern") spec.family = KernelFamily::matern;
                else if (val == "polynomial") spec.family = KernelFamily::polynomial;
                else throw InvalidArgument("parse_kernel: unknown family '" + val + "'");
            } else if (key == "range") spec.range = std::stod(val);
            else if (key == "variance") spec.variance = std::stod(val);
            else if (key == "nu") spec.nu = std::stod(val);
            else if (key == "degree") spec.degree = std::stoi(val);
            else if (key == "offset") spec.offset = std::stod(val);
            else throw InvalidArgument("parse_kernel: unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw InvalidArgument("parse_kernel: bad value for '" + key + "'");
        } catch (const std::out_of_range&) {
            throw InvalidArgument("parse_kernel: value out of range for '" + key + "'");
        }
    }
    require(family_seen, "parse_kernel: missing family");
    spec.validate();
    return spec;
}

std::string kernel_tag(const KernelSpec& spec) {
    std::ostringstream os;
    os << family_name(spec.family);
    if (spec.family == KernelFamily::matern) os << "-" << spec.nu;
    return os.str();
}

}  // namespace lrk
