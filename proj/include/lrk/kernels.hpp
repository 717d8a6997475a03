#pragma once

#include <cstddef>
#include <string>

#include "lrk/geometry.hpp"

namespace lrk {

enum class KernelFamily {
    exponential,          // sigma^2 exp(-h/phi)
    matern25,             // sigma^2 (1 + sqrt(5)h/phi + 5h^2/(3phi^2)) exp(-sqrt(5)h/phi)
    squared_exponential,  // sigma^2 exp(-h^2/phi)
    matern,               // general smoothness nu
    polynomial            // (offset + x'y)^degree
};

// Covariance function descriptor. Stationary families use `range` as the
// scale; the polynomial family ignores it. `variance` is the marginal
// variance (diagonal value) of the stationary families.
struct KernelSpec {
    KernelFamily family = KernelFamily::exponential;
    double range = 1.0;
    double variance = 1.0;
    double nu = 0.5;      // matern only
    int degree = 2;       // polynomial only
    double offset = 1.0;  // polynomial only

    bool stationary() const { return family != KernelFamily::polynomial; }

    static KernelSpec exponential(double range, double variance = 1.0);
    static KernelSpec matern_25(double range, double variance = 1.0);
    static KernelSpec squared_exponential(double range, double variance = 1.0);
    static KernelSpec matern_nu(double nu, double range, double variance = 1.0);
    static KernelSpec polynomial(int degree, double offset);

    void validate() const;
};

// K(x, y) for d-dimensional points.
double evaluate(const KernelSpec& spec, const double* x, const double* y, std::size_t d);

// Convenience for isotropic evaluation at lag h >= 0 (stationary families only).
double evaluate_at_lag(const KernelSpec& spec, double h);

// Estimates c(delta) = inf { (K(x1,x2)/K(x2,x2))^2 : |x1-x2| <= delta } over
// a deterministic resolution^d grid of base points x2 with displacements
// delta*e along the axis and diagonal directions, clipped to the domain.
// Both orientations of each pair enter the infimum, which keeps the
// estimate within [0, 1]. Exactly 1 at delta = 0.
double c_delta(const KernelSpec& spec, const Box& domain, double delta, int resolution);

// Flat text form, e.g. "family=exponential range=0.25 variance=1".
std::string format_kernel(const KernelSpec& spec);
KernelSpec parse_kernel(const std::string& text);

// Short tag used in artifact filenames (e.g. "exponential", "matern-1.5").
std::string kernel_tag(const KernelSpec& spec);

}  // namespace lrk
