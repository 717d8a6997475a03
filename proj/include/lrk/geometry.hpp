#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "lrk/error.hpp"

namespace lrk {

// Axis-aligned box [lo_1,hi_1] x ... x [lo_d,hi_d].
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    Box() = default;
    Box(std::vector<double> lo_, std::vector<double> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
        require(lo.size() == hi.size() && !lo.empty(), "Box: lo/hi dimension mismatch");
        for (std::size_t i = 0; i < lo.size(); ++i)
            require(lo[i] < hi[i], "Box: requires lo < hi in every axis");
    }

    static Box unit_square() { return Box({0.0, 0.0}, {1.0, 1.0}); }
    static Box unit_cube(std::size_t d) {
        return Box(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
    }

    std::size_t dim() const { return lo.size(); }

    double volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
        return v;
    }

    double diameter() const {
        double s = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
        return std::sqrt(s);
    }

    bool contains(const double* x) const {
        for (std::size_t i = 0; i < dim(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }

    void clamp(double* x) const {
        for (std::size_t i = 0; i < dim(); ++i) {
            if (x[i] < lo[i]) x[i] = lo[i];
            if (x[i] > hi[i]) x[i] = hi[i];
        }
    }
};

inline double squared_distance(const double* x, const double* y, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double t = x[i] - y[i];
        s += t * t;
    }
    return s;
}

inline double distance(const double* x, const double* y, std::size_t d) {
    return std::sqrt(squared_distance(x, y, d));
}

inline double dot(const double* x, const double* y, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += x[i] * y[i];
    return s;
}

}  // namespace lrk
