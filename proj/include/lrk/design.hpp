#pragma once

#include <cstdint>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "lrk/geometry.hpp"

namespace lrk {

// n sampling locations inside an axis-aligned box, stored flat (n x d,
// point-major).
struct Design {
    std::vector<double> coords;
    std::size_t n = 0;
    std::size_t d = 0;
    Box domain;

    const double* point(std::size_t i) const { return coords.data() + i * d; }
    void validate() const;
};

// m^d points with per-axis coordinates i/(m + 0.5), i = 1..m, scaled into
// the domain. On the unit square with m = 70 this is the 4900-point grid
// {(i/70.5, j/70.5)}.
Design grid_design(std::size_t m, const Box& domain);

// n i.i.d. uniform points from the deterministic mt19937_64 stream
// (coordinates drawn point-major); identical output for identical seed.
Design random_design(std::size_t n, const Box& domain, std::uint64_t seed);

// CSV with header x1,...,xd, one location per row in index order.
void write_design_csv(std::ostream& os, const Design& design);
Design read_design_csv(std::istream& is, const Box& domain);

}  // namespace lrk
