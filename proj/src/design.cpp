#include "lrk/design.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "lrk/error.hpp"
#include "lrk/rng.hpp"

namespace lrk {

void Design::validate() const {
    require(n >= 1 && d >= 1, "Design: need n >= 1 and d >= 1");
    require(coords.size() == n * d, "Design: coordinate storage size mismatch");
    require(domain.dim() == d, "Design: domain dimension mismatch");
    for (std::size_t i = 0; i < n; ++i)
        require(domain.contains(point(i)), "Design: location outside the domain");
    std::set<std::vector<double>> seen;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> p(point(i), point(i) + d);
        require(seen.insert(std::move(p)).second, "Design: duplicate locations");
    }
}

Design grid_design(std::size_t m, const Box& domain) {
    require(m >= 1, "grid_design: m must be >= 1");
    const std::size_t d = domain.dim();
    std::size_t n = 1;
    for (std::size_t i = 0; i < d; ++i) {
        require(n <= std::size_t(1) << 40, "grid_design: grid too large");
        n *= m;
    }
    Design design;
    design.n = n;
    design.d = d;
    design.domain = domain;
    design.coords.resize(n * d);
    const double denom = static_cast<double>(m) + 0.5;
    for (std::size_t idx = 0; idx < n; ++idx) {
        std::size_t c = idx;
        for (std::size_t axis = 0; axis < d; ++axis) {
            const std::size_t i = c % m;
            c /= m;
            const double t = static_cast<double>(i + 1) / denom;
            design.coords[idx * d + axis] = domain.lo[axis] + (domain.hi[axis] - domain.lo[axis]) * t;
        }
    }
    return design;
}

Design random_design(std::size_t n, const Box& domain, std::uint64_t seed) {
    require(n >= 1, "random_design: n must be >= 1");
    const std::size_t d = domain.dim();
    Design design;
    design.n = n;
    design.d = d;
    design.domain = domain;
    design.coords.resize(n * d);
    Rng rng(seed);
    std::set<std::vector<double>> seen;
    for (std::size_t i = 0; i < n; ++i) {
        // redraw the rare exact duplicate so locations stay distinct
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            std::vector<double> p(d);
            for (std::size_t axis = 0; axis < d; ++axis)
                p[axis] = rng.uniform(domain.lo[axis], domain.hi[axis]);
            if (seen.insert(p).second) {
                for (std::size_t axis = 0; axis < d; ++axis)
                    design.coords[i * d + axis] = p[axis];
                placed = true;
            }
        }
        require(placed, "random_design: could not draw distinct locations");
    }
    return design;
}

void write_design_csv(std::ostream& os, const Design& design) {
    for (std::size_t axis = 0; axis < design.d; ++axis)
        os << (axis ? "," : "") << "x" << (axis + 1);
    os << "\n";
    std::ostringstream fmt;
    fmt.precision(17);
    for (std::size_t i = 0; i < design.n; ++i) {
        fmt.str("");
        for (std::size_t axis = 0; axis < design.d; ++axis) {
            if (axis) fmt << ",";
            fmt << design.coords[i * design.d + axis];
        }
        os << fmt.str() << "\n";
    }
}

Design read_design_csv(std::istream& is, const Box& domain) {
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), "read_design_csv: empty input");
    Design design;
    design.d = domain.dim();
    design.domain = domain;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::size_t axis = 0;
        while (std::getline(ls, cell, ',')) {
            require(axis < design.d, "read_design_csv: too many columns");
            design.coords.push_back(std::stod(cell));
            ++axis;
        }
        require(axis == design.d, "read_design_csv: too few columns");
        ++design.n;
    }
    design.validate();
    return design;
}

}  // namespace lrk
