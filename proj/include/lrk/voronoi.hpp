#pragma once

#include <cstddef>
#include <vector>

#include "lrk/design.hpp"
#include "lrk/exec.hpp"

namespace lrk {

// Raster diagnostics of the Voronoi partition induced by a design: per-cell
// areas |D_i| and diameters Delta(D_i), the largest diameter delta_max, and
// the max/min cell-area ratio (mesh ratio).
struct VoronoiSummary {
    std::vector<double> areas;
    std::vector<double> diameters;
    double delta_max = 0.0;
    double mesh_ratio = 1.0;
    int raster_resolution = 0;
};

// Default per-axis raster resolution: max(1000, 20 ceil(n^{1/d})).
int default_raster_resolution(std::size_t n, std::size_t d);

// Rasterizes the domain into raster_resolution^d equal cells, assigns each
// cell center to its nearest design point (ties to the lowest index), and
// accumulates cell areas and point-cloud diameters per design point.
// Throws if any design point receives no raster point.
VoronoiSummary voronoi_summary(const Design& design, int raster_resolution,
                               Exec exec = Exec::openmp);

struct RegularityReport {
    bool passes = false;
    double delta_max = 0.0;
    double mesh_ratio = 0.0;
};

// passes iff mesh_ratio < gamma_bound.
RegularityReport check_regularity(const VoronoiSummary& summary, double gamma_bound);

}  // namespace lrk
