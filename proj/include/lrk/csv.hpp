#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lrk/kriging.hpp"
#include "lrk/spectral.hpp"
#include "lrk/voronoi.hpp"

namespace lrk::csv {

// Shortest round-trip decimal form; identical doubles print identical bytes.
std::string format_double(double v);

// k,lambda,cumsum,tailsum rows for a descending spectrum.
void write_spectrum(std::ostream& os, const std::vector<double>& eigenvalues);

// sx,sy,mode,k,tau,variance,weight_norm rows for a batch of predictions at
// 2-d points.
struct PredictionRow {
    double sx = 0.0, sy = 0.0;
    std::string mode;
    std::size_t k = 0;
    double tau = 0.0;
    double variance = 0.0;
    double weight_norm = 0.0;
};
void write_predictions(std::ostream& os, const std::vector<PredictionRow>& rows);

// i,area,diameter rows.
void write_voronoi_cells(std::ostream& os, const VoronoiSummary& summary);

// delta_max,mesh_ratio,c_delta_max single-row summary.
void write_voronoi_summary(std::ostream& os, const VoronoiSummary& summary,
                           double c_delta_max);

// check,instance,k,lhs,rhs,pass rows.
struct CheckRow {
    std::string check;
    std::string instance;
    std::size_t k = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};
void write_checks(std::ostream& os, const std::vector<CheckRow>& rows);

}  // namespace lrk::csv
