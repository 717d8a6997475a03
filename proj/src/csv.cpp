#include "lrk/csv.hpp"

#include <cstdio>
#include <ostream>

namespace lrk::csv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_spectrum(std::ostream& os, const std::vector<double>& eigenvalues) {
    const TailSums ts = tail_sums(eigenvalues);
    os << "k,lambda,cumsum,tailsum\n";
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        os << (i + 1) << ',' << format_double(eigenvalues[i]) << ','
           << format_double(ts.cumulative[i]) << ','
           << format_double(i + 1 < eigenvalues.size() ? ts.tail[i + 1] : 0.0) << '\n';
    }
}

void write_predictions(std::ostream& os, const std::vector<PredictionRow>& rows) {
    os << "sx,sy,mode,k,tau,variance,weight_norm\n";
    for (const auto& r : rows) {
        os << format_double(r.sx) << ',' << format_double(r.sy) << ',' << r.mode << ','
           << r.k << ',' << format_double(r.tau) << ',' << format_double(r.variance) << ','
           << format_double(r.weight_norm) << '\n';
    }
}

void write_voronoi_cells(std::ostream& os, const VoronoiSummary& summary) {
    os << "i,area,diameter\n";
    for (std::size_t i = 0; i < summary.areas.size(); ++i)
        os << (i + 1) << ',' << format_double(summary.areas[i]) << ','
           << format_double(summary.diameters[i]) << '\n';
}

void write_voronoi_summary(std::ostream& os, const VoronoiSummary& summary,
                           double c_delta_max) {
    os << "delta_max,mesh_ratio,c_delta_max\n";
    os << format_double(summary.delta_max) << ',' << format_double(summary.mesh_ratio)
       << ',' << format_double(c_delta_max) << '\n';
}

void write_checks(std::ostream& os, const std::vector<CheckRow>& rows) {
    os << "check,instance,k,lhs,rhs,pass\n";
    for (const auto& r : rows) {
        os << r.check << ',' << r.instance << ',' << r.k << ',' << format_double(r.lhs)
           << ',' << format_double(r.rhs) << ',' << (r.pass ? 1 : 0) << '\n';
    }
}

}  // namespace lrk::csv
