#include "lrk/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "lrk/error.hpp"

namespace lrk {

int default_raster_resolution(std::size_t n, std::size_t d) {
    const double root = std::ceil(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d)));
    return std::max(1000, 20 * static_cast<int>(root));
}

namespace {

constexpr std::size_t kMaxDim = 8;

// Sites bucketed on a coarse grid for nearest-site queries. The query
// expands bucket rings until the best (distance, index) pair is certified;
// candidates are ranked lexicographically so the answer does not depend on
// enumeration order and ties go to the lowest site index.
struct SiteBuckets {
    const Design* design;
    std::size_t bg;                       // buckets per axis
    std::vector<std::size_t> offsets;     // bucket -> range in members
    std::vector<std::uint32_t> members;   // site indices grouped by bucket
    double inv_side[kMaxDim];
    double min_side;

    explicit SiteBuckets(const Design& dsn) : design(&dsn) {
        const std::size_t n = dsn.n, d = dsn.d;
        bg = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d)))));
        min_side = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < d; ++a) {
            const double side = (dsn.domain.hi[a] - dsn.domain.lo[a]) / static_cast<double>(bg);
            inv_side[a] = 1.0 / side;
            min_side = std::min(min_side, side);
        }
        std::size_t nb = 1;
        for (std::size_t a = 0; a < d; ++a) nb *= bg;
        std::vector<std::size_t> counts(nb, 0);
        std::vector<std::size_t> keys(n);
        for (std::size_t i = 0; i < n; ++i) {
            keys[i] = bucket_of(dsn.point(i));
            ++counts[keys[i]];
        }
        offsets.assign(nb + 1, 0);
        for (std::size_t b = 0; b < nb; ++b) offsets[b + 1] = offsets[b] + counts[b];
        members.resize(n);
        std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
        for (std::size_t i = 0; i < n; ++i) members[cursor[keys[i]]++] = static_cast<std::uint32_t>(i);
    }

    std::size_t axis_bucket(double x, std::size_t a) const {
        double t = (x - design->domain.lo[a]) * inv_side[a];
        std::int64_t b = static_cast<std::int64_t>(t);
        if (b < 0) b = 0;
        if (b >= static_cast<std::int64_t>(bg)) b = static_cast<std::int64_t>(bg) - 1;
        return static_cast<std::size_t>(b);
    }

    std::size_t bucket_of(const double* x) const {
        std::size_t key = 0;
        for (std::size_t a = design->d; a-- > 0;) key = key * bg + axis_bucket(x[a], a);
        return key;
    }

    std::uint32_t nearest(const double* x) const {
        const std::size_t d = design->d;
        std::size_t home[kMaxDim];
        for (std::size_t a = 0; a < d; ++a) home[a] = axis_bucket(x[a], a);
        std::uint32_t best_i = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t ring = 0; ring < bg; ++ring) {
            // all buckets at Chebyshev index distance exactly `ring`
            std::int64_t lo[kMaxDim], hi[kMaxDim], it[kMaxDim];
            for (std::size_t a = 0; a < d; ++a) {
                lo[a] = static_cast<std::int64_t>(home[a]) - static_cast<std::int64_t>(ring);
                hi[a] = static_cast<std::int64_t>(home[a]) + static_cast<std::int64_t>(ring);
                it[a] = lo[a];
            }
            while (true) {
                std::size_t cheb = 0;
                bool inside = true;
                for (std::size_t a = 0; a < d; ++a) {
                    const std::int64_t delta = it[a] - static_cast<std::int64_t>(home[a]);
                    cheb = std::max(cheb, static_cast<std::size_t>(std::llabs(delta)));
                    if (it[a] < 0 || it[a] >= static_cast<std::int64_t>(bg)) inside = false;
                }
                if (inside && cheb == ring) {
                    std::size_t key = 0;
                    for (std::size_t a = d; a-- > 0;) key = key * bg + static_cast<std::size_t>(it[a]);
                    for (std::size_t p = offsets[key]; p < offsets[key + 1]; ++p) {
                        const std::uint32_t i = members[p];
                        const double d2 = squared_distance(x, design->point(i), d);
                        if (!found || d2 < best_d2 || (d2 == best_d2 && i < best_i)) {
                            best_d2 = d2;
                            best_i = i;
                            found = true;
                        }
                    }
                }
                std::size_t a = 0;
                for (; a < d; ++a) {
                    if (++it[a] <= hi[a]) break;
                    it[a] = lo[a];
                }
                if (a == d) break;
            }
            // sites in rings > ring are at least ring * min_side away
            if (found) {
                const double certified = static_cast<double>(ring) * min_side;
                if (best_d2 <= certified * certified) break;
            }
        }
        return best_i;
    }
};

}  // namespace

VoronoiSummary voronoi_summary(const Design& design, int raster_resolution, Exec exec) {
    const std::size_t n = design.n, d = design.d;
    require(d <= kMaxDim, "voronoi_summary: dimension too large");
    const double min_res =
        2.0 * std::ceil(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d)));
    require(raster_resolution >= 2 && raster_resolution >= static_cast<int>(min_res),
            "voronoi_summary: raster_resolution below 2*ceil(n^(1/d))");
    const std::size_t res = static_cast<std::size_t>(raster_resolution);
    std::size_t total = 1;
    for (std::size_t axis = 0; axis < d; ++axis) {
        require(total < (std::size_t(1) << 42) / res, "voronoi_summary: raster too large");
        total *= res;
    }
    require(n < (std::size_t(1) << 32), "voronoi_summary: too many design points");

    const SiteBuckets buckets(design);
    std::vector<std::uint32_t> owner(total);
    const std::int64_t total_i = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(static) if (exec == Exec::openmp)
    for (std::int64_t raw = 0; raw < total_i; ++raw) {
        double x[kMaxDim];
        std::size_t c = static_cast<std::size_t>(raw);
        for (std::size_t axis = 0; axis < d; ++axis) {
            const std::size_t gi = c % res;
            c /= res;
            x[axis] = design.domain.lo[axis] +
                      (design.domain.hi[axis] - design.domain.lo[axis]) *
                          (static_cast<double>(gi) + 0.5) / static_cast<double>(res);
        }
        owner[static_cast<std::size_t>(raw)] = buckets.nearest(x);
    }

    std::vector<std::size_t> counts(n, 0);
    for (std::size_t raw = 0; raw < total; ++raw) ++counts[owner[raw]];
    for (std::size_t i = 0; i < n; ++i)
        if (counts[i] == 0)
            throw InvalidArgument(
                "voronoi_summary: a design point received no raster points; increase raster_resolution");

    std::vector<std::size_t> offsets(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + counts[i];
    std::vector<std::uint64_t> members(total);
    {
        std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
        for (std::size_t raw = 0; raw < total; ++raw) members[cursor[owner[raw]]++] = raw;
    }

    VoronoiSummary summary;
    summary.raster_resolution = raster_resolution;
    summary.areas.resize(n);
    summary.diameters.assign(n, 0.0);
    double cell_volume = design.domain.volume();
    for (std::size_t axis = 0; axis < d; ++axis) cell_volume /= static_cast<double>(res);
    for (std::size_t i = 0; i < n; ++i)
        summary.areas[i] = cell_volume * static_cast<double>(counts[i]);

    // Exact diameter per cell: within a raster line (fixed higher-axis
    // indices, raw index contiguous) the farthest-pair endpoints are the
    // line extremes, so only run endpoints are candidates.
    const std::int64_t n_i = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16) if (exec == Exec::openmp)
    for (std::int64_t ii = 0; ii < n_i; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const std::size_t lo = offsets[i], hi = offsets[i + 1];
        std::vector<std::uint64_t> cand;
        std::size_t run_start = lo;
        for (std::size_t p = lo; p < hi; ++p) {
            const bool last = (p + 1 == hi);
            const bool breaks = last || (members[p + 1] / res != members[p] / res) ||
                                (members[p + 1] != members[p] + 1);
            if (breaks) {
                cand.push_back(members[run_start]);
                if (members[p] != members[run_start]) cand.push_back(members[p]);
                run_start = p + 1;
            }
        }
        std::vector<double> pts(cand.size() * d);
        for (std::size_t p = 0; p < cand.size(); ++p) {
            std::size_t c = cand[p];
            for (std::size_t axis = 0; axis < d; ++axis) {
                const std::size_t gi = c % res;
                c /= res;
                pts[p * d + axis] = design.domain.lo[axis] +
                                    (design.domain.hi[axis] - design.domain.lo[axis]) *
                                        (static_cast<double>(gi) + 0.5) / static_cast<double>(res);
            }
        }
        double best = 0.0;
        for (std::size_t p = 0; p < cand.size(); ++p)
            for (std::size_t q = p + 1; q < cand.size(); ++q)
                best = std::max(best, squared_distance(&pts[p * d], &pts[q * d], d));
        summary.diameters[i] = std::sqrt(best);
    }

    summary.delta_max = *std::max_element(summary.diameters.begin(), summary.diameters.end());
    const auto [amin, amax] = std::minmax_element(summary.areas.begin(), summary.areas.end());
    summary.mesh_ratio = *amax / *amin;
    return summary;
}

RegularityReport check_regularity(const VoronoiSummary& summary, double gamma_bound) {
    RegularityReport report;
    report.delta_max = summary.delta_max;
    report.mesh_ratio = summary.mesh_ratio;
    report.passes = summary.mesh_ratio < gamma_bound;
    return report;
}

}  // namespace lrk
