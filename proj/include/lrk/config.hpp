#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrk/design.hpp"
#include "lrk/kernels.hpp"
#include "lrk/spectral.hpp"

namespace lrk {

// Flat key=value experiment configuration shared by the CLI commands.
//
//   kernel     = family=exponential range=0.25 variance=1   (repeatable)
//   design     = grid | random
//   grid_m     = 70
//   random_n   = 100
//   domain     = 0,1,0,1            (lo1,hi1,lo2,hi2,...)
//   k_list     = 50,100
//   tau_list   = 0.001,0.01,0.1,1
//   quadrature_m = 2500
//   seed       = 1
//   output_dir = out
//   raster_resolution = 0            (0 = default rule)
//   max_matrix_bytes  = 2147483648
// Sizes for the verification suite (grid sides of unit-square designs).
// Extra keys: corollary1_grid_sides, theorem1_grid_sides, theorem1_k,
// tail_rate_grid_side, discrete_continuous_grid_side, golden_grid_side,
// golden_file.
struct VerifySizes {
    std::vector<std::size_t> corollary1_grid_sides = {10, 20, 30};
    std::vector<std::size_t> theorem1_grid_sides = {20, 40};
    std::size_t theorem1_k = 100;
    std::size_t tail_rate_grid_side = 40;
    std::size_t discrete_continuous_grid_side = 40;
    std::size_t golden_grid_side = 70;
    std::string golden_file;
};

struct ExperimentConfig {
    std::vector<KernelSpec> kernels;
    bool grid = true;
    std::size_t grid_m = 70;
    std::size_t random_n = 100;
    Box domain = Box::unit_square();
    std::vector<std::size_t> k_list;
    std::vector<double> tau_list;
    std::size_t quadrature_m = 2500;
    std::uint64_t seed = 1;
    std::string output_dir = ".";
    int raster_resolution = 0;
    std::size_t max_matrix_bytes = kDefaultMatrixBudget;
    VerifySizes verify;

    Design make_design() const;
    void validate() const;
};

// Parses the flat file format; later keys override earlier ones except
// `kernel`, which appends. Unknown keys are rejected.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Applies a single key=value override.
void apply_override(ExperimentConfig& config, const std::string& key,
                    const std::string& value);

}  // namespace lrk
