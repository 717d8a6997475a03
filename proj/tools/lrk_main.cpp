// lrk: low-rank kriging harness.
//
// Subcommands: eigen-decay, table2, verify, voronoi. All output is CSV and
// deterministic for a fixed config. Exit codes: 0 success, 1 verification
// failure, 2 usage/config error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "lrk/config.hpp"
#include "lrk/csv.hpp"
#include "lrk/design.hpp"
#include "lrk/error.hpp"
#include "lrk/kriging.hpp"
#include "lrk/spectral.hpp"
#include "lrk/verify.hpp"
#include "lrk/voronoi.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string output_dir;
    long long seed = -1;
    long long max_matrix_bytes = -1;
    std::vector<std::string> only;
    std::vector<std::string> overrides;  // key=value
};

lrk::ExperimentConfig load_config(const CliArgs& args) {
    lrk::ExperimentConfig config;
    if (!args.config_path.empty()) config = lrk::parse_config_file(args.config_path);
    for (const std::string& kv : args.overrides) {
        const auto eq = kv.find('=');
        lrk::require(eq != std::string::npos, "override must be key=value: " + kv);
        lrk::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!args.output_dir.empty()) config.output_dir = args.output_dir;
    if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
    if (args.max_matrix_bytes >= 0)
        config.max_matrix_bytes = static_cast<std::size_t>(args.max_matrix_bytes);
    return config;
}

std::ofstream open_output(const lrk::ExperimentConfig& config, const std::string& name) {
    std::filesystem::create_directories(config.output_dir);
    const auto path = std::filesystem::path(config.output_dir) / name;
    std::ofstream os(path);
    lrk::require(static_cast<bool>(os), "cannot open output file " + path.string());
    return os;
}

int cmd_eigen_decay(lrk::ExperimentConfig config) {
    if (config.kernels.empty()) {
        config.kernels = {lrk::KernelSpec::exponential(0.25), lrk::KernelSpec::matern_25(0.25),
                          lrk::KernelSpec::squared_exponential(0.1),
                          lrk::KernelSpec::polynomial(2, 1.0)};
    }
    config.validate();
    const lrk::Design design = config.make_design();
    for (const lrk::KernelSpec& spec : config.kernels) {
        lrk::Matrix v = lrk::assemble_covariance(spec, design,
                                                 {lrk::Exec::openmp, config.max_matrix_bytes});
        const std::vector<double> vals = lrk::dense_eigenvalues(v);
        auto os = open_output(config, "spectrum_" + lrk::kernel_tag(spec) + ".csv");
        lrk::csv::write_spectrum(os, vals);
        std::cout << "spectrum_" << lrk::kernel_tag(spec) << ".csv: n=" << design.n
                  << " trace=" << lrk::csv::format_double(
                         lrk::tail_sums(vals).cumulative.back())
                  << "\n";
    }
    return 0;
}

int cmd_table2(lrk::ExperimentConfig config) {
    if (config.kernels.empty()) config.kernels = {lrk::KernelSpec::squared_exponential(0.1)};
    if (config.tau_list.empty()) config.tau_list = {0.001, 0.01, 0.1, 1.0};
    if (config.k_list.empty()) config.k_list = {100};
    config.validate();
    const lrk::KernelSpec spec = config.kernels.front();
    const std::size_t k = config.k_list.front();
    const lrk::Design design = config.make_design();
    lrk::Matrix v =
        lrk::assemble_covariance(spec, design, {lrk::Exec::openmp, config.max_matrix_bytes});
    const std::vector<double> vals = lrk::dense_eigenvalues(v);

    auto os = open_output(config, "table2.csv");
    os << "tau,cond_paper,cond_strict,mse_spectral\n";
    for (double tau : config.tau_list) {
        const double cond_paper = vals.front() / tau;
        const double cond_strict = (vals.front() + tau) / (vals.back() + tau);
        const double mse = lrk::perturbation_mse(vals, k, tau);
        os << lrk::csv::format_double(tau) << ',' << lrk::csv::format_double(cond_paper)
           << ',' << lrk::csv::format_double(cond_strict) << ','
           << lrk::csv::format_double(mse) << '\n';
    }
    auto ts = open_output(config, "pseudo_tail.csv");
    ts << "k,pseudo_tail\n";
    ts << k << ',' << lrk::csv::format_double(lrk::pseudo_insample_mse(vals, k)) << '\n';
    std::cout << "table2.csv and pseudo_tail.csv written (n=" << design.n << ", k=" << k
              << ")\n";
    return 0;
}

int cmd_verify(lrk::ExperimentConfig config, const std::vector<std::string>& only) {
    lrk::verify::VerifyOptions options;
    options.seed = config.seed;
    options.quadrature_m = config.quadrature_m;
    options.max_matrix_bytes = config.max_matrix_bytes;
    options.corollary1_grid_sides = config.verify.corollary1_grid_sides;
    options.theorem1_grid_sides = config.verify.theorem1_grid_sides;
    options.theorem1_k = config.verify.theorem1_k;
    options.tail_rate_grid_side = config.verify.tail_rate_grid_side;
    options.discrete_continuous_grid_side = config.verify.discrete_continuous_grid_side;
    options.golden_grid_side = config.verify.golden_grid_side;
    options.golden_file = config.verify.golden_file;

    lrk::verify::SpectrumCache cache(options.exec, options.max_matrix_bytes);
    const auto rows = lrk::verify::run_checks(only, options, cache);
    auto os = open_output(config, "verify_report.csv");
    lrk::csv::write_checks(os, rows);
    std::size_t failed = 0;
    for (const auto& r : rows) {
        if (!r.pass) ++failed;
        std::printf("%-26s %-34s lhs=%-14.6g rhs=%-14.6g %s\n", r.check.c_str(),
                    r.instance.c_str(), r.lhs, r.rhs, r.pass ? "pass" : "FAIL");
    }
    std::printf("%zu checks, %zu failed\n", rows.size(), failed);
    return failed == 0 ? 0 : 1;
}

int cmd_voronoi(lrk::ExperimentConfig config) {
    if (config.kernels.empty()) config.kernels = {lrk::KernelSpec::exponential(0.25)};
    config.validate();
    const lrk::Design design = config.make_design();
    const int res = config.raster_resolution > 0
                        ? config.raster_resolution
                        : lrk::default_raster_resolution(design.n, design.d);
    const lrk::VoronoiSummary summary = lrk::voronoi_summary(design, res);
    const double cdel =
        lrk::c_delta(config.kernels.front(), design.domain, summary.delta_max, 32);
    auto cells = open_output(config, "voronoi_cells.csv");
    lrk::csv::write_voronoi_cells(cells, summary);
    auto sum = open_output(config, "voronoi_summary.csv");
    lrk::csv::write_voronoi_summary(sum, summary, cdel);
    std::cout << "voronoi: n=" << design.n << " delta_max="
              << lrk::csv::format_double(summary.delta_max)
              << " mesh_ratio=" << lrk::csv::format_double(summary.mesh_ratio) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-rank kriging harness"};
    app.require_subcommand(1);
    CliArgs args;

    auto add_common = [&args](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "flat key=value config file");
        sub->add_option("--output", args.output_dir, "output directory");
        sub->add_option("--seed", args.seed, "random seed override");
        sub->add_option("--max-matrix-bytes", args.max_matrix_bytes,
                        "dense matrix memory budget");
        sub->add_option("--set", args.overrides, "config override key=value (repeatable)");
    };

    CLI::App* decay = app.add_subcommand("eigen-decay", "kernel-matrix spectrum CSVs");
    add_common(decay);
    CLI::App* table2 = app.add_subcommand("table2", "perturbation MSE / condition table");
    add_common(table2);
    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
    add_common(verify);
    verify->add_option("--only", args.only, "run only the named checks (repeatable)");
    CLI::App* voronoi = app.add_subcommand("voronoi", "Voronoi regularity diagnostics");
    add_common(voronoi);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const lrk::ExperimentConfig config = load_config(args);
        if (decay->parsed()) return cmd_eigen_decay(config);
        if (table2->parsed()) return cmd_table2(config);
        if (verify->parsed()) return cmd_verify(config, args.only);
        if (voronoi->parsed()) return cmd_voronoi(config);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const lrk::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lrk::BudgetExceeded& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lrk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
