#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("LRK_CLI_PATH");
    REQUIRE(p != nullptr);
    return p;
}

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(static_cast<bool>(in));
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("lrk_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p);
    os << text;
}

}  // namespace

TEST_CASE("eigen-decay smoke run on a tiny grid is deterministic") {
    const fs::path dir = fresh_dir("decay");
    const fs::path cfg = dir / "cfg.txt";
    write_file(cfg, "kernel = family=exponential range=0.25 variance=1\n"
                    "design = grid\n"
                    "grid_m = 6\n");
    CHECK(run("eigen-decay --config " + cfg.string() + " --output " + dir.string()) == 0);
    const fs::path out = dir / "spectrum_exponential.csv";
    REQUIRE(fs::exists(out));
    const std::string first = slurp(out);
    CHECK(first.substr(0, 24) == "k,lambda,cumsum,tailsum\n");
    CHECK(run("eigen-decay --config " + cfg.string() + " --output " + dir.string()) == 0);
    CHECK(slurp(out) == first);  // bit-identical bytes
}

TEST_CASE("eigen-decay polynomial spectrum flattens after rank six") {
    const fs::path dir = fresh_dir("poly");
    CHECK(run("eigen-decay --set kernel='family=polynomial degree=2 offset=1' "
              "--set grid_m=5 --output " + dir.string()) == 0);
    const std::string text = slurp(dir / "spectrum_polynomial.csv");
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);  // header
    double cum6 = 0.0, cum_last = 0.0;
    for (int k = 1; std::getline(is, line); ++k) {
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        std::getline(ls, cell, ',');
        std::getline(ls, cell, ',');
        cum_last = std::stod(cell);
        if (k == 6) cum6 = cum_last;
    }
    CHECK(cum_last - cum6 <= 1e-8 * cum_last);
}

TEST_CASE("table2 on a small grid matches the library") {
    const fs::path dir = fresh_dir("table2");
    CHECK(run("table2 --set grid_m=8 --set tau_list=0.01,0.1 --output " + dir.string()) == 0);
    const std::string text = slurp(dir / "table2.csv");
    CHECK(text.substr(0, 40) == "tau,cond_paper,cond_strict,mse_spectral\n");
    // two data rows
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    REQUIRE(fs::exists(dir / "pseudo_tail.csv"));
}

TEST_CASE("verify --only lemma2 reports and exits zero") {
    const fs::path dir = fresh_dir("verify_only");
    CHECK(run("verify --only lemma2 --output " + dir.string()) == 0);
    const std::string text = slurp(dir / "verify_report.csv");
    CHECK(text.starts_with("check,instance,k,lhs,rhs,pass"));
    CHECK(text.find("lemma2") != std::string::npos);
    CHECK(text.find("theorem2") == std::string::npos);
}

TEST_CASE("verify fails on corrupted golden values") {
    const fs::path dir = fresh_dir("verify_golden");
    const fs::path fixture = dir / "bad_values.txt";
    // deliberately wrong expectations at a small grid
    write_file(fixture, "cumsum exponential 3 9999.0 0.1 0\n");
    const fs::path cfg = dir / "cfg.txt";
    write_file(cfg, "golden_file = " + fixture.string() + "\ngolden_grid_side = 5\n");
    CHECK(run("verify --only golden --config " + cfg.string() + " --output " +
              dir.string()) == 1);
}

TEST_CASE("usage and config errors exit with code 2") {
    const fs::path dir = fresh_dir("errors");
    CHECK(run("verify --only not_a_check --output " + dir.string()) == 2);
    const fs::path cfg = dir / "bad.txt";
    write_file(cfg, "unknown_key = 1\n");
    CHECK(run("eigen-decay --config " + cfg.string()) == 2);
    write_file(cfg, "kernel = family=nope\n");
    CHECK(run("eigen-decay --config " + cfg.string()) == 2);
    CHECK(run("nonsense-subcommand") == 2);
    // memory budget too small for the requested grid is a config error
    CHECK(run("eigen-decay --set grid_m=40 --max-matrix-bytes 1000") == 2);
}

TEST_CASE("voronoi command writes cells and summary") {
    const fs::path dir = fresh_dir("voronoi");
    CHECK(run("voronoi --set design=random --set random_n=1 --set raster_resolution=100 "
              "--seed 7 --output " + dir.string()) == 0);
    const std::string cells = slurp(dir / "voronoi_cells.csv");
    CHECK(cells.substr(0, 16) == "i,area,diameter\n");
    CHECK(cells.find("1,1,") != std::string::npos);  // single cell covers the unit square
    const std::string summary = slurp(dir / "voronoi_summary.csv");
    CHECK(summary.starts_with("delta_max,mesh_ratio,c_delta_max"));

    // determinism across runs for a random design
    const fs::path dir2 = fresh_dir("voronoi2");
    CHECK(run("voronoi --set design=random --set random_n=100 --set raster_resolution=250 "
              "--seed 7 --output " + dir2.string()) == 0);
    const std::string first = slurp(dir2 / "voronoi_cells.csv");
    CHECK(run("voronoi --set design=random --set random_n=100 --set raster_resolution=250 "
              "--seed 7 --output " + dir2.string()) == 0);
    CHECK(slurp(dir2 / "voronoi_cells.csv") == first);
}
