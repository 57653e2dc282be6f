#include <doctest.h>

#include "rdsync/cli.hpp"
#include "rdsync/config.hpp"
#include "rdsync/coupling.hpp"
#include "rdsync/diagnostics.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rdsync;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("rdsync_cli_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

} // namespace

TEST_CASE("alpha subcommand emits the per-edge table") {
    TempDir tmp("alpha");
    const int rc = cli::dispatch({"alpha", "--topology", "ring", "--n", "7", "--out",
                                  tmp.file("out")});
    CHECK(rc == 0);
    const std::string csv = slurp(tmp.path / "out" / "alpha.csv");
    CHECK(csv.find("k,l,epsilon_kl,alpha_kl,required_epsilon,margin") == 0);
    // every edge of the 7-ring carries load 14
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    int edges = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tok;
        for (int col = 0; col < 4; ++col) std::getline(ls, tok, ',');
        CHECK(tok == "14");
        ++edges;
    }
    CHECK(edges == 7);
}

TEST_CASE("validate subcommand exit codes") {
    TempDir tmp("validate");
    {
        std::ofstream out(tmp.file("good.txt"));
        write_matrix(complete_network(3, 0.1), out);
    }
    spit(tmp.file("bad.txt"), "-1 1 0\n0 -0.5 0.5\n0.5 0 -0.5\n");

    CHECK(cli::dispatch({"validate", "--matrix", tmp.file("good.txt")}) == 0);
    CHECK(cli::dispatch({"validate", "--matrix", tmp.file("bad.txt")}) == 1);
    CHECK(cli::dispatch({"validate", "--matrix", tmp.file("missing.txt")}) == 1);
}

TEST_CASE("unknown subcommands and options") {
    CHECK(cli::dispatch({"frobnicate"}) == 2);
    CHECK(cli::dispatch({}) == 2);
    CHECK(cli::dispatch({"help"}) == 0);
    CHECK(cli::dispatch({"simulate", "--config"}) == 2);  // missing value
    CHECK(cli::dispatch({"fit", "--model", "inverse_n"}) == 1);  // missing input
}

TEST_CASE("simulate writes a complete manifest") {
    TempDir tmp("simulate");
    spit(tmp.file("run.cfg"),
         "grid.nx = 8\ngrid.ny = 8\ncoupling.n = 2\ncoupling.g = 0.02\n"
         "time.t_end = 1\ntime.record_every = 20\ntime.snapshot_times = 1\nseed = 3\n");
    const std::string out = tmp.file("out");
    CHECK(cli::dispatch({"simulate", "--config", tmp.file("run.cfg"), "--out", out}) == 0);

    const std::string manifest = slurp(fs::path(out) / "manifest.txt");
    CHECK(manifest.find("command = simulate") != std::string::npos);
    CHECK(manifest.find("seed = 3") != std::string::npos);

    // every file listed in the manifest exists
    std::istringstream ms(manifest);
    std::string line;
    int listed = 0;
    while (std::getline(ms, line)) {
        const auto pos = line.find("file = ");
        if (pos != 0) continue;
        const auto comma = line.find(", ");
        REQUIRE(comma != std::string::npos);
        const std::string name = line.substr(comma + 2);
        CHECK(fs::exists(fs::path(out) / name));
        ++listed;
    }
    CHECK(listed >= 3);  // trace, snapshots, config echo

    // the echoed configuration reparses to an equal configuration
    AppConfig original = parse_config(slurp(tmp.file("run.cfg")));
    AppConfig echoed = parse_config(slurp(fs::path(out) / "config.echo"));
    CHECK(echoed == original);

    // the trace is re-readable
    std::ifstream trace(fs::path(out) / "trace.csv");
    SyncTrace parsed = read_trace_csv(trace);
    CHECK(parsed.n == 2);
    CHECK(!parsed.samples.empty());

    // snapshots at t = 0 and t = 1 for both nodes, csv and pgm
    CHECK(fs::exists(fs::path(out) / "node0_t0.csv"));
    CHECK(fs::exists(fs::path(out) / "node1_t1.pgm"));
}

TEST_CASE("fit subcommand consumes sweep tables") {
    TempDir tmp("fit");
    spit(tmp.file("sweep.csv"),
         "n,g_star,bracket_lo,bracket_hi,evaluations,wall_time\n"
         "3,0.76766666666666672,0.76,0.768,9,1\n"
         "4,0.60075000000000001,0.6,0.601,9,1\n"
         "5,0.50059999999999993,0.5,0.5006,9,1\n");
    const std::string out = tmp.file("out");
    CHECK(cli::dispatch({"fit", "--model", "inverse_n", "--input", tmp.file("sweep.csv"),
                         "--out", out}) == 0);
    const std::string fit = slurp(fs::path(out) / "fit.csv");
    CHECK(fit.find("model,c0,c1,c2,rmse,r_squared") == 0);
    CHECK(fit.find("inverse_n,") != std::string::npos);

    CHECK(cli::dispatch({"fit", "--model", "nonsense", "--input", tmp.file("sweep.csv"),
                         "--out", out}) == 1);
}

TEST_CASE("threshold subcommand writes its evaluations and bracket") {
    TempDir tmp("threshold");
    spit(tmp.file("fast.cfg"),
         "grid.nx = 16\ngrid.ny = 16\ntime.t_end = 150\ntime.record_every = 100\n"
         "seed = 1\nlab.g_lo = 0.01\nlab.g_hi = 0.08\nlab.resolution = 0.005\n");
    const std::string out = tmp.file("out");
    CHECK(cli::dispatch({"threshold", "--config", tmp.file("fast.cfg"), "--out", out}) == 0);
    const std::string csv = slurp(fs::path(out) / "threshold.csv");
    CHECK(csv.find("g,synchronized,final_error") == 0);
    CHECK(csv.find("# g_star=") != std::string::npos);
    CHECK(csv.find("bracket_lo=") != std::string::npos);
}

TEST_CASE("sweep subcommand emits a table the fit consumes") {
    TempDir tmp("sweep");
    spit(tmp.file("fast.cfg"),
         "grid.nx = 16\ngrid.ny = 16\ntime.t_end = 150\ntime.record_every = 100\n"
         "seed = 1\nlab.g_lo = 0.01\nlab.g_hi = 0.08\nlab.resolution = 0.005\n");
    const std::string out = tmp.file("out");
    CHECK(cli::dispatch({"sweep", "--config", tmp.file("fast.cfg"), "--n-from", "3",
                         "--n-to", "3", "--out", out}) == 0);
    std::ifstream table(fs::path(out) / "sweep.csv");
    const auto points = read_sweep_points(table);
    REQUIRE(points.size() == 1);
    CHECK(points[0].first == 3.0);
    CHECK(points[0].second > 0.01);
    CHECK(points[0].second <= 0.08);
}

TEST_CASE("simulate rejects an unstable configured step") {
    TempDir tmp("unstable");
    spit(tmp.file("bad.cfg"), "time.dt = 0.5\n");
    CHECK(cli::dispatch({"simulate", "--config", tmp.file("bad.cfg"), "--out",
                         tmp.file("out")}) == 1);
}

TEST_CASE("matrix-file topology flows through the cli") {
    TempDir tmp("matrix");
    {
        std::ofstream out(tmp.file("net.txt"));
        write_matrix(ring_unidirectional(5, 1.0), out);
    }
    const std::string out = tmp.file("out");
    CHECK(cli::dispatch({"alpha", "--matrix", tmp.file("net.txt"), "--tie-break",
                         "ring_alternating", "--out", out}) == 0);
    const std::string csv = slurp(fs::path(out) / "alpha.csv");
    // ring n=5: per-edge load 5
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tok;
        for (int col = 0; col < 4; ++col) std::getline(ls, tok, ',');
        CHECK(tok == "5");
    }
}
