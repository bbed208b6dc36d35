#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaugemech/config.hpp"
#include "gaugemech/errors.hpp"
#include "gaugemech/run_io.hpp"

using namespace gm;
namespace fs = std::filesystem;

namespace {

int parse_failure_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const config_error& e) {
        return e.line;
    }
    return -1;
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

// Drops `# timestamp = ...` lines, the only bytes allowed to differ between
// repeated runs.
std::string strip_timestamps(const std::string& text) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::size_t end = nl == std::string::npos ? text.size() : nl + 1;
        std::string line = text.substr(pos, end - pos);
        if (line.rfind("# timestamp", 0) != 0) out += line;
        pos = end;
    }
    return out;
}

fs::path fresh_dir(const char* name) {
    fs::path dir(name);
    fs::remove_all(dir);
    return dir;
}

std::set<std::string> files_on_disk(const fs::path& dir) {
    std::set<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        names.insert(entry.path().filename().string());
    return names;
}

// The kitchen-sink document: every key, nothing at its default.
const char* kFullDocument = R"(
experiment = aharonov_bohm  # selector is optional, CLI may supply it
particle.m = 0.5
particle.p = 3.5
geometry.d = 2.5
geometry.L = 40
geometry.divergence = 0.01
screen.bins = 128
screen.x_min = -30
screen.x_max = 31
sampler.n_paths = 1234
sampler.n_joints = 5
sampler.perturb_scale = 0.2
sampler.accept_tol = 1.5
sampler.projection = root_find
sampler.max_bisection_iters = 64
seeds.master_seed = 987654321
seeds.streams = 3
density.a = 2
density.b = 0.5
density.xi_bar = 0.05
intrusion.mode = fixed_phase
intrusion.q = 0.25
intrusion.delta_kappa = -1.25
intrusion.stage = post_slit
flux.F = 3.5
barrier.V = 2
barrier.x_lo = -0.5
barrier.x_hi = 0.75
barrier.margin = 0.5
barrier.t_over_l_min = 1.5
barrier.t_over_l_max = 2
sweep.distances = 1.5, 4, 9
run.estimator = both
epr.cases = 7
)";

}  // namespace

TEST_CASE("the empty document parses to pure defaults") {
    ConfigDocument doc = parse_config("");
    CHECK(doc == ConfigDocument{});
    CHECK(!doc.experiment.has_value());
    CHECK(doc.config.particle.momentum == doctest::Approx(2.0 * M_PI));
    CHECK(doc.config.sampler.n_paths == 200000);
    CHECK(doc.epr_cases == 100);
}

TEST_CASE("a minimal document gets every other default applied") {
    ConfigDocument doc = parse_config(
        "particle.p = 3\n"
        "geometry.d = 4\n"
        "geometry.L = 50\n"
        "screen.bins = 100\n");
    CHECK(doc.config.particle.momentum == 3.0);
    CHECK(doc.config.slit_separation == 4.0);
    CHECK(doc.config.screen.distance == 50.0);
    CHECK(doc.config.screen.n_bins == 100);

    ConfigDocument defaults;
    CHECK(doc.config.particle.mass == defaults.config.particle.mass);
    CHECK(doc.config.screen.x_min == defaults.config.screen.x_min);
    CHECK(doc.config.screen.x_max == defaults.config.screen.x_max);
    CHECK(doc.config.sampler == defaults.config.sampler);
    CHECK(doc.config.seeds == defaults.config.seeds);
    CHECK(doc.config.density == defaults.config.density);
    CHECK(doc.config.intrusion == defaults.config.intrusion);
    CHECK(doc.config.potential == defaults.config.potential);
    CHECK(doc.config.estimator == Estimator::analytic);
    CHECK(doc.config.sweep_distances == defaults.config.sweep_distances);
    CHECK(doc.config.flux == 0.0);
    CHECK(doc.epr_cases == 100);
}

TEST_CASE("parse, serialize, parse is the identity") {
    ConfigDocument doc = parse_config(kFullDocument);
    std::string canonical = serialize_config(doc);
    ConfigDocument again = parse_config(canonical);
    CHECK(again == doc);
    CHECK(serialize_config(again) == canonical);

    ConfigDocument empty = parse_config("");
    CHECK(parse_config(serialize_config(empty)) == empty);
}

TEST_CASE("the full document lands where it should") {
    ConfigDocument doc = parse_config(kFullDocument);
    CHECK(doc.experiment == ExperimentKind::aharonov_bohm);
    CHECK(doc.config.particle.mass == 0.5);
    CHECK(doc.config.sampler.projection == ProjectionMode::root_find);
    CHECK(doc.config.seeds.master_seed == 987654321ULL);
    CHECK(doc.config.intrusion.mode == IntrusionMode::fixed_phase);
    CHECK(doc.config.intrusion.stage == IntrusionStage::post_slit);
    CHECK(doc.config.intrusion.fixed_delta_kappa == -1.25);
    CHECK(doc.config.flux == 3.5);
    CHECK(doc.config.potential.height == 2.0);
    CHECK(doc.config.potential.x_lo == -0.5);
    CHECK(doc.config.sweep_distances == std::vector<double>{1.5, 4.0, 9.0});
    CHECK(doc.config.estimator == Estimator::both);
    CHECK(doc.epr_cases == 7);
    // Selector names an interferometer run, so the box stays inert.
    CHECK(doc.config.potential.kind == PotentialKind::free);
}

TEST_CASE("selecting the barrier experiment arms the potential box") {
    ConfigDocument doc = parse_config("experiment = barrier\nbarrier.V = 3\n");
    CHECK(doc.config.potential.kind == PotentialKind::barrier);
    CHECK(doc.config.potential.height == 3.0);
    CHECK(parse_config(serialize_config(doc)) == doc);
}

TEST_CASE("errors carry 1-based line numbers") {
    CHECK(parse_failure_line("particle.m = 1\nnonsense\n") == 2);
    CHECK(parse_failure_line("\n# comment\nparticle.m = 0\n") == 3);
    CHECK(parse_failure_line("particle.m = \n") == 1);
    CHECK(parse_failure_line("particle.m = abc\n") == 1);
    CHECK(parse_failure_line("particle.m = 1e999\n") == 1);
    CHECK(parse_failure_line("particle.m = nan\n") == 1);

    try {
        parse_config("particle.m = 1\nparticle.m = 2\n");
        FAIL("duplicate accepted");
    } catch (const config_error& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
        CHECK(std::string(e.what()).find("particle.m") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected by name") {
    try {
        parse_config("particle.mass = 1\n");
        FAIL("unknown key accepted");
    } catch (const config_error& e) {
        CHECK(e.line == 1);
        CHECK(std::string(e.what()).find("particle.mass") != std::string::npos);
    }
}

TEST_CASE("range violations name the offending key") {
    try {
        parse_config("intrusion.q = -1\n");
        FAIL("negative kick momentum accepted");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("intrusion.q") != std::string::npos);
        CHECK(e.line == 1);
    }
    CHECK_THROWS_AS(parse_config("particle.p = 0\n"), config_error);
    CHECK_THROWS_AS(parse_config("screen.bins = 1\n"), config_error);
    CHECK_THROWS_AS(parse_config("sampler.accept_tol = 3.2\n"), config_error);
    CHECK_THROWS_AS(parse_config("sampler.n_joints = 65\n"), config_error);
    CHECK_THROWS_AS(parse_config("seeds.master_seed = -1\n"), config_error);
    CHECK_THROWS_AS(parse_config("barrier.t_over_l_min = 1\n"), config_error);
    CHECK_THROWS_AS(parse_config("epr.cases = 0\n"), config_error);
    CHECK_THROWS_AS(parse_config("run.estimator = quick\n"), config_error);
}

TEST_CASE("cross-field checks fire after the whole document is read") {
    CHECK(parse_failure_line("screen.x_min = 10\nscreen.x_max = -10\n") == 2);
    CHECK(parse_failure_line("barrier.x_hi = -2\n") == 1);
    CHECK(parse_failure_line("barrier.t_over_l_max = 1.05\n") == 1);
    // Defaults violated by nothing: the whole-document checks pass vacuously.
    CHECK_NOTHROW(parse_config("barrier.x_lo = 0.25\nbarrier.x_hi = 0.5\n"));
    CHECK_THROWS_AS(parse_config("sweep.distances = 5, 4\n"), config_error);
    CHECK_THROWS_AS(parse_config("sweep.distances = -1, 4\n"), config_error);
    CHECK_THROWS_AS(parse_config("sweep.distances = 5, 5\n"), config_error);
}

TEST_CASE("comments and spacing are immaterial") {
    ConfigDocument a = parse_config("particle.m=2\nparticle.p = 3   # tight\n");
    ConfigDocument b = parse_config("  particle.m   =2  \n\n# note\nparticle.p =3\n");
    CHECK(a == b);
    CHECK(config_hash(a) == config_hash(b));
}

TEST_CASE("the hash tracks content, not formatting") {
    ConfigDocument base = parse_config("");
    ConfigDocument tweaked = parse_config("density.b = 0.75\n");
    CHECK(config_hash(base) != config_hash(tweaked));
    CHECK(config_hash(base) == config_hash(ConfigDocument{}));
}

TEST_CASE("profile CSV layout: metadata, header, 12-digit rows") {
    DensityProfile profile;
    profile.bin_centers = {-1.25, 1.25};
    profile.gauge_density = {0.123456789012345, 0.2};
    profile.metadata = {{"estimator", "analytic"}, {"seed", "7"}};

    std::string csv = profile_csv(profile);
    std::vector<std::string> lines;
    std::istringstream stream(csv);
    for (std::string line; std::getline(stream, line);) lines.push_back(line);

    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "# estimator = analytic");
    CHECK(lines[1] == "# seed = 7");
    CHECK(lines[2].rfind("# timestamp = ", 0) == 0);
    CHECK(lines[3] == "bin_center,gauge_density,oracle_density");
    CHECK(lines[4] == "-1.25,0.123456789012,");
    CHECK(lines[5] == "1.25,0.2,");
    CHECK(csv.back() == '\n');

    profile.oracle_density = {0.5, 0.25};
    std::string with_oracle = profile_csv(profile);
    CHECK(with_oracle.find("-1.25,0.123456789012,0.5\n") != std::string::npos);
    CHECK(with_oracle.find("1.25,0.2,0.25\n") != std::string::npos);
}

TEST_CASE("write_profile lands atomically") {
    fs::path dir = fresh_dir("cli_io_write");
    fs::create_directories(dir);
    DensityProfile profile;
    profile.bin_centers = {0.5};
    profile.gauge_density = {1.0};
    write_profile(profile, (dir / "one.csv").string());
    CHECK(fs::exists(dir / "one.csv"));
    CHECK(!fs::exists(dir / "one.csv.tmp"));
    CHECK(strip_timestamps(read_file(dir / "one.csv")) ==
          "bin_center,gauge_density,oracle_density\n0.5,1,\n");
}

TEST_CASE("repeated runs are byte-identical apart from timestamps") {
    ConfigDocument doc = parse_config("epr.cases = 50\nseeds.master_seed = 11\n");
    fs::path a = fresh_dir("cli_io_epr_a");
    fs::path b = fresh_dir("cli_io_epr_b");
    RunManifest first = run_experiment(ExperimentKind::epr, doc, a.string());
    RunManifest second = run_experiment(ExperimentKind::epr, doc, b.string());
    CHECK(first.outputs == second.outputs);
    CHECK(strip_timestamps(read_file(a / "epr_cases.csv")) ==
          strip_timestamps(read_file(b / "epr_cases.csv")));
    CHECK(read_file(a / "plot_epr.py") == read_file(b / "plot_epr.py"));
}

TEST_CASE("a run's manifest lists exactly the files on disk") {
    ConfigDocument doc = parse_config(
        "screen.bins = 64\n"
        "sampler.n_paths = 2000\n"
        "seeds.streams = 2\n"
        "run.estimator = both\n");
    fs::path dir = fresh_dir("cli_io_ds");
    RunManifest manifest =
        run_experiment(ExperimentKind::double_slit, doc, dir.string());

    std::set<std::string> listed(manifest.outputs.begin(), manifest.outputs.end());
    CHECK(listed == files_on_disk(dir));
    CHECK(listed.count("double_slit_analytic.csv") == 1);
    CHECK(listed.count("double_slit_monte_carlo.csv") == 1);
    CHECK(listed.count("plot_double_slit.py") == 1);
    CHECK(listed.count("manifest.json") == 1);

    nlohmann::json j = nlohmann::json::parse(read_file(dir / "manifest.json"));
    CHECK(j["experiment"] == "double_slit");
    CHECK(j["version"] == std::string(tool_version));
    CHECK(j["master_seed"] == 1);
    CHECK(j["wall_seconds"].is_number());

    // The embedded config echo reparses to the exact document that ran.
    ConfigDocument expected = doc;
    expected.experiment = ExperimentKind::double_slit;
    CHECK(parse_config(j["config"].get<std::string>()) == expected);
    CHECK(parse_config(manifest.config_echo) == expected);
}

TEST_CASE("profile CSV rows reproduce the in-memory profile") {
    ConfigDocument doc = parse_config("screen.bins = 32\n");
    fs::path dir = fresh_dir("cli_io_rows");
    run_experiment(ExperimentKind::double_slit, doc, dir.string());

    DensityProfile profile = double_slit(doc.config, Estimator::analytic);
    std::string csv = read_file(dir / "double_slit_analytic.csv");
    std::istringstream stream(csv);
    std::vector<std::string> rows;
    for (std::string line; std::getline(stream, line);)
        if (!line.empty() && line[0] != '#' && line[0] != 'b') rows.push_back(line);
    REQUIRE(rows.size() == profile.bin_centers.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        char expected[80];
        std::snprintf(expected, sizeof expected, "%.12g,%.12g,",
                      profile.bin_centers[i], profile.gauge_density[i]);
        CHECK(rows[i] == expected);
    }
}

TEST_CASE("failed runs leave nothing behind") {
    ConfigDocument doc = parse_config("experiment = epr\n");
    fs::path dir = fresh_dir("cli_io_fail");
    CHECK_THROWS_AS(run_experiment(ExperimentKind::double_slit, doc, dir.string()),
                    config_error);
    CHECK(!fs::exists(dir));

    // A driver failure surfaces after composition starts but before any file
    // is written: the slits must fit inside the screen window.
    ConfigDocument bad = parse_config("geometry.d = 200\n");
    CHECK_THROWS_AS(run_experiment(ExperimentKind::double_slit, bad, dir.string()),
                    error);
    CHECK(!fs::exists(dir));
}

TEST_CASE("sweep runs emit one profile per distance") {
    ConfigDocument doc = parse_config(
        "sweep.distances = 3, 12\n"
        "screen.bins = 48\n");
    fs::path dir = fresh_dir("cli_io_sweep");
    RunManifest manifest = run_experiment(ExperimentKind::sweep, doc, dir.string());
    std::set<std::string> listed(manifest.outputs.begin(), manifest.outputs.end());
    CHECK(listed == files_on_disk(dir));
    CHECK(listed.count("sweep_L3_analytic.csv") == 1);
    CHECK(listed.count("sweep_L12_analytic.csv") == 1);
    CHECK(listed.count("plot_sweep.py") == 1);
    CHECK(read_file(dir / "plot_sweep.py").find("sweep_L12_analytic.csv") !=
          std::string::npos);
}

TEST_CASE("oracle comparison attaches a populated oracle column") {
    ConfigDocument doc = parse_config("screen.bins = 40\n");
    fs::path dir = fresh_dir("cli_io_oracle");
    run_experiment(ExperimentKind::oracle_compare, doc, dir.string());
    std::string csv = read_file(dir / "oracle_compare_analytic.csv");
    CHECK(csv.find("# oracle = idealized two-slit intensity\n") != std::string::npos);

    // Every data row carries a nonempty third field.
    std::istringstream stream(csv);
    int rows = 0;
    for (std::string line; std::getline(stream, line);) {
        if (line.empty() || line[0] == '#' || line[0] == 'b') continue;
        ++rows;
        CHECK(line.back() != ',');
        CHECK(line.find(",,") == std::string::npos);
    }
    CHECK(rows == 40);
}

TEST_CASE("the command line front end round-trips through a shell") {
    if (!fs::exists("./gaugemech")) {
        WARN("gaugemech binary not present in the working directory, skipping");
        return;
    }
    fs::path dir = fresh_dir("cli_io_shell");

    std::ofstream("cli_io_ok.cfg") << "experiment = epr\nepr.cases = 5\n";
    std::ofstream("cli_io_bad.cfg") << "particle.charge = 1\n";

    auto shell = [](const std::string& cmd) {
        int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };
    CHECK(shell("./gaugemech list-experiments > cli_io_list.txt") == 0);
    CHECK(read_file("cli_io_list.txt").find("double_slit") != std::string::npos);
    CHECK(shell("./gaugemech validate --config cli_io_ok.cfg > /dev/null") == 0);
    CHECK(shell("./gaugemech validate --config cli_io_bad.cfg 2> /dev/null") == 1);
    CHECK(shell("./gaugemech validate --config cli_io_absent.cfg 2> /dev/null") == 1);
    CHECK(shell("./gaugemech run epr --config cli_io_ok.cfg --out " + dir.string() +
                " > /dev/null") == 0);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(shell("./gaugemech run sweep --config cli_io_ok.cfg --out " + dir.string() +
                " 2> /dev/null") == 1);
    CHECK(shell("./gaugemech run warp --config cli_io_ok.cfg 2> /dev/null") == 1);
}
