#include "gaugemech/run_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <utility>

#include <json.hpp>

#include "gaugemech/errors.hpp"
#include "gaugemech/gauge.hpp"
#include "gaugemech/oracle.hpp"
#include "gaugemech/rng.hpp"

namespace gm {
namespace {

std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_compact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string iso_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string metadata_lines(const std::map<std::string, std::string>& meta) {
    std::string out;
    for (const auto& [key, value] : meta) out += "# " + key + " = " + value + "\n";
    out += "# timestamp = " + iso_timestamp() + "\n";
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f.good()) throw io_error("cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("cannot move " + tmp.string() + " into place");
}

std::string epr_cases_csv(const ConfigDocument& doc, const std::string& hash_hex) {
    const ExperimentConfig& cfg = doc.config;
    RandomStream rng(cfg.seeds.master_seed, 0);

    std::string out = metadata_lines({
        {"cases", std::to_string(doc.epr_cases)},
        {"config_hash", hash_hex},
        {"experiment", "epr"},
        {"seed", std::to_string(cfg.seeds.master_seed)},
    });
    out += "case,s_rho,s_rho_prime,delta_s,undisturbed_physical,"
           "disturbed_physical,compensated_physical,factor_angle\n";
    for (long long i = 0; i < doc.epr_cases; ++i) {
        double s_rho = rng.uniform(-20.0, 20.0);
        int turns = 1 + static_cast<int>(rng.uniform() * 4.0);
        double s_rho_prime = s_rho - 2.0 * M_PI * turns;
        double delta_s = rng.uniform(-10.0, 10.0);
        EprOutcome outcome = epr_compensation(s_rho, s_rho_prime, delta_s);
        bool disturbed = pair_is_physical(s_rho + delta_s, s_rho_prime, 0.0);
        bool compensated = pair_is_physical(s_rho + delta_s, s_rho_prime,
                                            outcome.compensating_factor_angle);
        out += std::to_string(i) + "," + fmt17(s_rho) + "," + fmt17(s_rho_prime) +
               "," + fmt17(delta_s) + "," + (outcome.undisturbed_physical ? "1" : "0") +
               "," + (disturbed ? "1" : "0") + "," + (compensated ? "1" : "0") + "," +
               fmt17(outcome.compensating_factor_angle) + "\n";
    }
    return out;
}

std::string barrier_csv(const TunnelingReport& report, const ExperimentConfig& cfg,
                        const std::string& hash_hex) {
    std::string out = metadata_lines({
        {"config_hash", hash_hex},
        {"experiment", "barrier"},
        {"fraction", fmt17(report.transmitted_fraction)},
        {"n_attempts", std::to_string(report.n_attempts)},
        {"n_transmitted", std::to_string(report.n_transmitted)},
        {"seed", std::to_string(cfg.seeds.master_seed)},
    });
    out += "emergent_speed\n";
    for (double speed : report.emergent_speeds) out += fmt17(speed) + "\n";
    return out;
}

std::string profile_plot_script(const std::string& experiment,
                                const std::vector<std::string>& csvs) {
    std::string files;
    for (std::size_t i = 0; i < csvs.size(); ++i) {
        if (i) files += ", ";
        files += '"' + csvs[i] + '"';
    }
    std::string out = "# Renders the " + experiment +
                      " profiles emitted alongside this script.\n"
                      "import csv\n"
                      "\n"
                      "import matplotlib.pyplot as plt\n"
                      "\n"
                      "FILES = [" +
                      files + "]\n";
    out += R"PY(

def load(path):
    xs, gauge, oracle = [], [], []
    with open(path) as f:
        for row in csv.reader(line for line in f if not line.startswith("#")):
            if not row or row[0] == "bin_center":
                continue
            xs.append(float(row[0]))
            gauge.append(float(row[1]))
            if len(row) > 2 and row[2]:
                oracle.append(float(row[2]))
    return xs, gauge, oracle


fig, ax = plt.subplots(figsize=(8, 5))
for path in FILES:
    xs, gauge, oracle = load(path)
    label = path[: -len(".csv")]
    ax.plot(xs, gauge, label=label)
    if oracle:
        ax.plot(xs, oracle, linestyle="--", label=label + " (oracle)")
ax.set_xlabel("screen coordinate")
ax.set_ylabel("normalized density")
ax.legend(fontsize=8)
fig.tight_layout()
)PY";
    out += "fig.savefig(\"" + experiment + ".png\", dpi=150)\n";
    return out;
}

std::string epr_plot_script() {
    return R"PY(# Renders the pair-compensation table emitted alongside this script.
import csv

import matplotlib.pyplot as plt

delta, angle = [], []
with open("epr_cases.csv") as f:
    for row in csv.reader(line for line in f if not line.startswith("#")):
        if not row or row[0] == "case":
            continue
        delta.append(float(row[3]))
        angle.append(float(row[7]))

fig, ax = plt.subplots(figsize=(6, 5))
ax.scatter(delta, angle, s=10)
ax.set_xlabel("injected action change")
ax.set_ylabel("compensating factor angle")
fig.tight_layout()
fig.savefig("epr.png", dpi=150)
)PY";
}

std::string barrier_plot_script() {
    return R"PY(# Renders the transmission report emitted alongside this script.
import csv

import matplotlib.pyplot as plt

speeds = []
with open("barrier_report.csv") as f:
    for row in csv.reader(line for line in f if not line.startswith("#")):
        if not row or row[0] == "emergent_speed":
            continue
        speeds.append(float(row[0]))

fig, ax = plt.subplots(figsize=(6, 5))
ax.hist(speeds, bins=40, range=(0.0, 1.0))
ax.set_xlabel("emergent speed")
ax.set_ylabel("transmissions")
fig.tight_layout()
fig.savefig("barrier.png", dpi=150)
)PY";
}

void attach_two_slit_oracle(DensityProfile& profile, const ExperimentConfig& cfg) {
    std::size_t n = profile.bin_centers.size();
    profile.oracle_density.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        profile.oracle_density[i] = two_slit_wave_intensity(
            profile.bin_centers[i], cfg.slit_separation, cfg.screen.distance,
            cfg.particle.momentum);
        total += profile.oracle_density[i];
    }
    double area = total * cfg.screen.bin_width();
    for (double& v : profile.oracle_density) v /= area;
    profile.metadata["oracle"] = "idealized two-slit intensity";
}

}  // namespace

std::string profile_csv(const DensityProfile& profile) {
    std::string out = metadata_lines(profile.metadata);
    out += "bin_center,gauge_density,oracle_density\n";
    bool with_oracle = !profile.oracle_density.empty();
    for (std::size_t i = 0; i < profile.bin_centers.size(); ++i) {
        out += fmt12(profile.bin_centers[i]);
        out += ',';
        out += fmt12(profile.gauge_density[i]);
        out += ',';
        if (with_oracle) out += fmt12(profile.oracle_density[i]);
        out += '\n';
    }
    return out;
}

void write_profile(const DensityProfile& profile, const std::string& destination) {
    write_file_atomic(destination, profile_csv(profile));
}

RunManifest run_experiment(ExperimentKind kind, const ConfigDocument& doc,
                           const std::string& out_dir) {
    auto t0 = std::chrono::steady_clock::now();

    if (doc.experiment && *doc.experiment != kind)
        throw config_error(std::string("document names experiment '") +
                           to_string(*doc.experiment) + "' but '" + to_string(kind) +
                           "' was requested");
    ConfigDocument run_doc = doc;
    run_doc.experiment = kind;
    if (kind == ExperimentKind::barrier)
        run_doc.config.potential.kind = PotentialKind::barrier;
    const ExperimentConfig& cfg = run_doc.config;

    char hash_hex[24];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(config_hash(run_doc)));

    std::vector<std::pair<std::string, std::string>> files;  // name, content
    std::vector<std::string> csv_names;

    auto add_profile = [&](const std::string& name, DensityProfile profile) {
        profile.metadata["seed"] = std::to_string(cfg.seeds.master_seed);
        profile.metadata["config_hash"] = hash_hex;
        files.emplace_back(name, profile_csv(profile));
        csv_names.push_back(name);
    };

    std::vector<Estimator> estimators =
        cfg.estimator == Estimator::both
            ? std::vector<Estimator>{Estimator::analytic, Estimator::monte_carlo}
            : std::vector<Estimator>{cfg.estimator};

    switch (kind) {
        case ExperimentKind::double_slit:
            for (Estimator est : estimators)
                add_profile(std::string("double_slit_") + to_string(est) + ".csv",
                            double_slit(cfg, est));
            break;
        case ExperimentKind::aharonov_bohm:
            for (Estimator est : estimators)
                add_profile(std::string("aharonov_bohm_") + to_string(est) + ".csv",
                            aharonov_bohm(cfg, est));
            break;
        case ExperimentKind::sweep:
            for (Estimator est : estimators) {
                ExperimentConfig swept = cfg;
                swept.estimator = est;
                std::vector<DensityProfile> profiles =
                    screen_distance_sweep(swept, cfg.sweep_distances);
                for (std::size_t i = 0; i < profiles.size(); ++i)
                    add_profile("sweep_L" + fmt_compact(cfg.sweep_distances[i]) + "_" +
                                    to_string(est) + ".csv",
                                std::move(profiles[i]));
            }
            break;
        case ExperimentKind::oracle_compare:
            for (Estimator est : estimators) {
                DensityProfile profile = double_slit(cfg, est);
                attach_two_slit_oracle(profile, cfg);
                profile.metadata["experiment"] = "oracle_compare";
                add_profile(std::string("oracle_compare_") + to_string(est) + ".csv",
                            std::move(profile));
            }
            break;
        case ExperimentKind::epr:
            files.emplace_back("epr_cases.csv", epr_cases_csv(run_doc, hash_hex));
            break;
        case ExperimentKind::barrier:
            files.emplace_back("barrier_report.csv",
                               barrier_csv(barrier_scan(cfg), cfg, hash_hex));
            break;
    }

    std::string plot_name = std::string("plot_") + to_string(kind) + ".py";
    if (kind == ExperimentKind::epr)
        files.emplace_back(plot_name, epr_plot_script());
    else if (kind == ExperimentKind::barrier)
        files.emplace_back(plot_name, barrier_plot_script());
    else
        files.emplace_back(plot_name, profile_plot_script(to_string(kind), csv_names));

    RunManifest manifest;
    manifest.experiment = to_string(kind);
    manifest.config_echo = serialize_config(run_doc);
    manifest.master_seed = cfg.seeds.master_seed;
    manifest.version = tool_version;
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& [name, content] : files) manifest.outputs.push_back(name);
    manifest.outputs.push_back("manifest.json");

    nlohmann::json j{
        {"experiment", manifest.experiment},
        {"config", manifest.config_echo},
        {"master_seed", manifest.master_seed},
        {"version", manifest.version},
        {"wall_seconds", manifest.wall_seconds},
        {"outputs", manifest.outputs},
    };
    files.emplace_back("manifest.json", j.dump(2) + "\n");

    namespace fs = std::filesystem;
    fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir))
        throw io_error("cannot create output directory " + dir.string());
    for (const auto& [name, content] : files) write_file_atomic(dir / name, content);
    return manifest;
}

}  // namespace gm
