#include "gaugemech/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <map>
#include <vector>

#include "gaugemech/errors.hpp"

namespace gm {

const char* to_string(ExperimentKind kind) noexcept {
    switch (kind) {
        case ExperimentKind::double_slit: return "double_slit";
        case ExperimentKind::sweep: return "sweep";
        case ExperimentKind::aharonov_bohm: return "aharonov_bohm";
        case ExperimentKind::epr: return "epr";
        case ExperimentKind::barrier: return "barrier";
        case ExperimentKind::oracle_compare: return "oracle_compare";
    }
    return "unknown";
}

const char* to_string(Estimator est) noexcept {
    switch (est) {
        case Estimator::analytic: return "analytic";
        case Estimator::monte_carlo: return "monte_carlo";
        case Estimator::both: return "both";
    }
    return "unknown";
}

std::optional<ExperimentKind> experiment_kind_from(std::string_view name) noexcept {
    for (ExperimentKind k : {ExperimentKind::double_slit, ExperimentKind::sweep,
                             ExperimentKind::aharonov_bohm, ExperimentKind::epr,
                             ExperimentKind::barrier, ExperimentKind::oracle_compare})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r";
    std::size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double real_value(const std::string& key, const std::string& text, int line) {
    errno = 0;
    char* end = nullptr;
    double v = text.empty() ? 0.0 : std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
        !std::isfinite(v))
        throw config_error(key + ": expected a finite number, got '" + text + "'", line);
    return v;
}

long long int_value(const std::string& key, const std::string& text, int line) {
    errno = 0;
    char* end = nullptr;
    long long v = text.empty() ? 0 : std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
        throw config_error(key + ": expected an integer, got '" + text + "'", line);
    return v;
}

std::uint64_t seed_value(const std::string& key, const std::string& text, int line) {
    errno = 0;
    char* end = nullptr;
    bool signed_form = !text.empty() && (text[0] == '-' || text[0] == '+');
    unsigned long long v =
        (text.empty() || signed_form) ? 0 : std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || signed_form || end != text.c_str() + text.size() ||
        errno == ERANGE)
        throw config_error(key + ": expected an unsigned integer, got '" + text + "'",
                           line);
    return v;
}

double positive(double v, const std::string& key, int line) {
    if (!(v > 0.0)) throw config_error(key + " must be positive", line);
    return v;
}

double non_negative(double v, const std::string& key, int line) {
    if (!(v >= 0.0)) throw config_error(key + " must be >= 0", line);
    return v;
}

int bounded_int(const std::string& key, const std::string& text, int line,
                long long lo, long long hi) {
    long long v = int_value(key, text, line);
    if (v < lo || v > hi)
        throw config_error(key + " must lie in [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]",
                           line);
    return static_cast<int>(v);
}

std::vector<double> distance_list(const std::string& key, const std::string& text,
                                  int line) {
    std::vector<double> out;
    std::size_t pos = 0;
    for (;;) {
        std::size_t comma = text.find(',', pos);
        std::size_t end = comma == std::string::npos ? text.size() : comma;
        out.push_back(positive(real_value(key, trim(text.substr(pos, end - pos)), line),
                               key, line));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1]))
            throw config_error(key + " must be strictly ascending", line);
    return out;
}

ExperimentKind experiment_value(const std::string& key, const std::string& text,
                                int line) {
    if (auto k = experiment_kind_from(text)) return *k;
    throw config_error(key + ": expected one of double_slit, sweep, aharonov_bohm, "
                             "epr, barrier, oracle_compare",
                       line);
}

Estimator estimator_value(const std::string& key, const std::string& text, int line) {
    if (text == "analytic") return Estimator::analytic;
    if (text == "monte_carlo") return Estimator::monte_carlo;
    if (text == "both") return Estimator::both;
    throw config_error(key + ": expected analytic, monte_carlo or both", line);
}

IntrusionMode mode_value(const std::string& key, const std::string& text, int line) {
    if (text == "none") return IntrusionMode::none;
    if (text == "fixed_phase") return IntrusionMode::fixed_phase;
    if (text == "random_kick") return IntrusionMode::random_kick;
    throw config_error(key + ": expected none, fixed_phase or random_kick", line);
}

IntrusionStage stage_value(const std::string& key, const std::string& text, int line) {
    if (text == "pre_slit") return IntrusionStage::pre_slit;
    if (text == "post_slit") return IntrusionStage::post_slit;
    throw config_error(key + ": expected pre_slit or post_slit", line);
}

ProjectionMode projection_value(const std::string& key, const std::string& text,
                                int line) {
    if (text == "band_filter") return ProjectionMode::band_filter;
    if (text == "root_find") return ProjectionMode::root_find;
    throw config_error(key + ": expected band_filter or root_find", line);
}

void apply_key(ConfigDocument& doc, const std::string& key, const std::string& value,
               int line) {
    ExperimentConfig& c = doc.config;
    if (key == "experiment") {
        doc.experiment = experiment_value(key, value, line);
    } else if (key == "particle.m") {
        c.particle.mass = positive(real_value(key, value, line), key, line);
    } else if (key == "particle.p") {
        c.particle.momentum = positive(real_value(key, value, line), key, line);
    } else if (key == "geometry.d") {
        c.slit_separation = positive(real_value(key, value, line), key, line);
    } else if (key == "geometry.L") {
        c.screen.distance = positive(real_value(key, value, line), key, line);
    } else if (key == "geometry.divergence") {
        c.divergence = non_negative(real_value(key, value, line), key, line);
    } else if (key == "screen.bins") {
        c.screen.n_bins = bounded_int(key, value, line, 2, 10000000);
    } else if (key == "screen.x_min") {
        c.screen.x_min = real_value(key, value, line);
    } else if (key == "screen.x_max") {
        c.screen.x_max = real_value(key, value, line);
    } else if (key == "sampler.n_paths") {
        long long v = int_value(key, value, line);
        if (v < 1) throw config_error(key + " must be >= 1", line);
        c.sampler.n_paths = v;
    } else if (key == "sampler.n_joints") {
        c.sampler.n_joints = bounded_int(key, value, line, 0, 64);
    } else if (key == "sampler.perturb_scale") {
        c.sampler.perturb_scale = positive(real_value(key, value, line), key, line);
    } else if (key == "sampler.accept_tol") {
        double v = real_value(key, value, line);
        if (!(v > 0.0 && v <= M_PI))
            throw config_error(key + " must lie in (0, pi]", line);
        c.sampler.accept_tol = v;
    } else if (key == "sampler.projection") {
        c.sampler.projection = projection_value(key, value, line);
    } else if (key == "sampler.max_bisection_iters") {
        c.sampler.max_bisection_iters = bounded_int(key, value, line, 1, 1000000);
    } else if (key == "seeds.master_seed") {
        c.seeds.master_seed = seed_value(key, value, line);
    } else if (key == "seeds.streams") {
        c.seeds.stream_count = bounded_int(key, value, line, 1, 65536);
    } else if (key == "density.a") {
        c.density.a = positive(real_value(key, value, line), key, line);
    } else if (key == "density.b") {
        c.density.b = non_negative(real_value(key, value, line), key, line);
    } else if (key == "density.xi_bar") {
        c.density.xi_bar = positive(real_value(key, value, line), key, line);
    } else if (key == "intrusion.mode") {
        c.intrusion.mode = mode_value(key, value, line);
    } else if (key == "intrusion.q") {
        c.intrusion.photon_momentum =
            non_negative(real_value(key, value, line), key, line);
    } else if (key == "intrusion.delta_kappa") {
        c.intrusion.fixed_delta_kappa = real_value(key, value, line);
    } else if (key == "intrusion.stage") {
        c.intrusion.stage = stage_value(key, value, line);
    } else if (key == "flux.F") {
        c.flux = real_value(key, value, line);
    } else if (key == "barrier.V") {
        c.potential.height = non_negative(real_value(key, value, line), key, line);
    } else if (key == "barrier.x_lo") {
        c.potential.x_lo = real_value(key, value, line);
    } else if (key == "barrier.x_hi") {
        c.potential.x_hi = real_value(key, value, line);
    } else if (key == "barrier.margin") {
        c.barrier_margin = positive(real_value(key, value, line), key, line);
    } else if (key == "barrier.t_over_l_min") {
        double v = real_value(key, value, line);
        if (!(v > 1.0)) throw config_error(key + " must exceed 1", line);
        c.t_over_l_min = v;
    } else if (key == "barrier.t_over_l_max") {
        c.t_over_l_max = positive(real_value(key, value, line), key, line);
    } else if (key == "sweep.distances") {
        c.sweep_distances = distance_list(key, value, line);
    } else if (key == "run.estimator") {
        c.estimator = estimator_value(key, value, line);
    } else if (key == "epr.cases") {
        long long v = int_value(key, value, line);
        if (v < 1) throw config_error(key + " must be >= 1", line);
        doc.epr_cases = v;
    } else {
        throw config_error("unknown key '" + key + "'", line);
    }
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void put(std::string& out, const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
}

}  // namespace

ConfigDocument parse_config(const std::string& text) {
    ConfigDocument doc;
    std::map<std::string, int> seen;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::size_t end = nl == std::string::npos ? text.size() : nl;
        std::string raw = text.substr(pos, end - pos);
        ++line_no;

        std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        std::string stmt = trim(raw);
        if (!stmt.empty()) {
            std::size_t eq = stmt.find('=');
            if (eq == std::string::npos)
                throw config_error("expected `key = value`", line_no);
            std::string key = trim(stmt.substr(0, eq));
            std::string value = trim(stmt.substr(eq + 1));
            if (key.empty()) throw config_error("expected `key = value`", line_no);
            if (value.empty()) throw config_error(key + ": missing value", line_no);
            if (!seen.emplace(key, line_no).second)
                throw config_error("duplicate key '" + key + "'", line_no);
            apply_key(doc, key, value, line_no);
        }

        if (nl == std::string::npos) break;
        pos = nl + 1;
    }

    // Cross-field checks, attributed to the latest participating line.
    auto line_of = [&seen](std::initializer_list<const char*> keys) {
        int best = 0;
        for (const char* k : keys) {
            auto it = seen.find(k);
            if (it != seen.end() && it->second > best) best = it->second;
        }
        return best;
    };
    const ExperimentConfig& c = doc.config;
    if (!(c.screen.x_max > c.screen.x_min))
        throw config_error("screen.x_max must exceed screen.x_min",
                           line_of({"screen.x_min", "screen.x_max"}));
    if (!(c.potential.x_hi > c.potential.x_lo))
        throw config_error("barrier.x_hi must exceed barrier.x_lo",
                           line_of({"barrier.x_lo", "barrier.x_hi"}));
    if (!(c.t_over_l_max > c.t_over_l_min))
        throw config_error("barrier.t_over_l_max must exceed barrier.t_over_l_min",
                           line_of({"barrier.t_over_l_min", "barrier.t_over_l_max"}));

    if (doc.experiment == ExperimentKind::barrier)
        doc.config.potential.kind = PotentialKind::barrier;
    return doc;
}

std::string serialize_config(const ConfigDocument& doc) {
    const ExperimentConfig& c = doc.config;
    std::string out;
    if (doc.experiment) put(out, "experiment", to_string(*doc.experiment));
    put(out, "particle.m", num(c.particle.mass));
    put(out, "particle.p", num(c.particle.momentum));
    put(out, "geometry.d", num(c.slit_separation));
    put(out, "geometry.L", num(c.screen.distance));
    put(out, "geometry.divergence", num(c.divergence));
    put(out, "screen.bins", std::to_string(c.screen.n_bins));
    put(out, "screen.x_min", num(c.screen.x_min));
    put(out, "screen.x_max", num(c.screen.x_max));
    put(out, "sampler.n_paths", std::to_string(c.sampler.n_paths));
    put(out, "sampler.n_joints", std::to_string(c.sampler.n_joints));
    put(out, "sampler.perturb_scale", num(c.sampler.perturb_scale));
    put(out, "sampler.accept_tol", num(c.sampler.accept_tol));
    put(out, "sampler.projection",
        c.sampler.projection == ProjectionMode::band_filter ? "band_filter"
                                                            : "root_find");
    put(out, "sampler.max_bisection_iters",
        std::to_string(c.sampler.max_bisection_iters));
    put(out, "seeds.master_seed", std::to_string(c.seeds.master_seed));
    put(out, "seeds.streams", std::to_string(c.seeds.stream_count));
    put(out, "density.a", num(c.density.a));
    put(out, "density.b", num(c.density.b));
    put(out, "density.xi_bar", num(c.density.xi_bar));
    put(out, "intrusion.mode",
        c.intrusion.mode == IntrusionMode::none          ? "none"
        : c.intrusion.mode == IntrusionMode::fixed_phase ? "fixed_phase"
                                                         : "random_kick");
    put(out, "intrusion.q", num(c.intrusion.photon_momentum));
    put(out, "intrusion.delta_kappa", num(c.intrusion.fixed_delta_kappa));
    put(out, "intrusion.stage",
        c.intrusion.stage == IntrusionStage::pre_slit ? "pre_slit" : "post_slit");
    put(out, "flux.F", num(c.flux));
    put(out, "barrier.V", num(c.potential.height));
    put(out, "barrier.x_lo", num(c.potential.x_lo));
    put(out, "barrier.x_hi", num(c.potential.x_hi));
    put(out, "barrier.margin", num(c.barrier_margin));
    put(out, "barrier.t_over_l_min", num(c.t_over_l_min));
    put(out, "barrier.t_over_l_max", num(c.t_over_l_max));
    std::string list;
    for (std::size_t i = 0; i < c.sweep_distances.size(); ++i) {
        if (i) list += ", ";
        list += num(c.sweep_distances[i]);
    }
    put(out, "sweep.distances", list);
    put(out, "run.estimator", to_string(c.estimator));
    put(out, "epr.cases", std::to_string(doc.epr_cases));
    return out;
}

std::uint64_t config_hash(const ConfigDocument& doc) {
    std::string canonical = serialize_config(doc);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace gm
