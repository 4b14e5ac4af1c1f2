#pragma once

// Experiment runner behind the petallab command line.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "petallab/acceptance.hpp"
#include "petallab/bounds.hpp"
#include "petallab/confmap.hpp"
#include "petallab/hmeasure.hpp"
#include "petallab/models.hpp"
#include "petallab/semigroup.hpp"
#include "petallab/speeds.hpp"

namespace petallab::lab {

enum class Experiment { speeds, asymptote, forward, hmeasure, bounds, verify };

enum ExitCode : int { kPass = 0, kNumericFailure = 1, kUsage = 2 };

/// Invalid configuration; maps to exit status 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline Experiment experiment_from(const std::string& s) {
    static const std::map<std::string, Experiment> names{
        {"speeds", Experiment::speeds},     {"asymptote", Experiment::asymptote}, {"forward", Experiment::forward},
        {"hmeasure", Experiment::hmeasure}, {"bounds", Experiment::bounds},       {"verify", Experiment::verify}};
    const auto it = names.find(s);
    if (it == names.end()) throw UsageError("unknown experiment '" + s + "'");
    return it->second;
}

struct ExperimentConfig {
    Experiment kind = Experiment::speeds;
    std::string model = "strip-slit";
    std::size_t petal = 0;
    std::optional<double> base_re;
    std::optional<double> base_im;
    std::optional<int> kmin;  ///< default 0 (speeds) or 4 (asymptote, forward)
    int kmax = 16;
    std::vector<double> grid;  ///< explicit grid; overrides kmin/kmax
    std::string profile = "logrecip";
    std::string out_dir;
    std::uint64_t seed = acceptance::kDefaultSeed;
    std::optional<double> tol;
};

inline std::string default_out_dir() {
    if (const char* env = std::getenv("PETALLAB_OUT"); env && *env) return env;
    return "petallab_out";
}

inline std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> g;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            std::size_t used = 0;
            g.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("bad grid value '" + item + "'");
        }
    }
    if (g.empty()) throw UsageError("empty grid");
    return g;
}

/// key=value lines ('#' comments).  Keys match the long flag names.  Values
/// are applied only for keys not in `explicit_keys` (flags win).
inline void apply_config_file(const std::string& path, ExperimentConfig& cfg,
                              const std::vector<std::string>& explicit_keys) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    auto given = [&](const std::string& k) {
        for (const auto& e : explicit_keys)
            if (e == k) return true;
        return false;
    };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (given(key)) continue;
        try {
            if (key == "model") cfg.model = val;
            else if (key == "petal") cfg.petal = std::stoul(val);
            else if (key == "base-re") cfg.base_re = std::stod(val);
            else if (key == "base-im") cfg.base_im = std::stod(val);
            else if (key == "kmin") cfg.kmin = std::stoi(val);
            else if (key == "kmax") cfg.kmax = std::stoi(val);
            else if (key == "grid") cfg.grid = parse_grid(val);
            else if (key == "profile") cfg.profile = val;
            else if (key == "out") cfg.out_dir = val;
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "tol") cfg.tol = std::stod(val);
            else throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception&) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'");
        }
    }
}

namespace detail {

inline std::string num(double x) { return petallab::detail::fmt17(x); }

struct Resolved {
    KoenigsModel model;
    std::size_t petal;
    Point base;
};

inline Resolved resolve_petal(const ExperimentConfig& cfg) {
    KoenigsModel m = [&] {
        try {
            return find_model(cfg.model);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }();
    if (cfg.petal >= m.petals.size())
        throw UsageError("model " + m.name + " has " + std::to_string(m.petals.size()) + " petal(s); index " +
                         std::to_string(cfg.petal) + " is invalid");
    Point base = m.default_bases[cfg.petal];
    if (cfg.base_re) base.real(*cfg.base_re);
    if (cfg.base_im) base.imag(*cfg.base_im);
    return {std::move(m), cfg.petal, base};
}

inline std::vector<double> backward_grid(const ExperimentConfig& cfg, int default_kmin) {
    if (!cfg.grid.empty()) return cfg.grid;
    const int kmin = cfg.kmin.value_or(default_kmin);
    if (cfg.kmax < kmin) throw UsageError("kmax must be >= kmin");
    return dyadic_grid(kmin, cfg.kmax);
}

inline std::filesystem::path out_file(const ExperimentConfig& cfg, const std::string& name) {
    const std::filesystem::path dir = cfg.out_dir.empty() ? default_out_dir() : cfg.out_dir;
    std::filesystem::create_directories(dir);
    return dir / name;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
}

inline std::string tag(const Resolved& r) { return r.model.name + "_p" + std::to_string(r.petal); }

}  // namespace detail

inline int run_speeds(const ExperimentConfig& cfg, std::ostream& log) {
    const auto r = detail::resolve_petal(cfg);
    const auto grid = detail::backward_grid(cfg, 0);
    const auto series = speed_series(r.model, r.model.petal(r.petal), r.base, grid);
    const auto path = detail::out_file(cfg, "speeds_" + detail::tag(r) + ".csv");
    auto f = detail::open_out(path);
    write_csv(f, series);
    if (!total_speed_monotone(series)) log << "warning: total speed not monotone in |t| on this grid\n";
    log << "wrote " << path.string() << " (" << series.samples.size() << " rows)\n";
    return kPass;
}

/// Slope of v against t compared with lambda/2 (hyperbolic petal) or 0
/// (parabolic petal).  Pass iff |slope - target| <= tol * max(|target|, 0.01).
inline int run_asymptote(const ExperimentConfig& cfg, std::ostream& log) {
    const ExperimentConfig& c = cfg;
    const auto r = detail::resolve_petal(c);
    const Petal& P = r.model.petal(r.petal);
    const auto grid = detail::backward_grid(c, 4);
    const auto series = speed_series(r.model, P, r.base, grid);
    const auto fit = slope_estimate(series, SlopeMode::linear_in_t);
    const auto fit_o = slope_estimate(series, SlopeMode::linear_in_t, SpeedColumn::orthogonal);
    const double target = P.lambda ? *P.lambda / 2 : 0.0;
    const double tol = c.tol.value_or(0.1);
    const double allowed = tol * std::max(std::abs(target), 0.01);
    const bool pass = std::abs(fit.slope - target) <= allowed && std::abs(fit_o.slope - target) <= allowed;

    auto csv = detail::open_out(detail::out_file(c, "asymptote_" + detail::tag(r) + ".csv"));
    write_csv(csv, series);
    const auto summary_path = detail::out_file(c, "asymptote_" + detail::tag(r) + ".txt");
    auto s = detail::open_out(summary_path);
    s << "model=" << r.model.name << "\npetal=" << P.id << "\nslope=" << detail::num(fit.slope)
      << "\nr2=" << detail::num(fit.r2) << "\nslope_orthogonal=" << detail::num(fit_o.slope)
      << "\nr2_orthogonal=" << detail::num(fit_o.r2) << "\ntarget=" << detail::num(target)
      << "\ntolerance=" << detail::num(allowed) << "\nresult=" << (pass ? "pass" : "fail") << "\n";
    log << r.model.name << "/" << P.id << ": slope " << fit.slope << " (orthogonal " << fit_o.slope << "), target "
        << target << " -> " << (pass ? "pass" : "fail") << "\nwrote " << summary_path.string() << "\n";
    return pass ? kPass : kNumericFailure;
}

/// Forward speed from h(0) on t = 2^k, slope compared with mu/2.
inline int run_forward(const ExperimentConfig& cfg, std::ostream& log) {
    KoenigsModel m = [&] {
        try {
            return find_model(cfg.model);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }();
    if (m.is_elliptic()) throw UsageError("forward speed needs a non-elliptic model");
    Point base = koenigs(m, 0.0);
    if (cfg.base_re) base.real(*cfg.base_re);
    if (cfg.base_im) base.imag(*cfg.base_im);
    std::vector<double> grid = cfg.grid;
    if (grid.empty()) {
        const int kmin = cfg.kmin.value_or(4);
        if (cfg.kmax < kmin) throw UsageError("kmax must be >= kmin");
        grid = dyadic_grid(kmin, cfg.kmax, +1.0);
    }
    std::vector<double> v;
    const auto path = detail::out_file(cfg, "forward_" + m.name + ".csv");
    auto f = detail::open_out(path);
    f << "t,v\n";
    for (const double t : grid) {
        v.push_back(forward_speed(m, base, t));
        f << detail::num(t) << ',' << detail::num(v.back()) << '\n';
    }
    const double target = m.mu.real() / 2;
    log << "wrote " << path.string() << "\n";
    if (grid.size() < 6) return kPass;
    const std::size_t h = grid.size() / 2;
    const auto fit = numerics::least_squares(std::span(grid).subspan(h), std::span(v).subspan(h));
    const double allowed = cfg.tol.value_or(0.1) * std::max(std::abs(target), 0.01);
    const bool pass = std::abs(fit.slope - target) <= allowed;
    log << m.name << ": forward slope " << fit.slope << ", target " << target << " -> " << (pass ? "pass" : "fail")
        << "\n";
    return pass ? kPass : kNumericFailure;
}

/// Harmonic measure of the quarter arc starting at sigma along the backward
/// orbit t = -1, -2, ... while disk coordinates exist.  Every such point is
/// written out; the angle estimate only uses those still resolved from sigma.
inline int run_hmeasure(const ExperimentConfig& cfg, std::ostream& log) {
    const auto r = detail::resolve_petal(cfg);
    const Petal& P = r.model.petal(r.petal);
    Point a;
    try {
        a = P.sigma_disk();
    } catch (const DomainError& e) {
        throw UsageError(std::string("hmeasure: ") + e.what());
    }
    const Arc arc = Arc::starting_at(a, kPi / 2);
    std::vector<double> ts = cfg.grid;
    if (ts.empty())
        for (int k = 1; k <= 200; ++k) ts.push_back(-k);
    std::vector<Point> pts;
    const auto path = detail::out_file(cfg, "hmeasure_" + detail::tag(r) + ".dat");
    auto f = detail::open_out(path);
    f << "# t omega\n";
    for (const double t : ts) {
        const auto p = flow(r.model, r.base, t);
        if (!p.disk_z) continue;
        pts.push_back(*p.disk_z);
        f << detail::num(t) << ' ' << detail::num(harmonic_measure(*p.disk_z, arc)) << '\n';
    }
    const auto rep = approach_angle(pts, a, arc);
    log << r.model.name << "/" << P.id << ": angle/pi = " << rep.theta / kPi
        << (rep.inconclusive ? " (inconclusive)" : rep.tangential ? " (tangential)" : " (non-tangential)") << "\nwrote "
        << path.string() << "\n";
    return rep.inconclusive ? kNumericFailure : kPass;
}

inline int run_bounds(const ExperimentConfig& cfg, std::ostream& log) {
    BoundaryProfile p = [&] {
        try {
            return profile_by_name(cfg.profile);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }();
    std::vector<double> grid = cfg.grid;
    if (grid.empty())
        for (int k = 2; k <= 6; ++k) grid.push_back(-std::pow(10.0, k));
    const auto up = bound_ratio_series(p, grid, BoundKind::upper);
    const auto lo = bound_ratio_series(p, grid, BoundKind::lower);
    const std::string stem = p.name == "custom" ? std::filesystem::path(cfg.profile).stem().string() : p.name;
    const auto path = detail::out_file(cfg, "bounds_" + stem + ".dat");
    auto f = detail::open_out(path);
    f << "# t upper/t^2 lower/t^2\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        f << detail::num(grid[i]) << ' ' << detail::num(up.points[i].ratio) << ' ' << detail::num(lo.points[i].ratio)
          << '\n';
        log << "t=" << grid[i] << "  upper/t^2=" << up.points[i].ratio << "  lower/t^2=" << lo.points[i].ratio << "\n";
    }
    log << "upper trend " << to_string(up.trend) << ", lower trend " << to_string(lo.trend) << "\nwrote "
        << path.string() << "\n";
    return kPass;
}

inline int run_verify(const ExperimentConfig& cfg, std::ostream& log) {
    const auto results = acceptance::run_all(cfg.seed);
    acceptance::print(log, results);
    return acceptance::all_passed(results) ? kPass : kNumericFailure;
}

/// Runs one experiment.  Usage problems give 2, numeric or verification
/// failures give 1.
inline int run(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err) {
    try {
        switch (cfg.kind) {
            case Experiment::speeds: return run_speeds(cfg, log);
            case Experiment::asymptote: return run_asymptote(cfg, log);
            case Experiment::forward: return run_forward(cfg, log);
            case Experiment::hmeasure: return run_hmeasure(cfg, log);
            case Experiment::bounds: return run_bounds(cfg, log);
            case Experiment::verify: return run_verify(cfg, log);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const PetalRequiredError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumericFailure;
    }
    return kUsage;
}

}  // namespace petallab::lab
