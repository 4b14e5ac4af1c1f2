#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "petallab/lab.hpp"

namespace lab = petallab::lab;

int main(int argc, char** argv) {
    CLI::App app{"petallab: speeds of petals of holomorphic semigroups"};
    app.require_subcommand(1);

    lab::ExperimentConfig cfg;
    std::string config_path;
    std::string grid_text;
    double base_re = 0.0, base_im = 0.0;
    int kmin = 0;

    struct Sub {
        const char* name;
        const char* help;
    };
    const std::vector<Sub> subs{
        {"speeds", "total/orthogonal/tangential speeds along a backward orbit (CSV)"},
        {"asymptote", "tail slope of the speeds against the petal's target"},
        {"forward", "forward speed baseline against mu/2"},
        {"hmeasure", "angle of approach of a backward orbit via harmonic measure"},
        {"bounds", "upper/lower distance bound ratios for a boundary-distance profile"},
        {"verify", "run the full acceptance suite"},
    };
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", config_path, "key=value file; flags on the command line take precedence");
        sub->add_option("--model", cfg.model, "strip-slit | sector-parabolic | koebe-elliptic");
        sub->add_option("--petal", cfg.petal, "petal index within the model");
        sub->add_option("--base-re", base_re, "real part of the base point (Omega coordinates)");
        sub->add_option("--base-im", base_im, "imaginary part of the base point (Omega coordinates)");
        sub->add_option("--kmin", kmin, "smallest k of the grid t = -2^k");
        sub->add_option("--kmax", cfg.kmax, "largest k of the grid t = -2^k");
        sub->add_option("--grid", grid_text, "explicit comma-separated list of t values");
        sub->add_option("--profile", cfg.profile, "logrecip | gaussian | path to a two-column (t, delta) file");
        sub->add_option("--out", cfg.out_dir, "output directory (default $PETALLAB_OUT or ./petallab_out)");
        sub->add_option("--seed", cfg.seed, "seed for randomized sampling");
        sub->add_option("--tol", cfg.tol, "relative tolerance for slope checks (default 0.1)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return lab::kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        cfg.kind = lab::experiment_from(sub->get_name());
        auto given = [sub](const char* flag) { return sub->count(flag) > 0; };
        if (given("--base-re")) cfg.base_re = base_re;
        if (given("--base-im")) cfg.base_im = base_im;
        if (given("--kmin")) cfg.kmin = kmin;
        if (given("--grid")) cfg.grid = lab::parse_grid(grid_text);
        if (!config_path.empty()) {
            std::vector<std::string> explicit_keys;
            for (const char* k : {"model", "petal", "base-re", "base-im", "kmin", "kmax", "grid", "profile", "out",
                                  "seed", "tol"})
                if (given((std::string("--") + k).c_str())) explicit_keys.push_back(k);
            lab::apply_config_file(config_path, cfg, explicit_keys);
        }
    } catch (const lab::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return lab::kUsage;
    }
    return lab::run(cfg, std::cout, std::cerr);
}
