#include "purify/commands.hpp"
#include "purify/errors.hpp"
#include "purify/parallel.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

using namespace purify;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

int emit(const RunConfig &cfg, const std::vector<ResultTable> &tables, double seconds) {
    Provenance prov;
    prov.config = cfg.echo();
    prov.wall_seconds = seconds;
    prov.version = library_version();
    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file)
            throw DomainError("cannot open output file '" + cfg.out + "'");
    }
    std::ostream &os = cfg.out.empty() ? std::cout : file;
    if (cfg.format == "json")
        write_json(os, tables, prov);
    else
        write_csv(os, tables, prov);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Purification dynamics of a brickwork non-unitary circuit: ED, free fermions, Bethe ansatz"};
    app.set_version_flag("--version", library_version());
    app.set_config("--config", "", "Flat key = value file; command-line flags win");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    int n_seeds = 0;
    app.add_option("--gamma", cfg.gammas, "gamma values (comma separated)")->delimiter(',');
    app.add_option("--T", cfg.Ts, "T values (comma separated)")->delimiter(',');
    app.add_option("--L", cfg.Ls, "system sizes (comma separated)")->delimiter(',');
    app.add_option("--delta", cfg.delta, "staggered z-field of the sandwiched circuit");
    app.add_option("--delta-prime", cfg.delta_prime, "uniform z-field of the tilted circuit");
    app.add_option("--variant", cfg.variant, "plain | sandwiched | tilted | auto");
    app.add_option("--steps", cfg.n_steps, "number of Floquet steps (0: command default)");
    app.add_option("--seed", cfg.seeds, "seeds (comma separated)")->delimiter(',');
    app.add_option("--seeds", n_seeds, "use seeds 1..n instead of --seed");
    app.add_option("--threshold", cfg.threshold, "purity threshold");
    app.add_option("--n-up-offset", cfg.n_up_offset, "entropy sector n_up = L/2 + offset");
    app.add_option("--late-factor", cfg.late_factor, "late time in units of the purification time");
    bool fixed_cut = false;
    app.add_flag("--fixed-cut", fixed_cut, "entropy of sites 1..L/2 only, no average over the block position");
    app.add_option("--M", cfg.M, "root count for bethe solve (L/2 or L/2-1)");
    app.add_option("--L-max", cfg.L_max, "largest size of the Bethe continuation");
    app.add_option("--L-min-fit", cfg.L_min_fit, "smallest size in the 1/L extrapolation");
    app.add_option("--edge", cfg.edge, "lower | upper edge of the broken phase for fit-nu");
    app.add_option("--offsets", cfg.offsets, "distances from the critical time for fit-nu")->delimiter(',');
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--format", cfg.format, "csv | json");
    cfg.threads = default_threads();
    app.add_option("--threads", cfg.threads, "worker threads");

    const std::pair<const char *, const char *> commands[] = {
        {"phase-diagram", "region and phase label per (gamma, T)"},
        {"purity", "purity of the evolved maximally mixed state"},
        {"spectrum", "full ED spectrum, sector by sector"},
        {"gap", "spectral gap, degeneracy and symmetry checks"},
        {"entropy", "late-time half-chain entropy and log-law fit"},
    };
    for (const auto &[name, help] : commands)
        app.add_subcommand(name, help)->fallthrough();
    auto *bethe = app.add_subcommand("bethe", "Bethe-ansatz solver")->require_subcommand(1)->fallthrough();
    bethe->add_subcommand("solve", "ground-family roots at each L")->fallthrough();
    bethe->add_subcommand("tau", "finite-size purification times up to --L-max")->fallthrough();
    bethe->add_subcommand("extrapolate", "1/L extrapolation of tau")->fallthrough();
    bethe->add_subcommand("fit-nu", "critical exponent from tau_inf near the chosen edge")->fallthrough();
    auto *ff = app.add_subcommand("ff", "Free-fermion line gamma = pi/2")->require_subcommand(1)->fallthrough();
    ff->add_subcommand("census", "degeneracy of the largest |Lambda|")->fallthrough();
    ff->add_subcommand("perturb", "f+- and first-order slopes off the free line")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitValidation;
    }

    auto *sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (!sub->get_subcommands().empty())
        cfg.mode = sub->get_subcommands().front()->get_name();
    cfg.average_cuts = !fixed_cut;
    if (n_seeds > 0) {
        cfg.seeds.clear();
        for (int s = 1; s <= n_seeds; ++s)
            cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        const auto tables = run_command(cfg);
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return emit(cfg, tables, sec);
    } catch (const DomainError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ResourceError &e) {
        std::cerr << "error: " << e.what() << " (needs " << e.required_bytes() << " bytes)\n";
        return kExitValidation;
    } catch (const NumericError &e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
}
