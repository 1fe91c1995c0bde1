#pragma once

#include "purify/block_operator.hpp"
#include "purify/continuation.hpp"
#include "purify/table.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace purify {

struct RunConfig {
    std::string command;
    std::string mode; // bethe: solve|tau|extrapolate|fit-nu; ff: census|perturb

    std::vector<double> gammas{0.5};
    std::vector<double> Ts{1.0};
    std::vector<int> Ls{8};
    double delta = 0.0;
    double delta_prime = 0.0;
    std::string variant = "auto"; // auto picks sandwiched for delta > 0, tilted for delta' > 0

    int n_steps = 0; // 0: command default
    std::vector<std::uint64_t> seeds{1};
    double threshold = 0.99;
    int n_up_offset = 1; // entropy sector n_up = L/2 + offset
    double late_factor = 4.0;
    bool average_cuts = true; // entropy: average the half-chain block over its position

    int M = -1; // bethe solve; -1 means L/2
    int L_max = 288;
    int L_min_fit = kDefaultFitMinL;
    std::string edge = "lower";
    std::vector<double> offsets = kDefaultNuOffsets;

    std::string out;
    std::string format = "csv";
    int threads = 1;

    // Every grid point goes through model-core validation before anything runs.
    void validate() const;
    std::vector<std::pair<std::string, std::string>> echo() const;
};

Variant resolve_variant(const RunConfig &c);

// gamma = 0, gamma = pi/2 or the symmetric region: mixed; broken: weakly purifying
// without and strongly purifying with an integrability-breaking term. A symmetry
// breaking tilt (delta' > 0) purifies strongly everywhere.
std::string phase_label(const CircuitParams &p);

std::vector<ResultTable> cmd_phase_diagram(const RunConfig &c);
std::vector<ResultTable> cmd_purity(const RunConfig &c);
std::vector<ResultTable> cmd_spectrum(const RunConfig &c);
std::vector<ResultTable> cmd_gap(const RunConfig &c);
std::vector<ResultTable> cmd_entropy(const RunConfig &c);
std::vector<ResultTable> cmd_bethe(const RunConfig &c);
std::vector<ResultTable> cmd_ff(const RunConfig &c);

// Dispatch on c.command.
std::vector<ResultTable> run_command(const RunConfig &c);

/// Number of steps treated as "late" for entropy: late_factor times the
/// 0.99-purity time of the mixed-state run. Sizes above 12 reuse the L = 12
/// time scaled by L / 12. Falls back to 100 L when the run never purifies.
int late_time_steps(const CircuitParams &p, double late_factor, int threads = 1);

} // namespace purify
