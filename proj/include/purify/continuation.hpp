#pragma once

#include "purify/bethe.hpp"
#include "purify/scaling.hpp"

#include <functional>
#include <string>
#include <vector>

namespace purify {

// alpha at (gamma, T) via derive_params.
cplx alpha_at(double gamma, double T);

struct HomotopyOptions {
    int initial_steps = 40; // the path is first cut into this many pieces
    double growth = 1.5;
    double min_fraction = 1e-9; // smallest allowed step as a fraction of the path length
    NewtonOptions newton;
};

/// Packed ground-family state with M roots at (gamma, T, L).
///
/// Starts from the closed-form Gaussian roots (all TypeI+ roots plus the TypeII
/// roots with Re and Im of equal sign) at gamma = pi/2 and a reference time T0
/// inside the broken phase, deforms gamma to its target at fixed T0, then T to
/// its target at fixed gamma. Steps shrink on failure and grow on success.
BetheState solve_ground_family(double gamma, double T, int L, int M, const HomotopyOptions &opt = {});

/// Follows a converged state along gamma or T; used by solve_ground_family.
BetheState follow_parameter(BetheState state, double gamma0, double T0, double gamma1, double T1,
                            const HomotopyOptions &opt = {});

/// Seed for size L+2 with one more root: the roots, viewed as functions of
/// I/M, are linearly interpolated onto the new packed grid (extrapolated at
/// the two ends). Returns an unconverged seed.
BetheState continuation_step(const BetheState &prev);

struct TauPoint {
    int L;
    double log_mod0; // M = L/2
    double log_mod1; // M = L/2 - 1
    double t_L;
    double tau_L;
    bool swapped; // the M = L/2 - 1 state has the larger modulus
};

TauPoint make_tau_point(const BetheState &s0, const BetheState &s1);

/// Both ground-family states at size L (continued up from L = 8) and the
/// finite-size purification time. Throws DomainError outside the broken phase.
TauPoint ground_pair_tau(double gamma, double T, int L, const HomotopyOptions &opt = {});

struct ContinuationPath {
    double gamma = 0.0;
    double T = 0.0;
    std::vector<BetheState> family0; // M = L/2
    std::vector<BetheState> family1; // M = L/2 - 1
    std::vector<TauPoint> points;
};

/// Runs both families from L0 to L_max in steps of 2. keep_states = false drops
/// the root lists (only the tau points are kept).
ContinuationPath continuation_path(double gamma, double T, int L_max, int L0 = 8, bool keep_states = false,
                                   const HomotopyOptions &opt = {});

struct TauExtrapolation {
    ScalingFit fit; // L * log|L0/L1| against L, model c0 + c1 / L
    double tau_inf = 0.0;
    double tau_inf_err = 0.0;
    bool monotone = true; // L * log ratio monotone over the fit window
    std::string diagnostics;
};

inline constexpr int kDefaultFitMinL = 144;

/// Extrapolates log|Lambda0/Lambda1| = a/L + b/L^2: tau_inf = 1/a. Uses sizes
/// L >= L_min_fit; needs at least 4 of them. A sign change in the data is a
/// FitError; non-monotone data is only flagged.
TauExtrapolation extrapolate_tau(const std::vector<int> &L, const std::vector<double> &log_ratio,
                                 int L_min_fit = kDefaultFitMinL);
TauExtrapolation extrapolate_tau(const ContinuationPath &path, int L_min_fit = kDefaultFitMinL);

enum class Edge { Lower, Upper };

std::string to_string(Edge e);
Edge parse_edge(const std::string &s);

inline const std::vector<double> kDefaultNuOffsets{0.0125, 0.00625, 0.003125, 0.0015625};

struct NuOptions {
    int L0 = 8;
    int L_max = 288;
    int L_min_fit = kDefaultFitMinL;
    int threads = 1;
    HomotopyOptions homotopy;
};

struct NuResult {
    double gamma = 0.0;
    Edge edge = Edge::Lower;
    std::vector<double> offsets, T, tau_inf, tau_inf_err;
    std::vector<bool> monotone;
    ScalingFit fit; // power law tau_inf ~ offset^c1
    double nu = 0.0;
    double nu_err = 0.0;
};

/// T = T_c^- + offset (lower) or T_c^+ - offset (upper); each point is
/// extrapolated in L, then nu = -slope of log tau_inf against log offset.
NuResult fit_nu(double gamma, Edge edge, const std::vector<double> &offsets = kDefaultNuOffsets,
                const NuOptions &opt = {});

// nu(gamma) = 1 / (2 (1 - gamma / pi)).
double nu_reference(double gamma);

struct XxzReport {
    int cluster_size = 0;
    double residual = 0.0;           // max_i |lhs_i / rhs_i - 1| of the twisted XXZ equations
    cplx lambda_limit = 1.0;         // [prod sinh(mu - i g/2) / sinh(mu + i g/2)]^2
    double modulus_deviation = 0.0;  // | |lambda_limit| - 1 |
};

/// Near T_c^- the roots with Re l on the side of Re alpha form a cluster that,
/// shifted to mu = l - conj(alpha)/2, approaches a twisted XXZ solution on L/2
/// sites. Purely diagnostic.
XxzReport xxz_limit_check(double gamma, const BetheState &state, cplx alpha);

// Same equations for a given set of XXZ rapidities.
XxzReport xxz_report_for(double gamma, int L, const std::vector<cplx> &mu);

} // namespace purify
