#pragma once

// Closed-form Bethe analysis on the Gaussian line gamma = pi/2 and first order
// in epsilon = pi/2 - gamma.

#include "purify/model.hpp"
#include "purify/scaling.hpp"

#include <vector>

namespace purify {

enum class RootKind {
    TypeI,  // purely imaginary, changes |Lambda|
    TypeII, // Im = +-pi/4, modulus neutral
    Edge,   // k = +-L/4: lambda = +-infinity, factor exactly 1
};

enum class KGrid {
    Integer,     // M odd
    HalfInteger, // M even
};

KGrid grid_for_root_count(int M);

struct FreeFermionRoot {
    double k;
    int sign; // +1 or -1
    cplx lambda;
    RootKind kind;
};

// beta = -(1/2) log((T+1)/(T-1)) for T > 1 on the Gaussian line.
double gaussian_beta(double T);

/// All roots e^{2 lambda} = -i tan(2 pi k/L) sinh(beta) +- sqrt(1 - tan^2 sinh^2 beta)
/// for k on the chosen grid in (-L/4, L/4). Im lambda lies in (-pi/2, pi/2].
/// With include_edge the two roots at k = +-L/4 are appended when that k is on the grid.
std::vector<FreeFermionRoot> ff_roots(int L, double beta, KGrid grid, bool include_edge = false);

/// Left side of the single-particle equation at gamma = pi/2; equals exp(4 i pi k / L) at a root.
cplx ff_phase_lhs(cplx lambda, cplx alpha);

/// Lambda = prod (cosh 2l + cosh beta) / (cosh 2l - cosh beta). Edge roots contribute 1.
cplx ff_eigenvalue(const std::vector<FreeFermionRoot> &selection, double beta);
double ff_log_modulus(const std::vector<FreeFermionRoot> &selection, double beta);

struct CensusResult {
    double max_modulus = 1.0;
    long long degeneracy = 0;
};

/// Largest |Lambda| and the number of eigenvalues attaining it, summed over
/// both k-grid classes. Each class contributes the TypeI+ product times any
/// parity-consistent subset of its modulus-neutral roots; with no neutral
/// root available the parity is fixed by the cheapest single flip. For T <= 1
/// every eigenvalue is unimodular and the whole spectrum is returned.
CensusResult ff_max_modulus_census(int L, double T);

/// The roots that perturbation theory singles out as the top state of a class:
/// every TypeI+ root plus every TypeII root whose real and imaginary parts share a sign.
std::vector<FreeFermionRoot> ff_ground_selection(int L, double beta, KGrid grid);

/// d/d epsilon of log|Lambda| at gamma = pi/2 - epsilon, to first order. Edge
/// roots sit at infinity and are skipped.
double depsilon_log_lambda(const std::vector<FreeFermionRoot> &selection, double beta, int L);
double depsilon_log_lambda(const std::vector<cplx> &roots, double beta, int L);

enum class FpmMode { FiniteSum, Integral };

/// Contribution of a TypeII root mu +- i pi/4 (sign = +1 / -1) to
/// d/d epsilon log|Lambda|. The finite sum runs over the TypeI+ roots of the
/// given grid; the integral is its L -> infinity limit. At mu = 0 a signed
/// infinity is returned.
double f_pm(double mu, int sign, int L, double beta, FpmMode mode, KGrid grid = KGrid::Integer);

struct FirstOrderGap {
    double top_slope = 0.0; // d log|Lambda| / d epsilon of the split-off top state
    double gap_slope = 0.0; // predicted gap / epsilon
};

/// Degenerate first-order perturbation theory on the top manifold at
/// gamma = pi/2. Within each k-grid class the subset of modulus-neutral roots
/// is chosen by the sign of its single-root slope (parity fixed by the
/// cheapest toggle); the runner-up is the cheapest parity-consistent change.
/// Slopes of the chosen subsets are then evaluated exactly.
FirstOrderGap ff_first_order_gap(int L, double T);

struct GapScalingResult {
    std::vector<int> L;
    std::vector<double> epsilon;
    std::vector<double> gap; // row-major: gap[i * epsilon.size() + j] for L[i], epsilon[j]
    ScalingFit proportional;  // gap = c * (epsilon / L)
    std::vector<ScalingFit> vs_epsilon; // per L: power law in epsilon
    std::vector<ScalingFit> vs_L;       // per epsilon: power law in L (exponent ~ -1)
};

/// ED gaps at gamma = pi/2 - epsilon and power-law fits in both directions.
GapScalingResult gap_scaling_epsilon(const std::vector<int> &L_list, const std::vector<double> &epsilon_list,
                                     double T, int threads = 1);

} // namespace purify
