#pragma once

#include "purify/block_operator.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace purify {

struct PurityRecord {
    int N;
    double purity;
    double log_norm; // log of the accumulated trace rescaling, log Tr(U^N U^N^dagger)
};

struct PurityTrace {
    std::vector<PurityRecord> steps; // includes N = 0
    std::vector<double> final_sector_weights; // Tr rho_n at the last step, summing to 1

    // First N with purity >= threshold, if any.
    std::optional<int> first_step_reaching(double threshold) const;
};

struct PurityOptions {
    int n_steps = 100;
    // Stop as soon as the purity reaches this value.
    std::optional<double> stop_at;
    int threads = 1;
};

/// Evolves the maximally mixed state rho <- U rho U^dagger sector by sector.
/// After each step rho is divided by its total trace, so the purity is simply
/// sum_n ||rho_n||_F^2 and log_norm accumulates the divided-out traces.
PurityTrace evolve_purity(const BlockOperator &op, const PurityOptions &opt);

struct SpectrumEntry {
    cplx value;
    int n_up;
};

struct SpectrumResult {
    std::vector<SpectrumEntry> eigenvalues; // descending modulus, then phase, then sector
    double gap = 0.0;                       // log |lambda_1 / lambda_2|
    int degeneracy_count = 0;               // eigenvalues within 1e-8 (relative) of the top modulus
};

inline constexpr double kDegeneracyRelTol = 1e-8;

SpectrumResult full_spectrum(const BlockOperator &op, int threads = 1);

// Eigenvalues of a single block, unsorted. Throws NumericError tagged with the sector.
Eigen::VectorXcd block_eigenvalues(const BlockOperator &op, int n_up);

/// max over eigenvalues of the distance from 1/conj(lambda) to the nearest
/// eigenvalue in the same sector, relative to |1/conj(lambda)|.
double spectral_pairing_deviation(const SpectrumResult &s);

struct AntiunitaryReport {
    // ||R conj(U) R^-1 U - 1||_max with R: m -> L - m.
    double inverse_form = 0.0;
    // ||P conj(U) P^-1 U^T - 1||_max with P: m -> L + 1 - m.
    double transpose_form = 0.0;
};

/// Both forms of the antiunitary identity, maximized over sectors.
///
/// The inverse form is the literal statement A U A^-1 = U^-1. It holds for the
/// plain circuit only; the sandwiched circuit (and any circuit whose two layers
/// are not exchanged by a site permutation) satisfies the transpose form, which
/// is what forces the spectrum to be closed under lambda -> 1/conj(lambda).
AntiunitaryReport check_antiunitary(const BlockOperator &op, const SymmetryOps &s);

struct EntropyOptions {
    int n_up = 0;
    std::uint64_t seed = 1;
    int n_steps = 100;
    int record_every = 1;
    int record_from = 0; // no records before this step
    int cut = -1; // sites 1..cut form the left half; default L/2
    // Average over the blocks offset+1..offset+cut, offset = 0..L/2-1. A fixed cut sits
    // on a first-layer bond or a second-layer bond depending on L mod 4.
    bool average_offsets = false;
};

struct EntropyRecord {
    int N;
    double entropy;
};

/// Pure-state trajectory inside one sector from a seeded Haar-random start.
std::vector<EntropyRecord> trajectory_entropy(const BlockOperator &op, const EntropyOptions &opt);

// Haar-random normalized vector in the sector.
Eigen::VectorXcd haar_sector_state(const SectorBasis &basis, std::uint64_t seed);

// Von Neumann entropy (natural log) of sites offset+1..offset+cut (periodic) for a sector vector.
double half_chain_entropy(const SectorBasis &basis, const Eigen::VectorXcd &psi, int cut, int offset = 0);

} // namespace purify
