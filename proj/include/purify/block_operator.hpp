#pragma once

#include "purify/model.hpp"
#include "purify/sector.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace purify {

enum class Variant {
    Plain,      // U_F = U_2 U_1
    Sandwiched, // U_3 U_F U_3
    Tilted,     // U_3' U_F
};

std::string to_string(Variant v);
Variant parse_variant(const std::string &name);

struct EdLimits {
    int l_max = 16;
    double max_dense_bytes = 4.0e9;
};

// One factor of the Floquet operator restricted to a sector: either a diagonal
// layer or a single two-site gate. A gate only mixes a configuration with its
// copy where the two bond spins are exchanged, so it is stored as index pairs.
struct SectorFactor {
    enum class Kind { Diagonal, Bond };
    Kind kind = Kind::Diagonal;
    Eigen::VectorXcd diagonal;
    // (index with left site up / right down, index with left down / right up)
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<std::uint32_t> aligned_up, aligned_down;
};

/// The Floquet operator split into magnetization sectors n_up = 0..L.
///
/// Blocks are kept factorized (gate by gate) rather than as dense matrices, so
/// applying a block to a vector costs O(L dim). dense_block() materializes a
/// single block when an eigendecomposition is needed.
class BlockOperator {
  public:
    BlockOperator(const CircuitParams &p, Variant v, const EdLimits &limits = {});

    const CircuitParams &params() const { return params_; }
    Variant variant() const { return variant_; }
    int L() const { return params_.L; }
    const GateMatrix &gate() const { return gate_; }

    const SectorBasis &basis(int n_up) const { return bases_.at(n_up); }
    std::size_t dim(int n_up) const { return bases_.at(n_up).dim(); }

    // x <- U_n x for a vector or every column of a matrix.
    void apply(int n_up, Eigen::Ref<Eigen::VectorXcd> x) const;
    void apply_columns(int n_up, Eigen::MatrixXcd &X) const;

    // Bytes needed to hold block n_up densely.
    double dense_bytes(int n_up) const;
    // Throws ResourceError if the block exceeds EdLimits::max_dense_bytes.
    Eigen::MatrixXcd dense_block(int n_up) const;

  private:
    CircuitParams params_;
    Variant variant_;
    EdLimits limits_;
    GateMatrix gate_;
    std::vector<SectorBasis> bases_;
    std::vector<std::vector<SectorFactor>> factors_;
};

// Bonds of the two layers, each as (left site, right site), 1-based.
std::vector<std::pair<int, int>> layer_one_bonds(int L);
std::vector<std::pair<int, int>> layer_two_bonds(int L);

} // namespace purify
