#include "purify/block_operator.hpp"
#include "purify/errors.hpp"

#include <cmath>

namespace purify {

std::string to_string(Variant v) {
    switch (v) {
    case Variant::Plain: return "plain";
    case Variant::Sandwiched: return "sandwiched";
    case Variant::Tilted: return "tilted";
    }
    return "?";
}

Variant parse_variant(const std::string &name) {
    if (name == "plain")
        return Variant::Plain;
    if (name == "sandwiched")
        return Variant::Sandwiched;
    if (name == "tilted")
        return Variant::Tilted;
    throw DomainError("unknown variant '" + name + "' (plain, sandwiched, tilted)");
}

std::vector<std::pair<int, int>> layer_one_bonds(int L) {
    std::vector<std::pair<int, int>> b;
    for (int m = 1; m <= L / 2; ++m)
        b.emplace_back(2 * m, 2 * m == L ? 1 : 2 * m + 1);
    return b;
}

std::vector<std::pair<int, int>> layer_two_bonds(int L) {
    std::vector<std::pair<int, int>> b;
    for (int m = 1; m <= L / 2; ++m)
        b.emplace_back(2 * m - 1, 2 * m);
    return b;
}

namespace {

SectorFactor bond_factor(const SectorBasis &basis, int a, int b) {
    SectorFactor f;
    f.kind = SectorFactor::Kind::Bond;
    const Config swap_mask = (Config{1} << (a - 1)) | (Config{1} << (b - 1));
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const Config c = basis.state(i);
        const bool ua = site_up(c, a), ub = site_up(c, b);
        if (ua && ub)
            f.aligned_up.push_back(static_cast<std::uint32_t>(i));
        else if (!ua && !ub)
            f.aligned_down.push_back(static_cast<std::uint32_t>(i));
        else if (ua) {
            const auto j = basis.index(c ^ swap_mask);
            f.pairs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        }
    }
    return f;
}

SectorFactor diagonal_factor(const SectorBasis &basis, const std::vector<Eigen::Vector2d> &site) {
    SectorFactor f;
    f.kind = SectorFactor::Kind::Diagonal;
    f.diagonal.resize(static_cast<Eigen::Index>(basis.dim()));
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        double v = 1.0;
        for (int m = 1; m <= basis.L(); ++m)
            v *= site_up(basis.state(i), m) ? site[m - 1](0) : site[m - 1](1);
        f.diagonal(static_cast<Eigen::Index>(i)) = v;
    }
    return f;
}

template <class Vec> void apply_factor(const SectorFactor &f, const GateMatrix &g, Vec &&x) {
    if (f.kind == SectorFactor::Kind::Diagonal) {
        x.array() *= f.diagonal.array();
        return;
    }
    // Aligned pairs pick up the |uu> / |dd> diagonal entries (both 1 for this gate family).
    if (g(0, 0) != cplx(1.0))
        for (auto i : f.aligned_up)
            x(i) *= g(0, 0);
    if (g(3, 3) != cplx(1.0))
        for (auto i : f.aligned_down)
            x(i) *= g(3, 3);
    const cplx g11 = g(1, 1), g12 = g(1, 2), g21 = g(2, 1), g22 = g(2, 2);
    for (const auto &[i, j] : f.pairs) {
        const cplx xi = x(i), xj = x(j);
        x(i) = g11 * xi + g12 * xj;
        x(j) = g21 * xi + g22 * xj;
    }
}

} // namespace

BlockOperator::BlockOperator(const CircuitParams &p, Variant v, const EdLimits &limits)
    : params_(p), variant_(v), limits_(limits) {
    p.validate();
    if (p.L > limits.l_max)
        throw ResourceError("L=" + std::to_string(p.L) + " exceeds the ED limit " + std::to_string(limits.l_max),
                            std::pow(2.0, p.L) * 16.0);
    gate_ = two_site_gate(p);
    bases_ = all_sectors(p.L);

    const auto u3 = perturbation_u3(p);
    const auto u3p = perturbation_u3prime(p);
    const auto one = layer_one_bonds(p.L);
    const auto two = layer_two_bonds(p.L);

    factors_.resize(bases_.size());
    for (std::size_t n = 0; n < bases_.size(); ++n) {
        auto &fs = factors_[n];
        const auto &basis = bases_[n];
        if (v == Variant::Sandwiched)
            fs.push_back(diagonal_factor(basis, u3));
        for (auto [a, b] : one)
            fs.push_back(bond_factor(basis, a, b));
        for (auto [a, b] : two)
            fs.push_back(bond_factor(basis, a, b));
        if (v == Variant::Sandwiched)
            fs.push_back(diagonal_factor(basis, u3));
        if (v == Variant::Tilted)
            fs.push_back(diagonal_factor(basis, u3p));
    }
}

void BlockOperator::apply(int n_up, Eigen::Ref<Eigen::VectorXcd> x) const {
    for (const auto &f : factors_.at(n_up))
        apply_factor(f, gate_, x);
}

void BlockOperator::apply_columns(int n_up, Eigen::MatrixXcd &X) const {
    for (Eigen::Index c = 0; c < X.cols(); ++c)
        for (const auto &f : factors_.at(n_up))
            apply_factor(f, gate_, X.col(c));
}

double BlockOperator::dense_bytes(int n_up) const {
    const double d = static_cast<double>(dim(n_up));
    return d * d * 16.0;
}

Eigen::MatrixXcd BlockOperator::dense_block(int n_up) const {
    const double bytes = dense_bytes(n_up);
    if (bytes > limits_.max_dense_bytes)
        throw ResourceError("sector " + std::to_string(n_up) + " needs " + std::to_string(bytes / 1e9) +
                                " GB as a dense block",
                            bytes);
    const auto d = static_cast<Eigen::Index>(dim(n_up));
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Identity(d, d);
    apply_columns(n_up, X);
    return X;
}

} // namespace purify
