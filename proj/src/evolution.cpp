#include "purify/evolution.hpp"
#include "purify/errors.hpp"
#include "purify/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>

namespace purify {

std::optional<int> PurityTrace::first_step_reaching(double threshold) const {
    for (const auto &r : steps)
        if (r.purity >= threshold)
            return r.N;
    return std::nullopt;
}

PurityTrace evolve_purity(const BlockOperator &op, const PurityOptions &opt) {
    if (opt.n_steps < 1)
        throw DomainError("n_steps must be >= 1");
    const int L = op.L();
    const int n_sec = L + 1;
    const double total_dim = std::ldexp(1.0, L);

    std::vector<Eigen::MatrixXcd> rho(n_sec);
    for (int n = 0; n < n_sec; ++n) {
        const auto d = static_cast<Eigen::Index>(op.dim(n));
        rho[n] = Eigen::MatrixXcd::Identity(d, d) / total_dim;
    }

    PurityTrace out;
    out.steps.push_back({0, 1.0 / total_dim, 0.0});
    std::vector<double> traces(n_sec);
    double log_norm = 0.0;

    for (int N = 1; N <= opt.n_steps; ++N) {
        parallel_for(n_sec, opt.threads, [&](std::size_t n) {
            auto &r = rho[n];
            op.apply_columns(static_cast<int>(n), r); // U rho
            Eigen::MatrixXcd x = r.adjoint();         // rho U^dagger
            op.apply_columns(static_cast<int>(n), x); // U rho U^dagger
            r = 0.5 * (x + x.adjoint());
            traces[n] = r.trace().real();
        });
        double total = 0.0;
        for (double t : traces)
            total += t;
        if (!(total > 0.0) || !std::isfinite(total))
            throw NumericError("trace of rho left (0, inf) at step " + std::to_string(N));
        log_norm += std::log(total);
        double purity = 0.0;
        for (int n = 0; n < n_sec; ++n) {
            rho[n] /= total;
            purity += rho[n].squaredNorm();
        }
        out.steps.push_back({N, purity, log_norm});
        if (opt.stop_at && purity >= *opt.stop_at)
            break;
    }
    out.final_sector_weights.resize(n_sec);
    for (int n = 0; n < n_sec; ++n)
        out.final_sector_weights[n] = rho[n].trace().real();
    return out;
}

Eigen::VectorXcd block_eigenvalues(const BlockOperator &op, int n_up) {
    Eigen::MatrixXcd U = op.dense_block(n_up);
    if (U.rows() == 1)
        return U.diagonal();
    const auto n = static_cast<lapack_int>(U.rows());
    Eigen::VectorXcd w(n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double *>(U.data()),
                                          n, reinterpret_cast<lapack_complex_double *>(w.data()), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw NumericError("zgeev failed (info=" + std::to_string(info) + ") in sector n_up=" + std::to_string(n_up));
    return w;
}

SpectrumResult full_spectrum(const BlockOperator &op, int threads) {
    const int n_sec = op.L() + 1;
    std::vector<Eigen::VectorXcd> per(n_sec);
    parallel_for(n_sec, threads, [&](std::size_t n) { per[n] = block_eigenvalues(op, static_cast<int>(n)); });

    SpectrumResult out;
    for (int n = 0; n < n_sec; ++n)
        for (Eigen::Index i = 0; i < per[n].size(); ++i)
            out.eigenvalues.push_back({per[n](i), n});

    // Moduli equal to ~1e-9 relative count as ties and are ordered by phase, then sector.
    auto key = [](const SpectrumEntry &e) {
        const double m = std::abs(e.value);
        const long long q = m > 0.0 ? std::llround(std::log(m) * 1e9) : std::numeric_limits<long long>::min();
        return std::make_tuple(-q, std::arg(e.value), e.n_up);
    };
    std::stable_sort(out.eigenvalues.begin(), out.eigenvalues.end(),
                     [&](const SpectrumEntry &a, const SpectrumEntry &b) { return key(a) < key(b); });

    const double top = std::abs(out.eigenvalues.front().value);
    for (const auto &e : out.eigenvalues)
        if (std::abs(std::abs(e.value) - top) <= kDegeneracyRelTol * top)
            ++out.degeneracy_count;
    if (out.eigenvalues.size() > 1) {
        const double second = std::abs(out.eigenvalues[1].value);
        out.gap = std::max(0.0, std::log(top / second));
    }
    return out;
}

double spectral_pairing_deviation(const SpectrumResult &s) {
    int n_max = 0;
    for (const auto &e : s.eigenvalues)
        n_max = std::max(n_max, e.n_up);
    std::vector<std::vector<cplx>> by(n_max + 1);
    for (const auto &e : s.eigenvalues)
        by[e.n_up].push_back(e.value);
    double worst = 0.0;
    for (const auto &vals : by)
        for (cplx v : vals) {
            const cplx target = 1.0 / std::conj(v);
            double best = std::numeric_limits<double>::infinity();
            for (cplx w : vals)
                best = std::min(best, std::abs(w - target));
            worst = std::max(worst, best / std::abs(target));
        }
    return worst;
}

namespace {

Eigen::MatrixXd permutation_in_sector(const SectorBasis &basis, const std::vector<int> &map) {
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        R(basis.index(permute_config(basis.state(i), map)), i) = 1.0;
    return R;
}

} // namespace

AntiunitaryReport check_antiunitary(const BlockOperator &op, const SymmetryOps &s) {
    AntiunitaryReport rep;
    const auto amap = s.antiunitary_map();
    const auto pmap = s.parity_map();
    for (int n = 0; n <= op.L(); ++n) {
        const Eigen::MatrixXcd U = op.dense_block(n);
        const Eigen::MatrixXcd Uc = s.conjugation ? Eigen::MatrixXcd(U.conjugate()) : U;
        const auto I = Eigen::MatrixXcd::Identity(U.rows(), U.cols());
        const Eigen::MatrixXd R = permutation_in_sector(op.basis(n), amap);
        const Eigen::MatrixXd P = permutation_in_sector(op.basis(n), pmap);
        const Eigen::MatrixXcd a = R.cast<cplx>() * Uc * R.transpose().cast<cplx>() * U - I;
        const Eigen::MatrixXcd b = P.cast<cplx>() * Uc * P.transpose().cast<cplx>() * U.transpose() - I;
        rep.inverse_form = std::max(rep.inverse_form, a.cwiseAbs().maxCoeff());
        rep.transpose_form = std::max(rep.transpose_form, b.cwiseAbs().maxCoeff());
    }
    return rep;
}

Eigen::VectorXcd haar_sector_state(const SectorBasis &basis, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(basis.dim()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = g(rng);
        const double im = g(rng);
        v(i) = cplx(re, im);
    }
    return v / v.norm();
}

double half_chain_entropy(const SectorBasis &basis, const Eigen::VectorXcd &psi, int cut, int offset) {
    const int L = basis.L();
    if (cut <= 0 || cut >= L)
        return 0.0;
    offset = ((offset % L) + L) % L;
    const Config full = L >= 32 ? ~Config{0} : (Config{1} << L) - 1;
    const Config mask = (Config{1} << cut) - 1;

    // The Schmidt matrix is block diagonal in the number of up spins on the left.
    // Each block gets compact row/column labels; the smaller Gram matrix is diagonalized.
    const int n = basis.n_up();
    std::vector<std::vector<Eigen::Index>> row_of(n + 1), col_of(n + 1);
    std::vector<Eigen::Index> rows(n + 1, 0), cols(n + 1, 0);
    std::vector<Eigen::Index> r_id(std::size_t{1} << cut, -1), c_id(std::size_t{1} << (L - cut), -1);
    struct Entry {
        int q;
        Eigen::Index r, c;
        cplx v;
    };
    std::vector<Entry> entries;
    entries.reserve(basis.dim());
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        Config c = basis.state(i);
        if (offset != 0)
            c = ((c >> offset) | (c << (L - offset))) & full;
        const Config left = c & mask, right = c >> cut;
        const int q = std::popcount(left);
        if (r_id[left] < 0)
            r_id[left] = rows[q]++;
        if (c_id[right] < 0)
            c_id[right] = cols[q]++;
        entries.push_back({q, r_id[left], c_id[right], psi(static_cast<Eigen::Index>(i))});
    }
    std::vector<Eigen::MatrixXcd> blocks(n + 1);
    for (int q = 0; q <= n; ++q)
        blocks[q] = Eigen::MatrixXcd::Zero(rows[q], cols[q]);
    for (const auto &e : entries)
        blocks[e.q](e.r, e.c) = e.v;

    std::vector<double> p;
    double norm2 = 0.0;
    for (const auto &B : blocks) {
        if (B.size() == 0)
            continue;
        const Eigen::MatrixXcd G = B.rows() <= B.cols() ? Eigen::MatrixXcd(B * B.adjoint()) : Eigen::MatrixXcd(B.adjoint() * B);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
            const double w = std::max(0.0, es.eigenvalues()(k));
            p.push_back(w);
            norm2 += w;
        }
    }
    double S = 0.0;
    for (double w : p) {
        const double x = w / norm2;
        if (x > 1e-300)
            S -= x * std::log(x);
    }
    return S;
}

std::vector<EntropyRecord> trajectory_entropy(const BlockOperator &op, const EntropyOptions &opt) {
    if (opt.n_up < 0 || opt.n_up > op.L())
        throw DomainError("sector n_up out of range");
    if (opt.n_steps < 0 || opt.record_every < 1)
        throw DomainError("n_steps must be >= 0 and record_every >= 1");
    const auto &basis = op.basis(opt.n_up);
    const int cut = opt.cut < 0 ? op.L() / 2 : opt.cut;
    const int n_offsets = opt.average_offsets ? op.L() / 2 : 1;
    auto entropy = [&](const Eigen::VectorXcd &v) {
        double S = 0.0;
        for (int o = 0; o < n_offsets; ++o)
            S += half_chain_entropy(basis, v, cut, o);
        return S / n_offsets;
    };
    Eigen::VectorXcd psi = haar_sector_state(basis, opt.seed);

    std::vector<EntropyRecord> out;
    if (opt.record_from <= 0)
        out.push_back({0, entropy(psi)});
    for (int N = 1; N <= opt.n_steps; ++N) {
        op.apply(opt.n_up, psi);
        const double nrm = psi.norm();
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw NumericError("state norm left (0, inf) at step " + std::to_string(N));
        psi /= nrm;
        if (N >= opt.record_from && (N % opt.record_every == 0 || N == opt.n_steps))
            out.push_back({N, entropy(psi)});
    }
    return out;
}

} // namespace purify
