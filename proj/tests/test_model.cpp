#include "oracles.hpp"
#include "purify/errors.hpp"
#include "purify/model.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace purify;

namespace {
CircuitParams params(double g, double T, int L = 8) {
    CircuitParams p;
    p.L = L;
    p.gamma = g;
    p.T = T;
    return p;
}
double maxabs(const Eigen::MatrixXcd &m) { return m.cwiseAbs().maxCoeff(); }
} // namespace

TEST(DeriveParams, AlphaInSymmetricPhase) {
    const auto d = derive_params(params(0.5, 1.0));
    const double ratio = std::cos(0.5 - std::cos(0.5)) / std::cos(0.5 + std::cos(0.5));
    EXPECT_NEAR(d.alpha.real(), -0.5 * std::log(ratio), 1e-14);
    EXPECT_NEAR(d.alpha.real(), -0.788571184667018121, 1e-14); // 30-digit mpmath
    EXPECT_LT(std::abs(d.alpha.imag()), kRealAlphaTol);
    EXPECT_EQ(d.region, Region::Symmetric);
}

TEST(DeriveParams, CriticalTimes) {
    const auto d = derive_params(params(0.5, 1.0));
    EXPECT_NEAR(d.t_c_minus, 1.22017, 1e-5);
    EXPECT_NEAR(d.t_c_plus, 2.35966, 1e-5);
    EXPECT_NEAR(d.period, kPi / std::cos(0.5), 1e-14);
}

TEST(DeriveParams, GaussianLineBeta) {
    const auto d = derive_params(params(kHalfPi, 1.5));
    EXPECT_NEAR(d.beta.real(), -0.5 * std::log(2.5 / 0.5), 1e-14);
    EXPECT_NEAR(d.beta.real(), -0.80472, 1e-5);
    EXPECT_LT(std::abs(d.beta.imag()), kRealAlphaTol);
    EXPECT_EQ(d.region, Region::Broken);
    EXPECT_EQ(d.t_c_minus, 1.0);
    EXPECT_TRUE(std::isinf(d.t_c_plus));

    const auto s = derive_params(params(kHalfPi, 0.5));
    EXPECT_LT(std::abs(s.alpha.imag()), kRealAlphaTol);
    EXPECT_EQ(s.region, Region::Symmetric);
}

TEST(DeriveParams, UnitaryLine) {
    for (double T : {0.3, 1.0, 2.5}) {
        const auto d = derive_params(params(0.0, T));
        EXPECT_EQ(d.alpha, cplx(0.0));
        EXPECT_EQ(d.region, Region::Symmetric);
    }
}

TEST(DeriveParams, ImaginaryPartTracksRegion) {
    const double g = 0.7;
    const auto ref = derive_params(params(g, 0.1));
    for (double T = 0.05; T < ref.period; T += 0.01) {
        const auto d = derive_params(params(g, T));
        if (d.region == Region::Broken)
            EXPECT_NEAR(d.alpha.imag(), kHalfPi, 1e-12) << T;
        else if (d.region == Region::Symmetric)
            EXPECT_LT(std::abs(d.alpha.imag()), kRealAlphaTol) << T;
    }
}

TEST(DeriveParams, RegionFlipsAtCriticalTimes) {
    const double g = 0.5;
    const auto ref = derive_params(params(g, 1.0));
    Region prev = Region::Symmetric;
    std::vector<double> flips;
    for (int i = 1; i * 1e-4 < ref.period; ++i) {
        const double T = i * 1e-4;
        const Region r = derive_params(params(g, T)).region;
        if (r != prev)
            flips.push_back(T);
        prev = r;
    }
    ASSERT_EQ(flips.size(), 2u);
    EXPECT_NEAR(flips[0], ref.t_c_minus, 1e-4);
    EXPECT_NEAR(flips[1], ref.t_c_plus, 1e-4);
    EXPECT_EQ(derive_params(params(g, ref.t_c_minus)).region, Region::Critical);
}

TEST(DeriveParams, ReducesModuloPeriod) {
    const double g = 0.5;
    const double period = kPi / std::cos(g);
    const auto a = derive_params(params(g, 1.5));
    const auto b = derive_params(params(g, 1.5 + period));
    EXPECT_NEAR(std::abs(a.alpha - b.alpha), 0.0, 1e-12);
    EXPECT_EQ(a.region, b.region);
}

TEST(Validate, RejectsBadInput) {
    EXPECT_THROW(params(0.5, 1.0, 7).validate(), DomainError);
    EXPECT_THROW(params(0.5, 1.0, 2).validate(), DomainError);
    EXPECT_THROW(params(-0.1, 1.0).validate(), DomainError);
    EXPECT_THROW(params(1.7, 1.0).validate(), DomainError);
    EXPECT_THROW(params(0.5, -1.0).validate(), DomainError);
    EXPECT_THROW(params(kHalfPi, 0.0).validate(), DomainError);
    auto p = params(0.5, 1.0);
    p.delta = -0.1;
    EXPECT_THROW(p.validate(), DomainError);
    p = params(kHalfPi, 1.0);
    p.delta = 0.3;
    EXPECT_NO_THROW(p.validate());
}

TEST(Generator, MatchesPauliConstruction) {
    for (double g : {0.0, 0.5, 1.2, kHalfPi})
        EXPECT_LT(maxabs(local_generator(g) - oracle::generator(g)), 1e-15);
}

TEST(Gate, MatchesTaylorSeries) {
    for (auto [g, T] : {std::pair{0.5, 1.0}, {0.5, 1.78992}, {1.0, 1.5}, {0.2, 3.0}, {kHalfPi, 1.5}, {kHalfPi, 0.4}})
        EXPECT_LT(maxabs(two_site_gate(g, T) - oracle::gate(g, T)), 1e-12) << g << " " << T;
}

TEST(Gate, UnitaryAtZeroGamma) {
    const GateMatrix G = two_site_gate(0.0, 0.83);
    EXPECT_LT(maxabs(G.adjoint() * G - GateMatrix::Identity()), 1e-12);
}

TEST(Gate, Periodicity) {
    for (double g : {0.3, 0.5, 1.1}) {
        const double period = kPi / std::cos(g);
        EXPECT_LT(maxabs(two_site_gate(g, 0.9) - two_site_gate(g, 0.9 + period)), 1e-12);
        EXPECT_LT(maxabs(two_site_gate(g, period) - GateMatrix::Identity()), 1e-12);
    }
}

TEST(Gate, ConservesMagnetizationAndFixesAlignedPairs) {
    const GateMatrix G = two_site_gate(0.8, 1.3);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const bool same_block = (i == j) || (i == 1 && j == 2) || (i == 2 && j == 1);
            if (!same_block)
                EXPECT_EQ(G(i, j), cplx(0.0));
        }
    EXPECT_NEAR(std::abs(G(0, 0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(G(3, 3) - 1.0), 0.0, 1e-15);
}

TEST(Gate, ShiftedSpectrum) {
    const double g = 0.6;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(shifted_generator(g));
    std::vector<double> re;
    for (int i = 0; i < 4; ++i) {
        re.push_back(es.eigenvalues()(i).real());
        EXPECT_NEAR(es.eigenvalues()(i).imag(), 0.0, 1e-12);
    }
    std::sort(re.begin(), re.end());
    EXPECT_NEAR(re[0], 0.0, 1e-12);
    EXPECT_NEAR(re[2], 0.0, 1e-12);
    EXPECT_NEAR(re[3], 2.0 * std::cos(g), 1e-12);
}

TEST(Perturbations, StaggeredAndUniform) {
    auto p = params(0.5, 1.0, 6);
    for (const auto &f : perturbation_u3(p))
        EXPECT_EQ(f, Eigen::Vector2d(1.0, 1.0));
    p.delta = 0.2;
    const auto u3 = perturbation_u3(p);
    double log_det = 0.0;
    for (int m = 1; m <= p.L; ++m) {
        const double s = m % 2 == 0 ? 1.0 : -1.0;
        EXPECT_NEAR(u3[m - 1](0), std::exp(0.2 * s), 1e-15);
        EXPECT_NEAR(u3[m - 1](1), std::exp(-0.2 * s), 1e-15);
        log_det += std::log(u3[m - 1](0));
    }
    EXPECT_NEAR(log_det, 0.0, 1e-14);

    p.delta_prime = 0.2;
    for (const auto &f : perturbation_u3prime(p)) {
        EXPECT_NEAR(f(0), std::exp(0.2), 1e-15);
        EXPECT_NEAR(f(1), std::exp(-0.2), 1e-15);
        EXPECT_GT(f(0), f(1)); // all-up is the top state of the layer
    }
}

TEST(Symmetry, AntiunitarySquaresToIdentity) {
    for (int L : {4, 6, 8, 10}) {
        SymmetryOps s{L, true, 0.0};
        const auto a = s.antiunitary_map();
        for (int m = 0; m < L; ++m)
            EXPECT_EQ(a[a[m]], m);
        std::mt19937 rng(L);
        for (int t = 0; t < 20; ++t) {
            const unsigned c = rng() & ((1u << L) - 1);
            EXPECT_EQ(permute_config(permute_config(c, a), a), c);
        }
    }
}

TEST(Symmetry, ExchangesTheLayers) {
    const int L = 8;
    SymmetryOps s{L, true, 0.0};
    // bond (2m, 2m+1) of U_1 lands on a bond of U_2
    for (int m = 1; m <= L / 2; ++m) {
        const int l = 2 * m, r = 2 * m % L + 1;
        const int a = s.antiunitary_site(l), b = s.antiunitary_site(r);
        const int lo = std::min(a, b), hi = std::max(a, b);
        EXPECT_EQ(hi - lo, 1);
        EXPECT_EQ(lo % 2, 1);
    }
}
