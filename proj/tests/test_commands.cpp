#include "purify/commands.hpp"
#include "purify/errors.hpp"

#include <gtest/gtest.h>

using namespace purify;

namespace {
CircuitParams params(double g, double T, double d = 0.0, double dp = 0.0) {
    CircuitParams p;
    p.gamma = g;
    p.T = T;
    p.delta = d;
    p.delta_prime = dp;
    return p;
}

RunConfig config(const std::string &cmd, std::vector<double> g, std::vector<double> T, std::vector<int> L) {
    RunConfig c;
    c.command = cmd;
    c.gammas = std::move(g);
    c.Ts = std::move(T);
    c.Ls = std::move(L);
    return c;
}

std::vector<std::string> names(const ResultTable &t) {
    std::vector<std::string> out;
    for (const auto &c : t.columns())
        out.push_back(c.name);
    return out;
}
} // namespace

TEST(PhaseLabel, DecisionTable) {
    EXPECT_EQ(phase_label(params(0.5, 1.0)), "mixed");
    EXPECT_EQ(phase_label(params(0.5, 1.78992)), "weakly-purifying");
    EXPECT_EQ(phase_label(params(kHalfPi, 1.5)), "mixed");
    EXPECT_EQ(phase_label(params(0.0, 1.5)), "mixed");
    EXPECT_EQ(phase_label(params(0.5, 1.78992, 0.2)), "strongly-purifying");
    EXPECT_EQ(phase_label(params(0.5, 1.0, 0.0, 0.2)), "strongly-purifying");
}

TEST(RunConfig, ValidatesWholeGridFirst) {
    auto c = config("gap", {0.5, 1.0}, {1.0}, {6, 7});
    EXPECT_THROW(run_command(c), DomainError);
    c = config("gap", {0.5, 2.0}, {1.0}, {6});
    EXPECT_THROW(run_command(c), DomainError);
    c = config("gap", {0.5}, {1.0}, {6});
    c.format = "xml";
    EXPECT_THROW(run_command(c), DomainError);
    c = config("nope", {0.5}, {1.0}, {6});
    EXPECT_THROW(run_command(c), DomainError);
    c = config("bethe", {0.5}, {1.5}, {8});
    c.mode = "fly";
    EXPECT_THROW(run_command(c), DomainError);
    c = config("purity", {0.5}, {1.0}, {6});
    c.delta = 0.1;
    c.delta_prime = 0.1;
    EXPECT_THROW(run_command(c), DomainError);
}

TEST(Schema, ColumnsPerCommand) {
    const auto pd = run_command(config("phase-diagram", {0.5}, {1.0, 1.78992}, {8}));
    EXPECT_EQ(names(pd[0]), (std::vector<std::string>{"gamma", "T", "T_reduced", "region", "phase", "t_c_minus", "t_c_plus"}));
    EXPECT_EQ(pd[0].rows().size(), 2u);

    auto c = config("purity", {0.5}, {1.0}, {6});
    c.n_steps = 5;
    const auto pu = run_command(c);
    EXPECT_EQ(names(pu[0]), (std::vector<std::string>{"gamma", "T", "L", "variant", "N", "purity", "log_norm"}));
    EXPECT_EQ(names(pu[1]), (std::vector<std::string>{"gamma", "T", "L", "variant", "threshold", "steps_to_threshold",
                                                      "final_purity", "all_up_weight"}));

    const auto sp = run_command(config("spectrum", {0.5}, {1.0}, {6}));
    EXPECT_EQ(names(sp[0]), (std::vector<std::string>{"gamma", "T", "L", "index", "re", "im", "modulus", "n_up"}));
    EXPECT_EQ(sp[0].rows().size(), 64u);
    EXPECT_EQ(sp[1].column_index("pairing_deviation"), 11u);
}

TEST(Determinism, IdenticalConfigIdenticalRows) {
    auto c = config("purity", {0.5, 0.9}, {1.78992}, {6, 8});
    c.n_steps = 12;
    c.threads = 3;
    const auto a = run_command(c);
    c.threads = 1;
    const auto b = run_command(c);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_EQ(a[i].content_hash(), b[i].content_hash());

    auto e = config("entropy", {1.0}, {1.5}, {6, 8, 10});
    e.seeds = {1, 2};
    e.n_steps = 8;
    e.threads = 2;
    EXPECT_EQ(run_command(e)[0].content_hash(), run_command(e)[0].content_hash());
}

TEST(Gap, SymmetricAndGaussian) {
    const auto sym = run_command(config("gap", {0.5}, {1.0}, {8}))[0];
    EXPECT_LT(sym.number(0, "max_unimodular_deviation"), 1e-8);
    EXPECT_EQ(sym.number(0, "census_degeneracy"), -1.0);
    const auto g = run_command(config("gap", {kHalfPi}, {3.0}, {8}))[0];
    EXPECT_EQ(g.number(0, "degeneracy"), g.number(0, "census_degeneracy"));
    EXPECT_GT(g.number(0, "degeneracy"), 1.0);
}

TEST(Entropy, SectorOffset) {
    auto c = config("entropy", {1.0}, {1.5}, {6, 8, 10});
    c.n_steps = 6;
    c.n_up_offset = 4; // n_up = 7 > L for L = 6
    EXPECT_THROW(run_command(c), DomainError);
    c.n_up_offset = -3; // L = 6 starts in the empty sector
    const auto t = run_command(c);
    EXPECT_EQ(t[1].number(0, "n_up"), 0.0);
    EXPECT_NEAR(t[1].number(0, "entropy_mean"), 0.0, 1e-12);
    c.Ls = {6, 8};
    EXPECT_THROW(run_command(c), FitError);
}

TEST(Entropy, FitsALogLaw) {
    auto c = config("entropy", {1.0}, {1.5}, {6, 8, 10});
    c.seeds = {1, 2, 3};
    const auto t = run_command(c);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t[0].rows().size(), 9u);
    EXPECT_EQ(t[1].rows().size(), 3u);
    EXPECT_GT(t[1].number(0, "entropy_mean"), 0.0);
    EXPECT_EQ(names(t[2]), (std::vector<std::string>{"gamma", "T", "a", "a_err", "b", "b_err", "monotone"}));
}

TEST(LateTime, ScalesWithPurificationTime) {
    CircuitParams p;
    p.gamma = 1.0;
    p.T = 1.5;
    p.L = 8;
    const int n8 = late_time_steps(p, 4.0);
    EXPECT_GE(n8, 4);
    p.L = 16;
    const int n16 = late_time_steps(p, 4.0);
    p.L = 12;
    const int n12 = late_time_steps(p, 4.0);
    EXPECT_NEAR(n16, n12 * 16.0 / 12.0, 1.0);
    p.T = 1.0; // symmetric: never purifies
    p.L = 6;
    EXPECT_EQ(late_time_steps(p, 4.0), 600);
}

TEST(Bethe, SolveDumpsReflectionPairs) {
    auto c = config("bethe", {0.52}, {1.5}, {48});
    c.mode = "solve";
    const auto t = run_command(c);
    const auto &roots = t[0];
    ASSERT_EQ(roots.rows().size(), 24u);
    for (std::size_t i = 0; i < 24; ++i) {
        const double re = roots.number(i, "re"), im = roots.number(i, "im");
        const double re2 = roots.number(23 - i, "re"), im2 = roots.number(23 - i, "im");
        EXPECT_NEAR(re, -re2, 1e-10);
        EXPECT_NEAR(im, -im2, 1e-10);
    }
    EXPECT_LT(t[1].number(0, "residual"), 1e-10);
}

TEST(Ff, CensusAndPerturbTables) {
    auto c = config("ff", {kHalfPi}, {1.5, 3.0}, {8, 12});
    c.mode = "census";
    const auto t = run_command(c)[0];
    EXPECT_EQ(t.rows().size(), 4u);
    const auto ed = run_command(config("gap", {kHalfPi}, {1.5}, {8}))[0];
    EXPECT_EQ(t.number(0, "degeneracy"), ed.number(0, "degeneracy"));
    c.mode = "perturb";
    const auto p = run_command(c);
    EXPECT_NEAR(p[1].number(0, "gap_slope_times_L"), 13.5, 0.1);
}
