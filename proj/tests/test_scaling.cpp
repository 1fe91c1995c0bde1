#include "purify/errors.hpp"
#include "purify/scaling.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace purify;

TEST(Fit, RecoversExactModels) {
    const std::vector<double> x{8, 10, 12, 14, 16};
    std::vector<double> lin, inv, pw, prop, lg;
    for (double v : x) {
        lin.push_back(1.5 - 0.25 * v);
        inv.push_back(2.0 + 3.0 / v);
        pw.push_back(0.7 * std::pow(v, -1.3));
        prop.push_back(4.2 * v);
        lg.push_back(0.24 * std::log(v) + 0.52);
    }
    auto a = fit(FitModel::Linear, x, lin);
    EXPECT_NEAR(a.coefficients[0], 1.5, 1e-12);
    EXPECT_NEAR(a.coefficients[1], -0.25, 1e-12);
    auto b = fit(FitModel::LinearIn1OverL, x, inv);
    EXPECT_NEAR(b.coefficients[0], 2.0, 1e-12);
    EXPECT_NEAR(b.coefficients[1], 3.0, 1e-11);
    auto c = fit(FitModel::PowerLaw, x, pw);
    EXPECT_NEAR(std::exp(c.coefficients[0]), 0.7, 1e-12);
    EXPECT_NEAR(c.coefficients[1], -1.3, 1e-12);
    EXPECT_NEAR(c.predict(9.0), 0.7 * std::pow(9.0, -1.3), 1e-12);
    auto d = fit(FitModel::Proportional, x, prop);
    EXPECT_NEAR(d.coefficients[0], 4.2, 1e-12);
    auto e = fit(FitModel::LogLaw, x, lg);
    EXPECT_NEAR(e.coefficients[0], 0.24, 1e-12);
    EXPECT_NEAR(e.coefficients[1], 0.52, 1e-12);
    EXPECT_LT(e.residual_norm, 1e-12);
}

TEST(Fit, StandardErrorOfALine) {
    // y = x + (+1, -1, +1, -1): slope error from the textbook formula.
    const std::vector<double> x{0, 1, 2, 3}, y{1, 0, 3, 2};
    const auto f = fit(FitModel::Linear, x, y);
    const double sxx = 5.0;
    double rss = 0.0;
    for (double r : f.residuals)
        rss += r * r;
    EXPECT_NEAR(f.std_errors[1], std::sqrt(rss / 2.0 / sxx), 1e-12);
}

TEST(Fit, Refusals) {
    EXPECT_THROW(fit(FitModel::Linear, {1, 2}, {1, 2}), FitError);
    EXPECT_THROW(fit(FitModel::PowerLaw, {1, 2, 3}, {1, -2, 3}), FitError);
    EXPECT_THROW(fit(FitModel::LogLaw, {0, 2, 3}, {1, 2, 3}), FitError);
    EXPECT_THROW(fit(FitModel::Linear, {2, 2, 2}, {1, 2, 3}), FitError);
    EXPECT_THROW(fit(FitModel::Linear, {1, 2, 3}, {1, 2}), FitError);
}
