#include "purify/scaling.hpp"
#include "purify/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace purify {

std::string to_string(FitModel m) {
    switch (m) {
    case FitModel::Linear: return "linear";
    case FitModel::LinearIn1OverL: return "linear_in_1_over_L";
    case FitModel::PowerLaw: return "power_law";
    case FitModel::Proportional: return "proportional";
    case FitModel::LogLaw: return "log_law";
    }
    return "?";
}

double ScalingFit::predict(double xv) const {
    const auto &c = coefficients;
    switch (model) {
    case FitModel::Linear: return c[0] + c[1] * xv;
    case FitModel::LinearIn1OverL: return c[0] + c[1] / xv;
    case FitModel::PowerLaw: return std::exp(c[0] + c[1] * std::log(xv));
    case FitModel::Proportional: return c[0] * xv;
    case FitModel::LogLaw: return c[0] * std::log(xv) + c[1];
    }
    return NAN;
}

ScalingFit fit(FitModel model, const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size())
        throw FitError("x and y differ in length");
    const auto n = static_cast<Eigen::Index>(x.size());
    if (n < 3)
        throw FitError("fit needs at least 3 points, got " + std::to_string(n));

    const Eigen::Index p = model == FitModel::Proportional ? 1 : 2;
    Eigen::MatrixXd A(n, p);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = x[i], yi = y[i];
        if (!std::isfinite(xi) || !std::isfinite(yi))
            throw FitError("non-finite data point at index " + std::to_string(i));
        switch (model) {
        case FitModel::Linear: A(i, 0) = 1.0; A(i, 1) = xi; b(i) = yi; break;
        case FitModel::LinearIn1OverL:
            if (xi == 0.0)
                throw FitError("x = 0 in a 1/x fit");
            A(i, 0) = 1.0; A(i, 1) = 1.0 / xi; b(i) = yi;
            break;
        case FitModel::PowerLaw:
            if (xi <= 0.0 || yi <= 0.0)
                throw FitError("power-law fit needs positive data, index " + std::to_string(i));
            A(i, 0) = 1.0; A(i, 1) = std::log(xi); b(i) = std::log(yi);
            break;
        case FitModel::Proportional: A(i, 0) = xi; b(i) = yi; break;
        case FitModel::LogLaw:
            if (xi <= 0.0)
                throw FitError("log-law fit needs x > 0");
            A(i, 0) = std::log(xi); A(i, 1) = 1.0; b(i) = yi;
            break;
        }
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < p)
        throw FitError("degenerate design: all x equal");
    const Eigen::VectorXd c = qr.solve(b);
    const Eigen::VectorXd r = b - A * c;

    ScalingFit f;
    f.model = model;
    f.x = x;
    f.y = y;
    f.coefficients.assign(c.data(), c.data() + p);
    f.residuals.assign(r.data(), r.data() + n);
    f.residual_norm = r.norm();
    const double dof = static_cast<double>(n - p);
    const double sigma2 = r.squaredNorm() / dof;
    const Eigen::MatrixXd cov = sigma2 * (A.transpose() * A).inverse();
    for (Eigen::Index k = 0; k < p; ++k)
        f.std_errors.push_back(std::sqrt(cov(k, k)));
    return f;
}

} // namespace purify
