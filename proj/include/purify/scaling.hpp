#pragma once

#include <string>
#include <vector>

namespace purify {

enum class FitModel {
    Linear,         // y = c0 + c1 x
    LinearIn1OverL, // y = c0 + c1 / x        (x is the system size)
    PowerLaw,       // log y = c0 + c1 log x  (c1 is the exponent)
    Proportional,   // y = c0 x
    LogLaw,         // y = c0 log x + c1
};

std::string to_string(FitModel m);

struct ScalingFit {
    FitModel model = FitModel::Linear;
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> x, y;      // the input table
    std::vector<double> residuals; // in the space the fit was done in (log y for PowerLaw)
    double residual_norm = 0.0;

    double predict(double xv) const;
};

/// Ordinary least squares for the chosen model. Throws FitError with fewer than
/// three points, on non-positive data where a logarithm is taken, or when the
/// design matrix is rank deficient. Standard errors use the residual variance
/// with n - p degrees of freedom.
ScalingFit fit(FitModel model, const std::vector<double> &x, const std::vector<double> &y);

} // namespace purify
