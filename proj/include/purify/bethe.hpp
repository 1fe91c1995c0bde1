#pragma once

#include "purify/errors.hpp"
#include "purify/model.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace purify {

struct BetheState {
    int L = 0;
    std::vector<double> quantum_numbers; // I_i, paired index-by-index with roots
    std::vector<cplx> roots;
    double residual = 0.0; // max-norm of the logarithmic system
    cplx lambda_eig = 1.0;
    double log_modulus = 0.0; // log |Lambda|, safe against overflow
    bool converged = false;
    int iterations = 0;
    bool ill_conditioned = false;

    int M() const { return static_cast<int>(roots.size()); }
};

// I_i = -(M-1)/2, ..., (M-1)/2.
std::vector<double> packed_quantum_numbers(int M);

// Kernel functions of the logarithmic Bethe equations and their derivatives.
cplx bethe_s(cplx lambda, double gamma, cplx alpha);
cplx bethe_r(cplx lambda, double gamma);
cplx bethe_ds(cplx lambda, double gamma, cplx alpha);
cplx bethe_dr(cplx lambda, double gamma);

/// residual_i = s(l_i) - I_i/L - (1/L) sum_j r(l_i - l_j).
/// Throws NumericError naming the pair if two roots sit on a pole of r.
Eigen::VectorXcd log_bethe_residual(const BetheState &state, double gamma, cplx alpha);

Eigen::MatrixXcd log_bethe_jacobian(const BetheState &state, double gamma, cplx alpha);

/// Eigenvalue as a product over roots, accumulated through logarithms.
/// Sets lambda_eig and log_modulus. Throws NumericError on a vanishing factor.
void eigenvalue_from_roots(BetheState &state, double gamma, cplx alpha);

class NewtonError : public NumericError {
  public:
    NewtonError(const std::string &what, double last_residual, std::vector<double> history)
        : NumericError(what), last_residual_(last_residual), history_(std::move(history)) {}
    double last_residual() const { return last_residual_; }
    const std::vector<double> &history() const { return history_; }

  private:
    double last_residual_;
    std::vector<double> history_;
};

struct NewtonOptions {
    double tol = 1e-12;       // stop when the residual drops below this
    double accept_tol = 1e-10; // a state counts as converged below this
    int max_iter = 50;
    int max_halvings = 8;
    double cond_warn = 1e14;
};

struct NewtonLog {
    std::vector<double> residuals; // one per accepted iterate, starting with the seed
    int branch_rejections = 0;
};

/// Damped complex Newton with the analytic Jacobian. A step is halved when
/// the residual grows or when some component jumps by nearly a whole multiple
/// of 1/L relative to the linear prediction (a hop to another arctan branch).
/// Throws NewtonError if the accept tolerance is not met.
BetheState newton_solve(const BetheState &seed, double gamma, cplx alpha, const NewtonOptions &opt = {},
                        NewtonLog *log = nullptr);

} // namespace purify
