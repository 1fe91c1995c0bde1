#include "purify/bethe.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace purify {

namespace {
constexpr cplx kI{0.0, 1.0};
constexpr double kPoleTol = 1e-12;

void check_collisions(const std::vector<cplx> &x, double gamma) {
    // r has poles where tanh(l) = +-i tan(gamma), i.e. l = +-i gamma mod i pi.
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const cplx d = x[i] - x[j];
            for (double sgn : {1.0, -1.0}) {
                cplx off = d - sgn * kI * gamma;
                const double wrapped = off.imag() - kPi * std::round(off.imag() / kPi);
                if (std::abs(cplx(off.real(), wrapped)) < kPoleTol) {
                    std::ostringstream os;
                    os << "roots " << i << " and " << j << " collide on a pole of r: " << x[i] << ", " << x[j];
                    throw NumericError(os.str());
                }
            }
        }
}
} // namespace

std::vector<double> packed_quantum_numbers(int M) {
    std::vector<double> I(M);
    for (int i = 0; i < M; ++i)
        I[i] = i - 0.5 * (M - 1);
    return I;
}

cplx bethe_s(cplx lambda, double gamma, cplx alpha) {
    const double u = std::tan(0.5 * gamma);
    const cplx a = 0.5 * alpha;
    return -(std::atan(u / std::tanh(lambda + a)) + std::atan(u / std::tanh(lambda - a))) / (2.0 * kPi);
}

cplx bethe_r(cplx lambda, double gamma) { return std::atan(std::tanh(lambda) / std::tan(gamma)) / kPi; }

cplx bethe_ds(cplx lambda, double gamma, cplx alpha) {
    const double u = std::tan(0.5 * gamma);
    cplx out = 0.0;
    for (cplx z : {lambda + 0.5 * alpha, lambda - 0.5 * alpha}) {
        const cplx sh = std::sinh(z), ch = std::cosh(z);
        out += u / (sh * sh + u * u * ch * ch);
    }
    return out / (2.0 * kPi);
}

cplx bethe_dr(cplx lambda, double gamma) {
    const double t = std::tan(gamma);
    const cplx sh = std::sinh(lambda), ch = std::cosh(lambda);
    return t / (t * t * ch * ch + sh * sh) / kPi;
}

Eigen::VectorXcd log_bethe_residual(const BetheState &state, double gamma, cplx alpha) {
    const auto &x = state.roots;
    const int M = state.M();
    if (static_cast<int>(state.quantum_numbers.size()) != M)
        throw DomainError("quantum numbers and roots differ in count");
    check_collisions(x, gamma);
    const double L = state.L;
    // r is odd, so each pair is evaluated once.
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(M);
    for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j) {
            const cplx v = bethe_r(x[i] - x[j], gamma);
            sum(i) += v;
            sum(j) -= v;
        }
    Eigen::VectorXcd F(M);
    for (int i = 0; i < M; ++i)
        F(i) = bethe_s(x[i], gamma, alpha) - state.quantum_numbers[i] / L - sum(i) / L;
    return F;
}

Eigen::MatrixXcd log_bethe_jacobian(const BetheState &state, double gamma, cplx alpha) {
    const auto &x = state.roots;
    const int M = state.M();
    const double L = state.L;
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j) {
            const cplx d = bethe_dr(x[i] - x[j], gamma) / L; // r' is even
            J(i, j) = d;
            J(j, i) = d;
        }
    for (int i = 0; i < M; ++i)
        J(i, i) = bethe_ds(x[i], gamma, alpha) - (J.row(i).sum() - J(i, i));
    return J;
}

void eigenvalue_from_roots(BetheState &state, double gamma, cplx alpha) {
    const cplx a = 0.5 * alpha, g = 0.5 * kI * gamma;
    double log_mod = 0.0, phase = 0.0;
    for (cplx l : state.roots) {
        const cplx n1 = std::sinh(l + a + g), n2 = std::sinh(l - a - g);
        const cplx d1 = std::sinh(l + a - g), d2 = std::sinh(l - a + g);
        if (std::abs(d1 * d2) < 1e-14)
            throw NumericError("vanishing denominator in the eigenvalue product");
        const cplx f = (n1 * n2) / (d1 * d2);
        log_mod += std::log(std::abs(f));
        phase += std::arg(f);
    }
    state.log_modulus = log_mod;
    state.lambda_eig = std::polar(std::exp(log_mod), phase);
}

BetheState newton_solve(const BetheState &seed, double gamma, cplx alpha, const NewtonOptions &opt, NewtonLog *log) {
    BetheState st = seed;
    NewtonLog local;
    NewtonLog &lg = log ? *log : local;
    lg.residuals.clear();
    lg.branch_rejections = 0;
    const double L = st.L;
    const int M = st.M();

    if (M == 0) {
        st.residual = 0.0;
        st.converged = true;
        st.iterations = 0;
        eigenvalue_from_roots(st, gamma, alpha);
        return st;
    }

    Eigen::VectorXcd F = log_bethe_residual(st, gamma, alpha);
    double r = F.cwiseAbs().maxCoeff();
    if (!std::isfinite(r))
        throw NewtonError("seed residual is not finite", r, {});
    lg.residuals.push_back(r);

    int it = 0;
    for (; it < opt.max_iter && r >= opt.tol; ++it) {
        const Eigen::MatrixXcd J = log_bethe_jacobian(st, gamma, alpha);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
        const Eigen::VectorXcd dx = lu.solve(F);
        if (!dx.allFinite())
            throw NewtonError("singular Jacobian", r, lg.residuals);

        double t = 1.0;
        bool accepted = false;
        BetheState trial = st;
        Eigen::VectorXcd Fn;
        double rn = r;
        for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
            for (int i = 0; i < M; ++i)
                trial.roots[i] = st.roots[i] - t * dx(i);
            try {
                Fn = log_bethe_residual(trial, gamma, alpha);
            } catch (const NumericError &) {
                continue;
            }
            rn = Fn.cwiseAbs().maxCoeff();
            if (!std::isfinite(rn))
                continue;
            // The linear model predicts (1 - t) F; a near-integer excess times L is a branch hop.
            bool hop = false;
            for (int i = 0; i < M && !hop; ++i) {
                const double jump = std::abs((Fn(i) - (1.0 - t) * F(i)).real()) * L;
                const double n = std::round(jump);
                hop = n >= 1.0 && std::abs(jump - n) < 0.1;
            }
            if (hop) {
                ++lg.branch_rejections;
                continue;
            }
            if (rn < r) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (r < opt.accept_tol)
                break; // rounding floor reached
            std::ostringstream os;
            os << "Newton stalled at iteration " << it << " with residual " << r;
            throw NewtonError(os.str(), r, lg.residuals);
        }
        st = trial;
        F = Fn;
        r = rn;
        lg.residuals.push_back(r);
    }

    st.iterations = it;
    st.residual = r;
    st.converged = r < opt.accept_tol;
    if (!st.converged) {
        std::ostringstream os;
        os << "Newton did not converge in " << opt.max_iter << " iterations, residual " << r;
        throw NewtonError(os.str(), r, lg.residuals);
    }
    // LU reciprocal condition estimate in the 1-norm.
    const double rcond = Eigen::PartialPivLU<Eigen::MatrixXcd>(log_bethe_jacobian(st, gamma, alpha)).rcond();
    st.ill_conditioned = !(rcond * opt.cond_warn > 1.0);
    eigenvalue_from_roots(st, gamma, alpha);
    return st;
}

} // namespace purify
