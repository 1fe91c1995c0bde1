#include "purify/free_fermion.hpp"
#include "purify/errors.hpp"
#include "purify/evolution.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace purify {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr cplx kI{0.0, 1.0};
constexpr double kSingularTol = 1e-14;

// Values 2k on the grid, |k| < L/4 (or <= L/4 with the edge).
std::vector<double> grid_ks(int L, KGrid grid, bool closed) {
    std::vector<double> ks;
    const int parity = grid == KGrid::Integer ? 0 : 1;
    for (int twice = -L; twice <= L; ++twice) {
        if (((twice % 2) + 2) % 2 != parity)
            continue;
        const double k = 0.5 * twice;
        const double a = std::abs(k), q = 0.25 * L;
        if (a < q || (closed && a == q))
            ks.push_back(k);
    }
    return ks;
}

bool parity_ok(int M, KGrid grid) { return grid_for_root_count(M) == grid; }

} // namespace

KGrid grid_for_root_count(int M) { return M % 2 != 0 ? KGrid::Integer : KGrid::HalfInteger; }

double gaussian_beta(double T) {
    if (!(T > 1.0))
        throw DomainError("beta is real only for T > 1 on the Gaussian line");
    return -0.5 * std::log((T + 1.0) / (T - 1.0));
}

std::vector<FreeFermionRoot> ff_roots(int L, double beta, KGrid grid, bool include_edge) {
    if (L < 4 || L % 2 != 0)
        throw DomainError("L must be even and >= 4");
    const double sb = std::sinh(beta);
    std::vector<FreeFermionRoot> out;
    for (double k : grid_ks(L, grid, include_edge)) {
        if (std::abs(k) == 0.25 * L) {
            // tan -> +-inf: e^{2 lambda} -> infinity or 0.
            out.push_back({k, +1, cplx(k > 0 ? kInf : -kInf, 0.0), RootKind::Edge});
            continue;
        }
        const double t = std::tan(2.0 * kPi * k / L);
        const double disc = 1.0 - t * t * sb * sb;
        const cplx sq = std::sqrt(cplx(disc, 0.0));
        for (int s : {+1, -1}) {
            const cplx e = -kI * t * sb + static_cast<double>(s) * sq;
            const cplx lam = 0.5 * std::log(e);
            out.push_back({k, s, lam, disc > 0.0 ? RootKind::TypeI : RootKind::TypeII});
        }
    }
    return out;
}

cplx ff_phase_lhs(cplx lambda, cplx alpha) {
    const cplx q = kI * (kPi / 4.0);
    const cplx a = 0.5 * alpha;
    return std::sinh(lambda + a + q) * std::sinh(lambda - a + q) / (std::sinh(lambda + a - q) * std::sinh(lambda - a - q));
}

cplx ff_eigenvalue(const std::vector<FreeFermionRoot> &selection, double beta) {
    const double cb = std::cosh(beta);
    cplx prod = 1.0;
    for (const auto &r : selection) {
        if (r.kind == RootKind::Edge)
            continue;
        const cplx c2 = std::cosh(2.0 * r.lambda);
        const cplx den = c2 - cb;
        if (std::abs(den) < kSingularTol)
            throw NumericError("singular Gaussian factor at k=" + std::to_string(r.k));
        prod *= (c2 + cb) / den;
    }
    return prod;
}

double ff_log_modulus(const std::vector<FreeFermionRoot> &selection, double beta) {
    const double cb = std::cosh(beta);
    double s = 0.0;
    for (const auto &r : selection) {
        if (r.kind == RootKind::Edge)
            continue;
        const cplx c2 = std::cosh(2.0 * r.lambda);
        const cplx den = c2 - cb;
        if (std::abs(den) < kSingularTol)
            throw NumericError("singular Gaussian factor at k=" + std::to_string(r.k));
        s += std::log(std::abs(c2 + cb)) - std::log(std::abs(den));
    }
    return s;
}

CensusResult ff_max_modulus_census(int L, double T) {
    if (L < 4 || L % 2 != 0)
        throw DomainError("L must be even and >= 4");
    if (!(T > 0.0))
        throw DomainError("T must be > 0 on the Gaussian line");
    if (T <= 1.0)
        return {1.0, static_cast<long long>(std::ldexp(1.0, L))};

    const double beta = gaussian_beta(T);
    constexpr double tol = 1e-8;

    struct ClassBest {
        double log_mod;
        long long count;
    };
    std::vector<ClassBest> classes;
    for (KGrid grid : {KGrid::Integer, KGrid::HalfInteger}) {
        const auto roots = ff_roots(L, beta, grid, true);
        double base = 0.0;
        int n_plus = 0, n_neutral = 0;
        std::vector<double> gains; // log|factor| of TypeI roots
        for (const auto &r : roots) {
            if (r.kind != RootKind::TypeI) {
                ++n_neutral;
                continue;
            }
            const double g = ff_log_modulus({r}, beta);
            gains.push_back(g);
            if (g > 0.0) {
                base += g;
                ++n_plus;
            }
        }
        if (n_neutral >= 1) {
            classes.push_back({base, 1LL << (n_neutral - 1)});
            continue;
        }
        if (parity_ok(n_plus, grid)) {
            classes.push_back({base, 1});
            continue;
        }
        // One flip: drop a gaining root or add a losing one; the cheapest wins.
        double best_cost = kInf;
        for (double g : gains)
            best_cost = std::min(best_cost, std::abs(g));
        long long count = 0;
        for (double g : gains)
            if (std::abs(std::abs(g) - best_cost) <= tol)
                ++count;
        classes.push_back({base - best_cost, count});
    }

    CensusResult out;
    double top = -kInf;
    for (const auto &c : classes)
        top = std::max(top, c.log_mod);
    for (const auto &c : classes)
        if (std::abs(c.log_mod - top) <= tol)
            out.degeneracy += c.count;
    out.max_modulus = std::exp(top);
    return out;
}

std::vector<FreeFermionRoot> ff_ground_selection(int L, double beta, KGrid grid) {
    std::vector<FreeFermionRoot> sel;
    for (const auto &r : ff_roots(L, beta, grid, false)) {
        if (r.kind == RootKind::TypeI && r.sign == +1)
            sel.push_back(r);
        else if (r.kind == RootKind::TypeII && r.lambda.real() * r.lambda.imag() > 0.0)
            sel.push_back(r);
    }
    return sel;
}

double depsilon_log_lambda(const std::vector<cplx> &roots, double beta, int L) {
    cplx sum = 0.0;
    for (cplx a : roots)
        for (cplx b : roots)
            sum += (std::tanh(2.0 * a) - std::tanh(2.0 * b)) * std::tanh(a - b);
    return -2.0 / (L * std::tanh(beta)) * sum.imag();
}

double depsilon_log_lambda(const std::vector<FreeFermionRoot> &selection, double beta, int L) {
    std::vector<cplx> roots;
    for (const auto &r : selection)
        if (r.kind != RootKind::Edge)
            roots.push_back(r.lambda);
    return depsilon_log_lambda(roots, beta, L);
}

double f_pm(double mu, int sign, int L, double beta, FpmMode mode, KGrid grid) {
    if (sign != 1 && sign != -1)
        throw DomainError("sign must be +1 or -1");
    const double s = sign;
    const double tb = std::tanh(beta);
    if (mu == 0.0)
        return -s * std::copysign(kInf, tb);

    const double s2 = std::sinh(2.0 * mu), c2 = std::cosh(2.0 * mu), t2 = std::tanh(2.0 * mu);
    if (mode == FpmMode::FiniteSum) {
        cplx sum = 0.0;
        for (const auto &r : ff_roots(L, beta, grid, false)) {
            if (r.kind != RootKind::TypeI || r.sign != +1)
                continue;
            const cplx l2 = 2.0 * r.lambda;
            const cplx num = -kI * s2 * std::tanh(l2) - s * std::cosh(l2) / t2;
            const cplx den = c2 - s * kI * std::sinh(l2);
            sum += num / den;
        }
        return (4.0 / (L * tb) * sum).real();
    }

    // x = sin(theta) removes the square-root endpoints.
    const double sb = std::sinh(beta);
    auto integrand = [&](double th) {
        const double x = std::sin(th), c = std::cos(th);
        return (s2 * x - s * c * c / t2) / ((c2 + s * x) * (1.0 + x * x / (sb * sb)));
    };
    double err = 0.0;
    const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -kHalfPi, kHalfPi, 15,
                                                                                    1e-9, &err);
    return -2.0 / (kPi * tb * sb) * I;
}

FirstOrderGap ff_first_order_gap(int L, double T) {
    const double beta = gaussian_beta(T);
    constexpr double tol = 1e-8;

    struct Candidate {
        double log_mod;
        double slope;
    };
    std::vector<Candidate> cands;
    for (KGrid grid : {KGrid::Integer, KGrid::HalfInteger}) {
        std::vector<cplx> base;
        double log_mod = 0.0;
        std::vector<cplx> neutral; // edge roots sit at infinity and never shift the slope
        int n_edge = 0;
        for (const auto &r : ff_roots(L, beta, grid, true)) {
            if (r.kind == RootKind::Edge) {
                ++n_edge;
            } else if (r.kind == RootKind::TypeII) {
                neutral.push_back(r.lambda);
            } else if (const double g = ff_log_modulus({r}, beta); g > 0.0) {
                base.push_back(r.lambda);
                log_mod += g;
            }
        }
        const int n = static_cast<int>(neutral.size());
        if (n + n_edge == 0)
            continue; // the class top is non-degenerate at zeroth order; the census handles it
        const double d0 = depsilon_log_lambda(base, beta, L);
        std::vector<double> f(n);
        for (int q = 0; q < n; ++q) {
            auto with = base;
            with.push_back(neutral[q]);
            f[q] = depsilon_log_lambda(with, beta, L) - d0;
        }
        auto slope_of = [&](const std::vector<bool> &in) {
            auto sel = base;
            for (int q = 0; q < n; ++q)
                if (in[q])
                    sel.push_back(neutral[q]);
            return depsilon_log_lambda(sel, beta, L);
        };
        std::vector<bool> in(n);
        int count = static_cast<int>(base.size());
        for (int q = 0; q < n; ++q) {
            in[q] = f[q] > 0.0;
            count += in[q];
        }
        std::vector<int> order(n);
        for (int q = 0; q < n; ++q)
            order[q] = q;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(f[a]) < std::abs(f[b]); });
        // An edge root toggles parity for free, so any subset is admissible.
        if (n_edge > 0 || parity_ok(count, grid)) {
            cands.push_back({log_mod, slope_of(in)});
            if (n_edge > 0) {
                cands.push_back({log_mod, slope_of(in)}); // the edge-toggled partner is degenerate
            } else if (n >= 2) {
                auto second = in;
                second[order[0]] = !second[order[0]];
                second[order[1]] = !second[order[1]];
                cands.push_back({log_mod, slope_of(second)});
            }
        } else if (n >= 1) {
            auto first = in;
            first[order[0]] = !first[order[0]];
            cands.push_back({log_mod, slope_of(first)});
            if (n >= 2) {
                auto second = in;
                second[order[1]] = !second[order[1]];
                cands.push_back({log_mod, slope_of(second)});
            }
        }
    }
    if (cands.empty())
        throw DomainError("no degenerate top manifold at this (L, T)");
    double top = -kInf;
    for (const auto &c : cands)
        top = std::max(top, c.log_mod);
    std::vector<double> slopes;
    for (const auto &c : cands)
        if (std::abs(c.log_mod - top) <= tol)
            slopes.push_back(c.slope);
    std::sort(slopes.begin(), slopes.end(), std::greater<>());
    FirstOrderGap out;
    out.top_slope = slopes.front();
    out.gap_slope = slopes.size() > 1 ? slopes[0] - slopes[1] : 0.0;
    return out;
}

GapScalingResult gap_scaling_epsilon(const std::vector<int> &L_list, const std::vector<double> &epsilon_list,
                                     double T, int threads) {
    for (double e : epsilon_list)
        if (!(e >= 0.0 && e <= 0.05))
            throw DomainError("epsilon must lie in [0, 0.05]");
    GapScalingResult out;
    out.L = L_list;
    out.epsilon = epsilon_list;
    std::vector<double> xs, ys;
    for (int L : L_list)
        for (double e : epsilon_list) {
            CircuitParams p;
            p.L = L;
            p.gamma = kHalfPi - e;
            p.T = T;
            const double gap = full_spectrum(BlockOperator(p, Variant::Plain), threads).gap;
            out.gap.push_back(gap);
            xs.push_back(e / L);
            ys.push_back(gap);
        }
    out.proportional = fit(FitModel::Proportional, xs, ys);
    const std::size_t ne = epsilon_list.size();
    if (ne >= 3)
        for (std::size_t i = 0; i < L_list.size(); ++i) {
            std::vector<double> g(out.gap.begin() + i * ne, out.gap.begin() + (i + 1) * ne);
            out.vs_epsilon.push_back(fit(FitModel::PowerLaw, epsilon_list, g));
        }
    if (L_list.size() >= 3)
        for (std::size_t j = 0; j < ne; ++j) {
            std::vector<double> x, g;
            for (std::size_t i = 0; i < L_list.size(); ++i) {
                x.push_back(L_list[i]);
                g.push_back(out.gap[i * ne + j]);
            }
            out.vs_L.push_back(fit(FitModel::PowerLaw, x, g));
        }
    return out;
}

} // namespace purify
