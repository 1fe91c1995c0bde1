#include "purify/continuation.hpp"
#include "purify/free_fermion.hpp"
#include "purify/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace purify {

namespace {
constexpr cplx kI{0.0, 1.0};

CircuitParams probe(double gamma, double T) {
    CircuitParams p;
    p.L = 8;
    p.gamma = gamma;
    p.T = T;
    return p;
}

// Quantum numbers read off from a solution of the log equations, rounded to the grid.
std::vector<double> read_quantum_numbers(const std::vector<cplx> &x, int L, double gamma, cplx alpha) {
    const int M = static_cast<int>(x.size());
    const double shift = M % 2 == 0 ? 0.5 : 0.0;
    std::vector<double> I(M);
    for (int i = 0; i < M; ++i) {
        cplx sum = 0.0;
        for (int j = 0; j < M; ++j)
            if (j != i)
                sum += bethe_r(x[i] - x[j], gamma);
        const double raw = (double(L) * bethe_s(x[i], gamma, alpha) - sum).real();
        I[i] = std::round(raw - shift) + shift;
    }
    return I;
}

// Pairs the Gaussian seed with quantum numbers and orders everything by I.
BetheState gaussian_seed(std::vector<cplx> roots, int L, double T0) {
    const double g = kHalfPi;
    const cplx alpha = alpha_at(g, T0);
    const auto I = read_quantum_numbers(roots, L, g, alpha);
    std::vector<std::size_t> order(roots.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return I[a] < I[b]; });
    BetheState st;
    st.L = L;
    for (auto i : order) {
        st.roots.push_back(roots[i]);
        st.quantum_numbers.push_back(I[i]);
    }
    const auto packed = packed_quantum_numbers(static_cast<int>(roots.size()));
    if (st.quantum_numbers != packed)
        throw NumericError("Gaussian seed does not carry packed quantum numbers");
    return newton_solve(st, g, alpha);
}

std::vector<cplx> symmetric_gaussian_roots(int L, int M, double T0) {
    // alpha real: e^{2l} = -tan(2 pi k/L) cosh(alpha) - sqrt(tan^2 cosh^2 alpha + 1) < 0, so every
    // root sits on Im l = pi/2. The other branch (real roots) never gives packed quantum numbers.
    const double a = alpha_at(kHalfPi, T0).real();
    std::vector<cplx> out;
    const double shift = M % 2 == 0 ? 0.5 : 0.0;
    for (int j = -L; j <= L; ++j) {
        const double k = j + shift;
        if (std::abs(k) >= 0.25 * L)
            continue;
        const double t = std::tan(2.0 * kPi * k / L);
        const double e = t * std::cosh(a) + std::sqrt(t * t * std::cosh(a) * std::cosh(a) + 1.0);
        out.emplace_back(0.5 * std::log(e), kHalfPi);
    }
    return out;
}

double lerp(double a, double b, double s) { return a + s * (b - a); }

} // namespace

cplx alpha_at(double gamma, double T) { return derive_params(probe(gamma, T)).alpha; }

BetheState follow_parameter(BetheState state, double gamma0, double T0, double gamma1, double T1,
                            const HomotopyOptions &opt) {
    if (gamma0 == gamma1 && T0 == T1)
        return state;
    double s = 0.0, ds = 1.0 / opt.initial_steps;
    std::vector<cplx> prev; // solution one accepted step back, for a secant predictor
    double prev_ds = 0.0;
    while (s < 1.0) {
        const double s1 = std::min(1.0, s + ds);
        const double g = lerp(gamma0, gamma1, s1), T = lerp(T0, T1, s1);
        BetheState seed = state;
        if (!prev.empty())
            for (std::size_t i = 0; i < seed.roots.size(); ++i)
                seed.roots[i] += (state.roots[i] - prev[i]) * ((s1 - s) / prev_ds);
        try {
            BetheState next = newton_solve(seed, g, alpha_at(g, T), opt.newton);
            prev = state.roots;
            prev_ds = s1 - s;
            state = std::move(next);
            s = s1;
            ds *= opt.growth;
        } catch (const NumericError &) {
            ds *= 0.5;
            if (ds < opt.min_fraction) {
                std::ostringstream os;
                os << "homotopy stalled between (gamma, T) = (" << gamma0 << ", " << T0 << ") and (" << gamma1
                   << ", " << T1 << ") at s = " << s;
                throw NumericError(os.str());
            }
        }
    }
    return state;
}

BetheState solve_ground_family(double gamma, double T, int L, int M, const HomotopyOptions &opt) {
    const auto d = derive_params(probe(gamma, T));
    if (L < 4 || L % 2 != 0 || M < 1 || M > L / 2)
        throw DomainError("solve_ground_family needs even L >= 4 and 1 <= M <= L/2");

    if (d.region == Region::Broken) {
        // Reference time inside the broken interval of every gamma' in [gamma, pi/2].
        double T0 = 1.5;
        if (!(d.t_c_minus < T0 && T0 < d.t_c_plus))
            T0 = 0.5 * (d.t_c_minus + d.t_c_plus);
        // On the line itself the closed form is exact; a T homotopy there can run through root crossings.
        if (std::abs(gamma - kHalfPi) < kGaussianLineTol)
            T0 = d.T_reduced;
        const double beta = gaussian_beta(T0);
        std::vector<cplx> roots;
        for (const auto &r : ff_ground_selection(L, beta, grid_for_root_count(M)))
            roots.push_back(r.lambda);
        if (static_cast<int>(roots.size()) != M)
            throw DomainError("the Gaussian ground selection has " + std::to_string(roots.size()) + " roots, not M=" +
                              std::to_string(M) + " (only M = L/2 and L/2 - 1 are supported)");
        BetheState st = gaussian_seed(roots, L, T0);
        st = follow_parameter(st, kHalfPi, T0, gamma, T0, opt);
        return follow_parameter(st, gamma, T0, gamma, T, opt);
    }
    if (d.region == Region::Symmetric && d.T_reduced < d.t_c_minus) {
        const double T0 = std::min(0.5, d.T_reduced);
        BetheState st = gaussian_seed(symmetric_gaussian_roots(L, M, T0), L, T0);
        st = follow_parameter(st, kHalfPi, T0, gamma, T0, opt);
        return follow_parameter(st, gamma, T0, gamma, d.T_reduced, opt);
    }
    throw DomainError("ground family is only seeded for the broken phase or T below T_c^-");
}

BetheState continuation_step(const BetheState &prev) {
    const int M = prev.M();
    if (M < 2)
        throw DomainError("continuation needs at least two roots");
    const auto Io = packed_quantum_numbers(M);
    const auto In = packed_quantum_numbers(M + 1);
    if (prev.quantum_numbers != Io)
        throw DomainError("continuation_step expects a packed ground-family state");

    auto interp = [&](auto part) {
        std::vector<double> xo(M), yo(M);
        for (int i = 0; i < M; ++i) {
            xo[i] = Io[i] / M;
            yo[i] = part(prev.roots[i]);
        }
        std::vector<double> out(M + 1);
        for (int i = 0; i <= M; ++i) {
            const double xn = In[i] / (M + 1);
            // Segment index; the end segments extend linearly.
            int a = static_cast<int>(std::upper_bound(xo.begin(), xo.end(), xn) - xo.begin()) - 1;
            a = std::clamp(a, 0, M - 2);
            const double w = (xn - xo[a]) / (xo[a + 1] - xo[a]);
            out[i] = yo[a] + w * (yo[a + 1] - yo[a]);
        }
        return out;
    };
    const auto re = interp([](cplx z) { return z.real(); });
    const auto im = interp([](cplx z) { return z.imag(); });

    BetheState seed;
    seed.L = prev.L + 2;
    seed.quantum_numbers = In;
    for (int i = 0; i <= M; ++i)
        seed.roots.emplace_back(re[i], im[i]);
    return seed;
}

TauPoint make_tau_point(const BetheState &s0, const BetheState &s1) {
    TauPoint p;
    p.L = s0.L;
    p.log_mod0 = s0.log_modulus;
    p.log_mod1 = s1.log_modulus;
    const double y = p.log_mod0 - p.log_mod1;
    p.swapped = y < 0.0;
    p.t_L = 1.0 / std::abs(y);
    p.tau_L = p.t_L / p.L;
    return p;
}

ContinuationPath continuation_path(double gamma, double T, int L_max, int L0, bool keep_states,
                                   const HomotopyOptions &opt) {
    const auto d = derive_params(probe(gamma, T));
    if (d.region != Region::Broken)
        throw DomainError("purification times need the broken phase; region is " + to_string(d.region));
    if (L0 < 8 || L0 % 2 != 0 || L_max < L0 || L_max % 2 != 0)
        throw DomainError("need even 8 <= L0 <= L_max");
    const cplx alpha = d.alpha;

    ContinuationPath path;
    path.gamma = gamma;
    path.T = T;
    BetheState a = solve_ground_family(gamma, T, L0, L0 / 2, opt);
    BetheState b = solve_ground_family(gamma, T, L0, L0 / 2 - 1, opt);
    for (int L = L0;; L += 2) {
        path.points.push_back(make_tau_point(a, b));
        if (keep_states) {
            path.family0.push_back(a);
            path.family1.push_back(b);
        }
        if (L + 2 > L_max)
            break;
        if (std::abs(gamma - kHalfPi) < kGaussianLineTol) {
            // Closed form at every size; the roots do not vary smoothly in I/M here.
            a = solve_ground_family(gamma, T, L + 2, L / 2 + 1, opt);
            b = solve_ground_family(gamma, T, L + 2, L / 2, opt);
            continue;
        }
        try {
            a = newton_solve(continuation_step(a), gamma, alpha, opt.newton);
            b = newton_solve(continuation_step(b), gamma, alpha, opt.newton);
        } catch (const NumericError &e) {
            std::ostringstream os;
            os << "continuation failed at (gamma, T, L) = (" << gamma << ", " << T << ", " << L + 2 << "): " << e.what();
            throw NumericError(os.str());
        }
    }
    return path;
}

TauPoint ground_pair_tau(double gamma, double T, int L, const HomotopyOptions &opt) {
    if (L < 8 || L % 2 != 0)
        throw DomainError("ground_pair_tau needs even L >= 8");
    return continuation_path(gamma, T, L, 8, false, opt).points.back();
}

TauExtrapolation extrapolate_tau(const std::vector<int> &L, const std::vector<double> &log_ratio, int L_min_fit) {
    if (L.size() != log_ratio.size())
        throw FitError("L and data differ in length");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < L.size(); ++i)
        if (L[i] >= L_min_fit) {
            x.push_back(L[i]);
            y.push_back(L[i] * log_ratio[i]);
        }
    if (x.size() < 4)
        throw FitError("extrapolation needs >= 4 sizes with L >= " + std::to_string(L_min_fit) + ", got " +
                       std::to_string(x.size()));
    const bool positive = y.front() > 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if ((y[i] > 0.0) != positive || y[i] == 0.0) {
            std::ostringstream os;
            os << "log ratio changes sign inside the fit window (L = " << x[i] << ", L*y = " << y[i] << ")";
            throw FitError(os.str());
        }

    TauExtrapolation out;
    bool up = true, down = true;
    for (std::size_t i = 1; i < y.size(); ++i) {
        up = up && y[i] >= y[i - 1];
        down = down && y[i] <= y[i - 1];
    }
    out.monotone = up || down;
    out.fit = fit(FitModel::LinearIn1OverL, x, y);
    const double c0 = out.fit.coefficients[0];
    if (!(c0 > 0.0))
        throw FitError("extrapolated L*log ratio is not positive: " + std::to_string(c0));
    out.tau_inf = 1.0 / c0;
    out.tau_inf_err = out.fit.std_errors[0] / (c0 * c0);
    std::ostringstream os;
    os << "n=" << x.size() << " L=[" << x.front() << "," << x.back() << "] L*y=[" << y.front() << "," << y.back()
       << "]" << (out.monotone ? "" : " non-monotone");
    out.diagnostics = os.str();
    return out;
}

TauExtrapolation extrapolate_tau(const ContinuationPath &path, int L_min_fit) {
    std::vector<int> L;
    std::vector<double> y;
    for (const auto &p : path.points) {
        L.push_back(p.L);
        y.push_back(p.log_mod0 - p.log_mod1);
    }
    return extrapolate_tau(L, y, L_min_fit);
}

std::string to_string(Edge e) { return e == Edge::Lower ? "lower" : "upper"; }

Edge parse_edge(const std::string &s) {
    if (s == "lower")
        return Edge::Lower;
    if (s == "upper")
        return Edge::Upper;
    throw DomainError("edge must be 'lower' or 'upper', got '" + s + "'");
}

NuResult fit_nu(double gamma, Edge edge, const std::vector<double> &offsets, const NuOptions &opt) {
    if (offsets.size() < 3)
        throw FitError("fit_nu needs at least 3 offsets");
    const auto d = derive_params(probe(gamma, 1.0));
    NuResult out;
    out.gamma = gamma;
    out.edge = edge;
    out.offsets = offsets;
    const std::size_t n = offsets.size();
    out.T.resize(n);
    out.tau_inf.resize(n);
    out.tau_inf_err.resize(n);
    out.monotone.assign(n, true);
    std::vector<char> mono(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(offsets[i] > 0.0))
            throw DomainError("offsets must be positive");
        out.T[i] = edge == Edge::Lower ? d.t_c_minus + offsets[i] : d.t_c_plus - offsets[i];
    }
    parallel_for(n, opt.threads, [&](std::size_t i) {
        try {
            const auto path = continuation_path(gamma, out.T[i], opt.L_max, opt.L0, false, opt.homotopy);
            const auto ex = extrapolate_tau(path, opt.L_min_fit);
            out.tau_inf[i] = ex.tau_inf;
            out.tau_inf_err[i] = ex.tau_inf_err;
            mono[i] = ex.monotone;
        } catch (const NumericError &e) {
            std::ostringstream os;
            os << "fit_nu aborted at T = " << out.T[i] << ": " << e.what();
            throw NumericError(os.str());
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        out.monotone[i] = mono[i];
    out.fit = fit(FitModel::PowerLaw, offsets, out.tau_inf);
    out.nu = -out.fit.coefficients[1];
    out.nu_err = out.fit.std_errors[1];
    return out;
}

double nu_reference(double gamma) { return 1.0 / (2.0 * (1.0 - gamma / kPi)); }

XxzReport xxz_report_for(double gamma, int L, const std::vector<cplx> &mu) {
    XxzReport rep;
    rep.cluster_size = static_cast<int>(mu.size());
    const cplx g2 = 0.5 * kI * gamma, g1 = kI * gamma;
    const cplx twist = std::exp(kI * (L * gamma));
    cplx prod = 1.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const cplx lhs = std::pow(std::sinh(mu[i] + g2) / std::sinh(mu[i] - g2), L / 2);
        cplx rhs = twist;
        for (std::size_t j = 0; j < mu.size(); ++j)
            if (j != i)
                rhs *= std::sinh(mu[i] - mu[j] + g1) / std::sinh(mu[i] - mu[j] - g1);
        rep.residual = std::max(rep.residual, std::abs(lhs / rhs - 1.0));
        prod *= std::sinh(mu[i] - g2) / std::sinh(mu[i] + g2);
    }
    rep.lambda_limit = prod * prod;
    rep.modulus_deviation = std::abs(std::abs(rep.lambda_limit) - 1.0);
    return rep;
}

XxzReport xxz_limit_check(double gamma, const BetheState &state, cplx alpha) {
    std::vector<cplx> mu;
    const bool negative = alpha.real() < 0.0;
    for (cplx l : state.roots)
        if ((l.real() < 0.0) == negative)
            mu.push_back(l - 0.5 * std::conj(alpha));
    return xxz_report_for(gamma, state.L, mu);
}

} // namespace purify
