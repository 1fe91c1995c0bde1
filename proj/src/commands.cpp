#include "purify/commands.hpp"
#include "purify/errors.hpp"
#include "purify/evolution.hpp"
#include "purify/free_fermion.hpp"
#include "purify/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace purify {

namespace {

template <class T> std::string join(const std::vector<T> &v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            os << ',';
        if constexpr (std::is_floating_point_v<T>)
            os << format_double(v[i]);
        else
            os << v[i];
    }
    return os.str();
}

CircuitParams point(const RunConfig &c, double gamma, double T, int L) {
    CircuitParams p;
    p.L = L;
    p.gamma = gamma;
    p.T = T;
    p.delta = c.delta;
    p.delta_prime = c.delta_prime;
    return p;
}

// gamma outermost, L innermost.
std::vector<CircuitParams> grid(const RunConfig &c) {
    std::vector<CircuitParams> out;
    for (double g : c.gammas)
        for (double T : c.Ts)
            for (int L : c.Ls)
                out.push_back(point(c, g, T, L));
    return out;
}

// One worker per sweep point when there are several, otherwise the threads go to the sectors.
int inner_threads(const RunConfig &c, std::size_t n_points) { return n_points > 1 ? 1 : c.threads; }

void append(ResultTable &dst, const ResultTable &src) {
    for (const auto &r : src.rows())
        dst.add_row(r);
}

long long ll(int v) { return v; }

bool is_bethe(const RunConfig &c) { return c.command == "bethe"; }
bool is_ff(const RunConfig &c) { return c.command == "ff"; }

} // namespace

void RunConfig::validate() const {
    if (gammas.empty() || Ts.empty() || Ls.empty())
        throw DomainError("gamma, T and L grids must be non-empty");
    if (format != "csv" && format != "json")
        throw DomainError("format must be csv or json, got '" + format + "'");
    if (threads < 1)
        throw DomainError("threads must be >= 1");
    if (n_steps < 0)
        throw DomainError("steps must be >= 0");
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw DomainError("threshold must lie in (0, 1]");
    if (seeds.empty())
        throw DomainError("at least one seed is needed");
    if (!(late_factor > 0.0))
        throw DomainError("late factor must be > 0");
    const bool bethe = is_bethe(*this);
    for (double g : gammas)
        for (double T : Ts) {
            if (bethe || is_ff(*this)) {
                point(*this, g, T, 8).validate();
                continue;
            }
            for (int L : Ls)
                point(*this, g, T, L).validate();
        }
    if (bethe) {
        for (int L : Ls)
            if (L < 8 || L % 2 != 0)
                throw DomainError("Bethe sizes must be even and >= 8, got " + std::to_string(L));
        if (L_max < 8 || L_max % 2 != 0)
            throw DomainError("L_max must be even and >= 8");
        parse_edge(edge);
        for (double o : offsets)
            if (!(o > 0.0))
                throw DomainError("offsets must be > 0");
    }
    if (is_ff(*this))
        for (int L : Ls)
            if (L < 4 || L % 2 != 0)
                throw DomainError("L must be even and >= 4");
    resolve_variant(*this);
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> e{
        {"command", command},
        {"mode", mode},
        {"gamma", join(gammas)},
        {"T", join(Ts)},
        {"L", join(Ls)},
        {"delta", format_double(delta)},
        {"delta_prime", format_double(delta_prime)},
        {"variant", variant},
        {"steps", std::to_string(n_steps)},
        {"seed", join(seeds)},
        {"threshold", format_double(threshold)},
        {"n_up_offset", std::to_string(n_up_offset)},
        {"late_factor", format_double(late_factor)},
        {"average_cuts", average_cuts ? "true" : "false"},
        {"M", std::to_string(M)},
        {"L_max", std::to_string(L_max)},
        {"L_min_fit", std::to_string(L_min_fit)},
        {"edge", edge},
        {"offsets", join(offsets)},
        {"format", format},
        {"threads", std::to_string(threads)},
    };
    return e;
}

Variant resolve_variant(const RunConfig &c) {
    if (c.variant != "auto")
        return parse_variant(c.variant);
    if (c.delta > 0.0 && c.delta_prime > 0.0)
        throw DomainError("no circuit variant carries both delta and delta'; pick --variant explicitly");
    if (c.delta > 0.0)
        return Variant::Sandwiched;
    if (c.delta_prime > 0.0)
        return Variant::Tilted;
    return Variant::Plain;
}

std::string phase_label(const CircuitParams &p) {
    const auto d = derive_params(p);
    if (p.delta_prime > 0.0)
        return "strongly-purifying";
    if (p.gamma == 0.0 || p.on_gaussian_line() || d.region == Region::Symmetric)
        return "mixed";
    if (d.region == Region::Critical)
        return "critical";
    return p.delta > 0.0 ? "strongly-purifying" : "weakly-purifying";
}

std::vector<ResultTable> cmd_phase_diagram(const RunConfig &c) {
    ResultTable t("phase_diagram", {{"gamma", "rad"}, {"T", ""}, {"T_reduced", ""}, {"region", ""}, {"phase", ""},
                                    {"t_c_minus", ""}, {"t_c_plus", ""}});
    for (double g : c.gammas)
        for (double T : c.Ts) {
            const auto p = point(c, g, T, c.Ls.front());
            const auto d = derive_params(p);
            t.add_row({g, T, d.T_reduced, to_string(d.region), phase_label(p), d.t_c_minus, d.t_c_plus});
        }
    return {t};
}

std::vector<ResultTable> cmd_purity(const RunConfig &c) {
    const auto pts = grid(c);
    const Variant v = resolve_variant(c);
    const int steps = c.n_steps > 0 ? c.n_steps : 100;
    std::vector<ResultTable> trace(pts.size(), ResultTable("", {}));
    std::vector<std::vector<Cell>> summary(pts.size());
    const int inner = inner_threads(c, pts.size());
    parallel_for(pts.size(), c.threads > 1 && pts.size() > 1 ? c.threads : 1, [&](std::size_t i) {
        const auto &p = pts[i];
        BlockOperator op(p, v);
        PurityOptions o;
        o.n_steps = steps;
        o.threads = inner;
        const auto tr = evolve_purity(op, o);
        ResultTable t("", {{"gamma"}, {"T"}, {"L"}, {"variant"}, {"N"}, {"purity"}, {"log_norm"}});
        for (const auto &r : tr.steps)
            t.add_row({p.gamma, p.T, ll(p.L), to_string(v), ll(r.N), r.purity, r.log_norm});
        trace[i] = std::move(t);
        const auto reached = tr.first_step_reaching(c.threshold);
        summary[i] = {p.gamma, p.T, ll(p.L), to_string(v), c.threshold, ll(reached ? *reached : -1),
                      tr.steps.back().purity, tr.final_sector_weights.back()};
    });
    ResultTable all("purity", {{"gamma", "rad"}, {"T"}, {"L"}, {"variant"}, {"N"}, {"purity"}, {"log_norm"}});
    for (const auto &t : trace)
        append(all, t);
    ResultTable sum("purity_summary", {{"gamma", "rad"},
                                       {"T"},
                                       {"L"},
                                       {"variant"},
                                       {"threshold"},
                                       {"steps_to_threshold"},
                                       {"final_purity"},
                                       {"all_up_weight"}});
    for (auto &r : summary)
        sum.add_row(std::move(r));
    return {all, sum};
}

namespace {

struct SpectrumRun {
    CircuitParams p;
    SpectrumResult s;
};

std::vector<SpectrumRun> spectra(const RunConfig &c) {
    const auto pts = grid(c);
    const Variant v = resolve_variant(c);
    std::vector<SpectrumRun> out(pts.size());
    const int inner = inner_threads(c, pts.size());
    parallel_for(pts.size(), pts.size() > 1 ? c.threads : 1, [&](std::size_t i) {
        out[i].p = pts[i];
        out[i].s = full_spectrum(BlockOperator(pts[i], v), inner);
    });
    return out;
}

ResultTable spectrum_summary(const RunConfig &c, const std::vector<SpectrumRun> &runs) {
    ResultTable t("spectrum_summary", {{"gamma", "rad"},
                                       {"T"},
                                       {"L"},
                                       {"variant"},
                                       {"region"},
                                       {"top_modulus"},
                                       {"second_modulus"},
                                       {"gap"},
                                       {"degeneracy"},
                                       {"census_degeneracy"},
                                       {"max_unimodular_deviation"},
                                       {"pairing_deviation"}});
    const Variant v = resolve_variant(c);
    for (const auto &r : runs) {
        const auto &e = r.s.eigenvalues;
        double dev = 0.0;
        for (const auto &x : e)
            dev = std::max(dev, std::abs(std::abs(x.value) - 1.0));
        long long census = -1;
        if (r.p.on_gaussian_line() && v == Variant::Plain)
            census = ff_max_modulus_census(r.p.L, r.p.T).degeneracy;
        const double second = e.size() > 1 ? std::abs(e[1].value) : 0.0;
        t.add_row({r.p.gamma, r.p.T, ll(r.p.L), to_string(v), to_string(derive_params(r.p).region),
                   std::abs(e.front().value), second, r.s.gap, ll(r.s.degeneracy_count), census, dev,
                   v == Variant::Tilted ? Cell(std::string("na")) : Cell(spectral_pairing_deviation(r.s))});
    }
    return t;
}

} // namespace

std::vector<ResultTable> cmd_spectrum(const RunConfig &c) {
    const auto runs = spectra(c);
    ResultTable t("spectrum", {{"gamma", "rad"}, {"T"}, {"L"}, {"index"}, {"re"}, {"im"}, {"modulus"}, {"n_up"}});
    for (const auto &r : runs) {
        long long i = 0;
        for (const auto &e : r.s.eigenvalues)
            t.add_row({r.p.gamma, r.p.T, ll(r.p.L), i++, e.value.real(), e.value.imag(), std::abs(e.value), ll(e.n_up)});
    }
    return {t, spectrum_summary(c, runs)};
}

std::vector<ResultTable> cmd_gap(const RunConfig &c) { return {spectrum_summary(c, spectra(c))}; }

int late_time_steps(const CircuitParams &p, double late_factor, int threads) {
    constexpr int kMeasureCap = 12;
    constexpr int kMaxSteps = 200;
    CircuitParams q = p;
    q.L = std::min(p.L, kMeasureCap);
    BlockOperator op(q, Variant::Plain);
    PurityOptions o;
    o.n_steps = kMaxSteps;
    o.stop_at = 0.99;
    o.threads = threads;
    const auto reached = evolve_purity(op, o).first_step_reaching(0.99);
    if (!reached)
        return 100 * p.L;
    const double tau = *reached * static_cast<double>(p.L) / q.L;
    return std::max(4, static_cast<int>(std::ceil(late_factor * tau)));
}

std::vector<ResultTable> cmd_entropy(const RunConfig &c) {
    if (c.Ls.size() < 3)
        throw FitError("the entropy fit needs at least 3 sizes, got " + std::to_string(c.Ls.size()));
    ResultTable per_seed("entropy_seeds", {{"gamma", "rad"},
                                          {"T"},
                                          {"L"},
                                          {"n_up"},
                                          {"seed"},
                                          {"n_steps"},
                                          {"window_start"},
                                          {"entropy_mean", "nat"},
                                          {"entropy_std", "nat"}});
    ResultTable per_L("entropy", {{"gamma", "rad"}, {"T"}, {"L"}, {"n_up"}, {"seeds"}, {"entropy_mean", "nat"},
                                  {"entropy_std", "nat"}});
    ResultTable fits("entropy_fit", {{"gamma", "rad"}, {"T"}, {"a", "nat"}, {"a_err", "nat"}, {"b", "nat"},
                                     {"b_err", "nat"}, {"monotone"}});
    for (double g : c.gammas)
        for (double T : c.Ts) {
            struct Job {
                int L, n_up, steps;
                std::uint64_t seed;
                double mean = 0.0, sd = 0.0;
            };
            std::vector<Job> jobs;
            for (int L : c.Ls) {
                const auto p = point(c, g, T, L);
                const int n_up = L / 2 + c.n_up_offset;
                if (n_up < 0 || n_up > L)
                    throw DomainError("entropy sector n_up out of range");
                const int steps = c.n_steps > 0 ? c.n_steps : late_time_steps(p, c.late_factor, c.threads);
                for (auto s : c.seeds)
                    jobs.push_back({L, n_up, steps, s});
            }
            const Variant v = resolve_variant(c);
            parallel_for(jobs.size(), c.threads, [&](std::size_t i) {
                auto &j = jobs[i];
                BlockOperator op(point(c, g, T, j.L), v);
                EntropyOptions o;
                o.n_up = j.n_up;
                o.seed = j.seed;
                o.n_steps = j.steps;
                o.average_offsets = c.average_cuts;
                const int start = j.steps - j.steps / 4;
                o.record_from = start;
                const auto rec = trajectory_entropy(op, o);
                std::vector<double> w;
                for (const auto &r : rec)
                    if (r.N >= start)
                        w.push_back(r.entropy);
                const double m = std::accumulate(w.begin(), w.end(), 0.0) / w.size();
                double var = 0.0;
                for (double x : w)
                    var += (x - m) * (x - m);
                j.mean = m;
                j.sd = w.size() > 1 ? std::sqrt(var / (w.size() - 1)) : 0.0;
            });
            std::map<int, std::vector<double>> by_L;
            std::map<int, int> sector;
            for (const auto &j : jobs) {
                per_seed.add_row({g, T, ll(j.L), ll(j.n_up), static_cast<long long>(j.seed), ll(j.steps),
                                  ll(j.steps - j.steps / 4), j.mean, j.sd});
                by_L[j.L].push_back(j.mean);
                sector[j.L] = j.n_up;
            }
            std::vector<double> xs, ys;
            for (int L : c.Ls) {
                const auto &m = by_L[L];
                const double mean = std::accumulate(m.begin(), m.end(), 0.0) / m.size();
                double var = 0.0;
                for (double x : m)
                    var += (x - mean) * (x - mean);
                const double sd = m.size() > 1 ? std::sqrt(var / (m.size() - 1)) : 0.0;
                per_L.add_row({g, T, ll(L), ll(sector[L]), static_cast<long long>(m.size()), mean, sd});
                xs.push_back(L);
                ys.push_back(mean);
            }
            std::vector<std::size_t> order(xs.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
            bool mono = true;
            for (std::size_t i = 1; i < order.size(); ++i)
                mono = mono && ys[order[i]] > ys[order[i - 1]];
            const auto f = fit(FitModel::LogLaw, xs, ys);
            fits.add_row({g, T, f.coefficients[0], f.std_errors[0], f.coefficients[1], f.std_errors[1],
                          ll(mono ? 1 : 0)});
        }
    return {per_seed, per_L, fits};
}

namespace {

NuOptions nu_options(const RunConfig &c) {
    NuOptions o;
    o.L_max = c.L_max;
    o.L_min_fit = c.L_min_fit;
    o.threads = c.threads;
    return o;
}

ResultTable tau_table(const std::vector<ContinuationPath> &paths) {
    ResultTable t("tau", {{"gamma", "rad"},
                          {"T"},
                          {"L"},
                          {"log_mod0"},
                          {"log_mod1"},
                          {"t_L", "steps"},
                          {"tau_L", "steps/site"},
                          {"swapped"}});
    for (const auto &p : paths)
        for (const auto &x : p.points)
            t.add_row({p.gamma, p.T, ll(x.L), x.log_mod0, x.log_mod1, x.t_L, x.tau_L, ll(x.swapped ? 1 : 0)});
    return t;
}

std::string context(double g, double T, int L) {
    std::ostringstream os;
    os << "(gamma, T, L) = (" << g << ", " << T << ", " << L << "): ";
    return os.str();
}

} // namespace

std::vector<ResultTable> cmd_bethe(const RunConfig &c) {
    const std::string &m = c.mode;
    if (m == "solve") {
        ResultTable roots("roots", {{"gamma", "rad"}, {"T"}, {"L"}, {"M"}, {"index"}, {"I"}, {"re"}, {"im"}});
        ResultTable states("bethe_state", {{"gamma", "rad"},
                                           {"T"},
                                           {"L"},
                                           {"M"},
                                           {"lambda_re"},
                                           {"lambda_im"},
                                           {"log_modulus"},
                                           {"residual"},
                                           {"ill_conditioned"}});
        for (double g : c.gammas)
            for (double T : c.Ts)
                for (int L : c.Ls) {
                    const int M = c.M < 0 ? L / 2 : c.M;
                    if (M != L / 2 && M != L / 2 - 1)
                        throw DomainError("bethe solve follows the ground families M = L/2 and L/2 - 1 only");
                    BetheState s;
                    try {
                        const auto path = continuation_path(g, T, L, 8, true);
                        s = M == L / 2 ? path.family0.back() : path.family1.back();
                    } catch (const NumericError &e) {
                        throw NumericError(context(g, T, L) + e.what());
                    }
                    for (int i = 0; i < s.M(); ++i)
                        roots.add_row({g, T, ll(L), ll(M), ll(i), s.quantum_numbers[i], s.roots[i].real(),
                                       s.roots[i].imag()});
                    states.add_row({g, T, ll(L), ll(M), s.lambda_eig.real(), s.lambda_eig.imag(), s.log_modulus,
                                    s.residual, ll(s.ill_conditioned ? 1 : 0)});
                }
        return {roots, states};
    }
    if (m == "tau" || m == "extrapolate") {
        std::vector<ContinuationPath> paths;
        for (double g : c.gammas)
            for (double T : c.Ts)
                paths.push_back(ContinuationPath{g, T, {}, {}, {}});
        parallel_for(paths.size(), c.threads, [&](std::size_t i) {
            const double g = paths[i].gamma, T = paths[i].T;
            paths[i] = continuation_path(g, T, c.L_max);
        });
        if (m == "tau")
            return {tau_table(paths)};
        ResultTable ex("tau_extrapolation", {{"gamma", "rad"},
                                             {"T"},
                                             {"L_min_fit"},
                                             {"tau_inf", "steps/site"},
                                             {"tau_inf_err", "steps/site"},
                                             {"c0"},
                                             {"c1"},
                                             {"monotone"}});
        for (const auto &p : paths) {
            const auto e = extrapolate_tau(p, c.L_min_fit);
            ex.add_row({p.gamma, p.T, ll(c.L_min_fit), e.tau_inf, e.tau_inf_err, e.fit.coefficients[0],
                        e.fit.coefficients[1], ll(e.monotone ? 1 : 0)});
        }
        return {tau_table(paths), ex};
    }
    if (m == "fit-nu") {
        const Edge edge = parse_edge(c.edge);
        ResultTable pts("nu_points", {{"gamma", "rad"},
                                      {"edge"},
                                      {"offset"},
                                      {"T"},
                                      {"tau_inf", "steps/site"},
                                      {"tau_inf_err", "steps/site"},
                                      {"monotone"}});
        ResultTable nu("nu", {{"gamma", "rad"}, {"edge"}, {"nu"}, {"nu_err"}, {"nu_reference"}});
        for (double g : c.gammas) {
            const auto r = fit_nu(g, edge, c.offsets, nu_options(c));
            for (std::size_t i = 0; i < r.offsets.size(); ++i)
                pts.add_row({g, to_string(edge), r.offsets[i], r.T[i], r.tau_inf[i], r.tau_inf_err[i],
                             ll(r.monotone[i] ? 1 : 0)});
            nu.add_row({g, to_string(edge), r.nu, r.nu_err, nu_reference(g)});
        }
        return {pts, nu};
    }
    throw DomainError("bethe mode must be solve, tau, extrapolate or fit-nu, got '" + m + "'");
}

std::vector<ResultTable> cmd_ff(const RunConfig &c) {
    if (c.mode == "census") {
        ResultTable t("ff_census", {{"T"}, {"L"}, {"max_modulus"}, {"log_max_modulus"}, {"degeneracy"}});
        for (double T : c.Ts)
            for (int L : c.Ls) {
                const auto r = ff_max_modulus_census(L, T);
                t.add_row({T, ll(L), r.max_modulus, std::log(r.max_modulus), r.degeneracy});
            }
        return {t};
    }
    if (c.mode == "perturb") {
        ResultTable roots("ff_type2", {{"T"}, {"L"}, {"k"}, {"mu"}, {"sign"}, {"f_finite_sum"}, {"f_integral"}});
        ResultTable gap("ff_perturb", {{"T"}, {"L"}, {"top_slope"}, {"gap_slope"}, {"gap_slope_times_L"}});
        for (double T : c.Ts) {
            const double beta = gaussian_beta(T);
            for (int L : c.Ls) {
                for (KGrid grid : {KGrid::Integer, KGrid::HalfInteger})
                    for (const auto &r : ff_roots(L, beta, grid))
                        if (r.kind == RootKind::TypeII) {
                            const int s = r.lambda.imag() > 0.0 ? 1 : -1;
                            const double mu = r.lambda.real();
                            roots.add_row({T, ll(L), r.k, mu, ll(s), f_pm(mu, s, L, beta, FpmMode::FiniteSum, grid),
                                           f_pm(mu, s, L, beta, FpmMode::Integral)});
                        }
                const auto g = ff_first_order_gap(L, T);
                gap.add_row({T, ll(L), g.top_slope, g.gap_slope, g.gap_slope * L});
            }
        }
        return {roots, gap};
    }
    throw DomainError("ff mode must be census or perturb, got '" + c.mode + "'");
}

std::vector<ResultTable> run_command(const RunConfig &c) {
    c.validate();
    if (c.command == "phase-diagram")
        return cmd_phase_diagram(c);
    if (c.command == "purity")
        return cmd_purity(c);
    if (c.command == "spectrum")
        return cmd_spectrum(c);
    if (c.command == "gap")
        return cmd_gap(c);
    if (c.command == "entropy")
        return cmd_entropy(c);
    if (c.command == "bethe")
        return cmd_bethe(c);
    if (c.command == "ff")
        return cmd_ff(c);
    throw DomainError("unknown command '" + c.command + "'");
}

} // namespace purify
