#include "purify/model.hpp"
#include "purify/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

namespace purify {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr cplx kI{0.0, 1.0};
} // namespace

bool CircuitParams::on_gaussian_line() const { return std::abs(gamma - kHalfPi) <= kGaussianLineTol; }

void CircuitParams::validate() const {
    if (L < 4 || L % 2 != 0)
        throw DomainError("L must be even and >= 4, got " + std::to_string(L));
    if (L > 30)
        throw DomainError("L must fit a 32-bit configuration, got " + std::to_string(L));
    if (!std::isfinite(gamma) || gamma < 0.0 || gamma > kHalfPi + kGaussianLineTol)
        throw DomainError("gamma must lie in [0, pi/2], got " + std::to_string(gamma));
    if (!std::isfinite(T) || T < 0.0)
        throw DomainError("T must be finite and >= 0, got " + std::to_string(T));
    if (on_gaussian_line() && T <= 0.0)
        throw DomainError("T must be > 0 on the Gaussian line gamma = pi/2");
    if (!std::isfinite(delta) || delta < 0.0)
        throw DomainError("delta must be >= 0, got " + std::to_string(delta));
    if (!std::isfinite(delta_prime) || delta_prime < 0.0)
        throw DomainError("delta_prime must be >= 0, got " + std::to_string(delta_prime));
}

std::string to_string(Region r) {
    switch (r) {
    case Region::Symmetric: return "symmetric";
    case Region::Broken: return "broken";
    case Region::Critical: return "critical";
    }
    return "?";
}

DerivedParams derive_params(const CircuitParams &p) {
    p.validate();
    DerivedParams d{};
    const double g = p.gamma;

    double ratio;
    if (p.on_gaussian_line()) {
        d.period = kInf;
        d.T_reduced = p.T;
        d.t_c_minus = 1.0;
        d.t_c_plus = kInf;
        ratio = (1.0 + p.T) / (1.0 - p.T);
    } else {
        const double c = std::cos(g);
        d.period = kPi / c;
        d.T_reduced = std::fmod(p.T, d.period);
        d.t_c_minus = (kPi - 2.0 * g) / (2.0 * c);
        d.t_c_plus = (kPi + 2.0 * g) / (2.0 * c);
        ratio = std::cos(g - d.T_reduced * c) / std::cos(g + d.T_reduced * c);
    }

    const double Tr = d.T_reduced;
    if (g == 0.0) {
        // cos(-T) / cos(T) = 1: unitary line, no broken interval.
        d.alpha = 0.0;
        d.region = Region::Symmetric;
    } else {
        d.alpha = -0.5 * std::log(std::abs(ratio));
        if (ratio < 0.0)
            d.alpha += cplx(0.0, kHalfPi);
        if (std::abs(Tr - d.t_c_minus) < kCriticalTol || std::abs(Tr - d.t_c_plus) < kCriticalTol)
            d.region = Region::Critical;
        else if (Tr > d.t_c_minus && Tr < d.t_c_plus)
            d.region = Region::Broken;
        else
            d.region = Region::Symmetric;
    }
    d.beta = d.alpha - cplx(0.0, kHalfPi);
    return d;
}

GateMatrix local_generator(double gamma) {
    const double c = std::cos(gamma);
    const double s = std::sin(gamma);
    GateMatrix h = GateMatrix::Zero();
    h(0, 0) = 0.5 * c;
    h(3, 3) = 0.5 * c;
    h(1, 1) = cplx(1.5 * c, -s);
    h(2, 2) = cplx(1.5 * c, s);
    h(1, 2) = -1.0;
    h(2, 1) = -1.0;
    return h;
}

GateMatrix shifted_generator(double gamma) {
    return local_generator(gamma) - 0.5 * std::cos(gamma) * GateMatrix::Identity();
}

GateMatrix two_site_gate(double gamma, double T) {
    const GateMatrix h0 = shifted_generator(gamma);
    if (std::abs(gamma - kHalfPi) <= kGaussianLineTol) {
        const GateMatrix generator = (kI * T) * h0;
        GateMatrix g = generator.exp();
        // Only the 1+2+1 blocks may be populated.
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (!((r == c) || (r == 1 && c == 2) || (r == 2 && c == 1)))
                    g(r, c) = 0.0;
        return g;
    }
    const double c = std::cos(gamma);
    const double theta = T * c;
    // (exp(2i theta) - 1) / (2c) = i T exp(i theta) sin(theta) / theta, stable as c -> 0.
    const double sinc = theta == 0.0 ? 1.0 : std::sin(theta) / theta;
    const cplx factor = kI * T * std::exp(kI * theta) * sinc;
    return GateMatrix::Identity() + factor * h0;
}

GateMatrix two_site_gate(const CircuitParams &p) {
    p.validate();
    return two_site_gate(p.gamma, p.T);
}

std::vector<Eigen::Vector2d> perturbation_u3(const CircuitParams &p) {
    p.validate();
    std::vector<Eigen::Vector2d> out(p.L);
    for (int m = 1; m <= p.L; ++m) {
        const double e = p.delta * (m % 2 == 0 ? 1.0 : -1.0);
        out[m - 1] = Eigen::Vector2d(std::exp(e), std::exp(-e));
    }
    return out;
}

std::vector<Eigen::Vector2d> perturbation_u3prime(const CircuitParams &p) {
    p.validate();
    return std::vector<Eigen::Vector2d>(p.L, Eigen::Vector2d(std::exp(p.delta_prime), std::exp(-p.delta_prime)));
}

std::vector<int> SymmetryOps::antiunitary_map() const {
    std::vector<int> map(L);
    for (int m = 1; m <= L; ++m)
        map[m - 1] = antiunitary_site(m) - 1;
    return map;
}

std::vector<int> SymmetryOps::parity_map() const {
    std::vector<int> map(L);
    for (int m = 1; m <= L; ++m)
        map[m - 1] = parity(m) - 1;
    return map;
}

unsigned permute_config(unsigned config, const std::vector<int> &site_map) {
    unsigned out = 0;
    for (std::size_t m = 0; m < site_map.size(); ++m)
        if (config >> m & 1u)
            out |= 1u << site_map[m];
    return out;
}

} // namespace purify
