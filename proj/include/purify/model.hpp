#pragma once

// Circuit parameters, derived quantities, the two-site gate and the symmetry
// operators of the brickwork Floquet circuit U_F = U_2 U_1.
//
// Conventions shared by every module:
//   * sites are numbered 1..L with periodic boundary conditions;
//   * U_1 acts on bonds (2m, 2m+1) including the wrap bond (L, 1), U_2 on (2m-1, 2m);
//   * a configuration is a bit string, bit (m-1) set <=> site m is up;
//   * the two-site basis is |uu>, |ud>, |du>, |dd> with the left site of the bond first.

#include <Eigen/Core>

#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace purify {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

// gamma within this distance of pi/2 is treated as the Gaussian line.
inline constexpr double kGaussianLineTol = 1e-12;
// |T - T_c| below this is classified Critical.
inline constexpr double kCriticalTol = 1e-12;
// |Im alpha| below this counts as real.
inline constexpr double kRealAlphaTol = 1e-10;

struct CircuitParams {
    int L = 8;
    double gamma = 0.5;
    double T = 1.0;
    double delta = 0.0;
    double delta_prime = 0.0;

    // Throws DomainError on the first violated invariant.
    void validate() const;
    bool on_gaussian_line() const;
};

enum class Region { Symmetric, Broken, Critical };

std::string to_string(Region r);

struct DerivedParams {
    cplx alpha;
    cplx beta;        // alpha - i pi/2
    double t_c_minus; // (pi - 2 gamma) / (2 cos gamma)
    double t_c_plus;  // (pi + 2 gamma) / (2 cos gamma), +inf on the Gaussian line
    double period;    // pi / cos gamma, +inf on the Gaussian line
    double T_reduced; // T mod period
    Region region;
};

/// alpha, beta, the critical times and the region label.
///
/// T is reduced modulo the period before anything else. alpha uses the real
/// logarithm of |cos(g - T cos g) / cos(g + T cos g)| and carries Im alpha = +pi/2
/// whenever that ratio is negative, so that beta = alpha - i pi/2 is real in the
/// broken phase. At gamma = pi/2 the ratio is replaced by its limit (1+T)/(1-T).
DerivedParams derive_params(const CircuitParams &p);

using GateMatrix = Eigen::Matrix4cd;

/// Local two-site generator h_{m,n} in the |uu>,|ud>,|du>,|dd> basis.
GateMatrix local_generator(double gamma);

/// h shifted so that aligned pairs have zero energy: h - (cos gamma / 2).
/// Its spectrum is {0, 0, 0, 2 cos gamma}.
GateMatrix shifted_generator(double gamma);

/// The two-site gate 1 + (exp(2iT cos g) - 1) / (2 cos g) * h0, with h0 the
/// shifted generator. This equals exp(+i h0 T); aligned pairs are left
/// untouched, the gate is periodic in T with period pi / cos g, and the
/// eigenvalues of the resulting Floquet operator coincide with the Bethe
/// product formula. On the Gaussian line the closed form degenerates and the
/// 4x4 exponential is evaluated directly.
GateMatrix two_site_gate(double gamma, double T);
GateMatrix two_site_gate(const CircuitParams &p);

/// Diagonal of exp(delta (-1)^m sigma^z_m) for m = 1..L; entry [m-1] = (up, down).
std::vector<Eigen::Vector2d> perturbation_u3(const CircuitParams &p);

/// Diagonal of exp(delta' sigma^z_m) for every site.
std::vector<Eigen::Vector2d> perturbation_u3prime(const CircuitParams &p);

/// Site maps used by the antiunitary symmetry A = S P T.
struct SymmetryOps {
    int L = 0;
    bool conjugation = true;
    double u_theta_angle = 0.0;

    int shift(int m) const { return m % L + 1; }
    int parity(int m) const { return L + 1 - m; }
    // Unitary part of A: m -> L - m (mod L). Maps U_1 onto U_2 bonds.
    int antiunitary_site(int m) const { return parity(shift(m)); }

    // Permutations of 1..L, stored 0-based: map[m-1] = image(m) - 1.
    std::vector<int> antiunitary_map() const;
    std::vector<int> parity_map() const;
};

/// Applies a site permutation to a configuration.
unsigned permute_config(unsigned config, const std::vector<int> &site_map);

} // namespace purify
