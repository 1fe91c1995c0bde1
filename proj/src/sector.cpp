#include "purify/sector.hpp"
#include "purify/errors.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace purify {

double binomial(int n, int k) {
    if (k < 0 || k > n)
        return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

SectorBasis::SectorBasis(int L, int n_up) : L_(L), n_up_(n_up) {
    if (L < 1 || L > 30)
        throw DomainError("sector basis needs 1 <= L <= 30, got " + std::to_string(L));
    if (n_up < 0 || n_up > L)
        throw DomainError("n_up out of range: " + std::to_string(n_up));
    states_.reserve(static_cast<std::size_t>(binomial(L, n_up)));
    if (n_up == 0) {
        states_.push_back(0);
        return;
    }
    // Gosper's hack: next integer with the same popcount.
    Config c = (Config{1} << n_up) - 1;
    const Config limit = Config{1} << L;
    while (c < limit) {
        states_.push_back(c);
        const Config lowest = c & (~c + 1);
        const Config ripple = c + lowest;
        c = (((ripple ^ c) >> 2) / lowest) | ripple;
    }
}

std::ptrdiff_t SectorBasis::index(Config c) const {
    if (std::popcount(c) != n_up_)
        return -1;
    auto it = std::lower_bound(states_.begin(), states_.end(), c);
    if (it == states_.end() || *it != c)
        return -1;
    return it - states_.begin();
}

std::vector<SectorBasis> all_sectors(int L) {
    std::vector<SectorBasis> out;
    out.reserve(L + 1);
    for (int n = 0; n <= L; ++n)
        out.emplace_back(L, n);
    return out;
}

} // namespace purify
