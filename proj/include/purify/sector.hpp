#pragma once

#include <cstdint>
#include <vector>

namespace purify {

using Config = std::uint32_t;

// Fixed-magnetization basis: all configurations with n_up set bits, sorted ascending.
class SectorBasis {
  public:
    SectorBasis(int L, int n_up);

    int L() const { return L_; }
    int n_up() const { return n_up_; }
    std::size_t dim() const { return states_.size(); }
    const std::vector<Config> &states() const { return states_; }
    Config state(std::size_t i) const { return states_[i]; }

    // Position of c in the basis, or -1 if c is not in this sector.
    std::ptrdiff_t index(Config c) const;

  private:
    int L_;
    int n_up_;
    std::vector<Config> states_;
};

double binomial(int n, int k);

// The full 2^L space as an ordered list of sectors n_up = 0..L.
std::vector<SectorBasis> all_sectors(int L);

inline bool site_up(Config c, int site) { return (c >> (site - 1)) & 1u; }

} // namespace purify
