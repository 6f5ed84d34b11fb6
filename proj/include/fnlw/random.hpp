#ifndef FNLW_RANDOM_HPP
#define FNLW_RANDOM_HPP

#include <cstdint>
#include <random>

namespace fnlw {

/// Identifies one sample's random stream. The stream is a pure function of
/// (master_seed, sample_index).
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;

  SeedSpec with_index(std::uint64_t index) const { return {master_seed, index}; }
  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

using Engine = std::mt19937_64;

inline Engine make_engine(const SeedSpec& seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.master_seed),
                    static_cast<std::uint32_t>(seed.master_seed >> 32),
                    static_cast<std::uint32_t>(seed.sample_index),
                    static_cast<std::uint32_t>(seed.sample_index >> 32)};
  return Engine(seq);
}

/// Derived master seed for an independent sub-stream family (e.g. pCN chains
/// versus proposals) so that families never share a SeedSpec.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace fnlw

#endif  // FNLW_RANDOM_HPP
