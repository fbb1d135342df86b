#ifndef PUF_DETAIL_RNG_HPP
#define PUF_DETAIL_RNG_HPP

#include <cstdint>
#include <random>

namespace puf::detail {

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x)
{
	x += 0x9e3779b97f4a7c15ull;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
	return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) { return mix64(mix64(a) ^ b); }

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) { return mix64(mix64(a, b) ^ c); }

/// Uniform double in [0,1). Avoids std::uniform_real_distribution so that
/// streams are reproducible across standard library implementations.
inline double next_double(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound). bound must be > 0.
inline std::uint64_t next_below(std::mt19937_64 &rng, std::uint64_t bound)
{
	// rejection sampling keeps the draw exactly uniform
	const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
	std::uint64_t v = rng();
	while (v >= limit) {
		v = rng();
	}
	return v % bound;
}

inline bool next_bit(std::mt19937_64 &rng) { return rng() & 1u; }

} // namespace puf::detail

#endif
