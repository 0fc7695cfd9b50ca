#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mvc {

// std::mt19937_64 output is fixed by the standard, so every draw below is
// reproducible across toolchains. Distribution objects from <random> are not,
// which is why uniform_below is hand-rolled.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
	x += 0x9e3779b97f4a7c15ull;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
	return x ^ (x >> 31);
}

// Seed derivation used by every component:
//   s = splitmix64(root); for each tag t: s = splitmix64(s ^ t)
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> tags) noexcept {
	std::uint64_t s = splitmix64(root);
	for (auto t : tags) {
		s = splitmix64(s ^ t);
	}
	return s;
}

// Uniform integer in [0, bound) by rejection; bound must be nonzero.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
	if ((bound & (bound - 1)) == 0) {
		return rng() & (bound - 1);
	}
	const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
	for (;;) {
		const std::uint64_t x = rng();
		if (x < limit) {
			return x % bound;
		}
	}
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng& rng) {
	return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace mvc
