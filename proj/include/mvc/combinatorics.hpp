#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "mvc/bitvec.hpp"
#include "mvc/rng.hpp"

namespace mvc {

using BigInt = boost::multiprecision::cpp_int;
// 50 decimal digits, about 166 mantissa bits.
using HighFloat = boost::multiprecision::cpp_bin_float_50;

BigInt binomial(unsigned n, unsigned k);
BigInt factorial(unsigned n);

// |B(w, radius)| in {0,1}^K: sum_{j=0}^{radius} C(K, j).
BigInt hamming_ball_volume(unsigned radius, unsigned K);

HighFloat log2_high(const BigInt& value);
HighFloat log2_high(const HighFloat& value);
double log2_volume(unsigned radius, unsigned K);

// Smallest b with 2^b >= value (value >= 1). Number of bits needed to index
// `value` items.
unsigned ceil_log2(const BigInt& value);
unsigned ceil_log2(std::uint64_t value);

// Rank of a vector inside the nested Hamming balls around zero: vectors are
// ordered by weight, then colexicographically by support. A vector of weight
// w has rank in [Vol(w-1, K), Vol(w, K)), so rank < Vol(r, K) iff weight <= r.
BigInt ball_rank(const BitVec& y);
BitVec ball_unrank(const BigInt& rank, unsigned K);

// Fast ranking for a fixed (K, radius) when Vol(radius, K) fits in 64 bits.
class BallIndexer {
public:
	BallIndexer(unsigned K, unsigned radius);

	unsigned K() const noexcept { return K_; }
	unsigned radius() const noexcept { return radius_; }
	bool fits_u64() const noexcept { return fits_; }
	const BigInt& volume() const noexcept { return volume_; }
	// Valid only when fits_u64().
	std::uint64_t volume_u64() const noexcept { return volume_u64_; }

	std::uint64_t rank(const BitVec& y) const;
	BitVec unrank(std::uint64_t rank) const;

	// Uniform draw from B(0, radius): weight j with probability C(K,j)/Vol,
	// then a uniform j-subset of positions.
	BitVec sample(Rng& rng) const;

private:
	unsigned K_;
	unsigned radius_;
	bool fits_;
	BigInt volume_;
	std::uint64_t volume_u64_ = 0;
	// binom_[k * (radius_ + 1) + j] = C(k, j) for k <= K, j <= radius.
	std::vector<std::uint64_t> binom_;
	std::vector<BigInt> cumulative_;  // Vol(j, K) for j = 0..radius

	std::uint64_t choose(unsigned k, unsigned j) const noexcept {
		return binom_[k * (radius_ + 1) + j];
	}
};

BigInt uniform_big_below(Rng& rng, const BigInt& bound);

} // namespace mvc
