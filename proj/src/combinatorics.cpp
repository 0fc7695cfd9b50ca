#include "mvc/combinatorics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mvc {

namespace mp = boost::multiprecision;

BigInt binomial(unsigned n, unsigned k) {
	if (k > n) {
		return 0;
	}
	k = std::min(k, n - k);
	BigInt result = 1;
	for (unsigned i = 1; i <= k; ++i) {
		result *= n - k + i;
		result /= i;
	}
	return result;
}

BigInt factorial(unsigned n) {
	BigInt result = 1;
	for (unsigned i = 2; i <= n; ++i) {
		result *= i;
	}
	return result;
}

BigInt hamming_ball_volume(unsigned radius, unsigned K) {
	if (radius > K) {
		throw std::domain_error("hamming_ball_volume: radius " + std::to_string(radius) +
		                        " exceeds K = " + std::to_string(K));
	}
	BigInt total = 0;
	BigInt term = 1;  // C(K, 0)
	for (unsigned j = 0; j <= radius; ++j) {
		total += term;
		term = term * (K - j) / (j + 1);
	}
	return total;
}

HighFloat log2_high(const BigInt& value) {
	if (value <= 0) {
		throw std::domain_error("log2 of a non-positive integer");
	}
	// Split off whole powers of two so the float conversion keeps full precision.
	const unsigned msb = static_cast<unsigned>(mp::msb(value));
	if (mp::lsb(value) == msb) {
		return HighFloat(msb);
	}
	const unsigned shift = msb > 160 ? msb - 160 : 0;
	const BigInt top = value >> shift;
	return HighFloat(shift) + mp::log(HighFloat(top)) / mp::log(HighFloat(2));
}

HighFloat log2_high(const HighFloat& value) {
	if (value <= 0) {
		throw std::domain_error("log2 of a non-positive value");
	}
	return mp::log(value) / mp::log(HighFloat(2));
}

double log2_volume(unsigned radius, unsigned K) {
	return static_cast<double>(log2_high(hamming_ball_volume(radius, K)));
}

unsigned ceil_log2(const BigInt& value) {
	if (value <= 0) {
		throw std::domain_error("ceil_log2 of a non-positive integer");
	}
	if (value == 1) {
		return 0;
	}
	return static_cast<unsigned>(mp::msb(BigInt(value - 1))) + 1;
}

unsigned ceil_log2(std::uint64_t value) {
	if (value == 0) {
		throw std::domain_error("ceil_log2 of zero");
	}
	return value == 1 ? 0u : 64u - static_cast<unsigned>(std::countl_zero(value - 1));
}

BigInt ball_rank(const BitVec& y) {
	const unsigned K = static_cast<unsigned>(y.size());
	const unsigned w = static_cast<unsigned>(y.weight());
	BigInt rank = w == 0 ? BigInt(0) : hamming_ball_volume(w - 1, K);
	unsigned seen = 0;
	for (unsigned pos = 0; pos < K; ++pos) {
		if (y.get(pos)) {
			++seen;
			rank += binomial(pos, seen);
		}
	}
	return rank;
}

BitVec ball_unrank(const BigInt& rank, unsigned K) {
	if (rank < 0) {
		throw std::domain_error("negative rank");
	}
	BitVec y(K);
	BigInt remaining = rank;
	unsigned w = 0;
	for (;; ++w) {
		if (w > K) {
			throw std::domain_error("rank exceeds 2^K");
		}
		const BigInt layer = binomial(K, w);
		if (remaining < layer) {
			break;
		}
		remaining -= layer;
	}
	// Colex unranking: choose the largest position p with C(p, j) <= remaining.
	unsigned upper = K;
	for (unsigned j = w; j >= 1; --j) {
		unsigned p = j - 1;
		while (p + 1 < upper && binomial(p + 1, j) <= remaining) {
			++p;
		}
		remaining -= binomial(p, j);
		y.set(p, true);
		upper = p;
	}
	return y;
}

BallIndexer::BallIndexer(unsigned K, unsigned radius)
	: K_(K), radius_(radius), volume_(hamming_ball_volume(radius, K)) {
	fits_ = volume_ <= BigInt(std::numeric_limits<std::uint64_t>::max());
	cumulative_.reserve(radius + 1);
	BigInt acc = 0;
	for (unsigned j = 0; j <= radius; ++j) {
		acc += binomial(K, j);
		cumulative_.push_back(acc);
	}
	if (!fits_) {
		return;
	}
	volume_u64_ = static_cast<std::uint64_t>(volume_);
	binom_.assign(static_cast<std::size_t>(K + 1) * (radius + 1), 0);
	for (unsigned k = 0; k <= K; ++k) {
		binom_[k * (radius + 1)] = 1;
		for (unsigned j = 1; j <= radius && j <= k; ++j) {
			binom_[k * (radius + 1) + j] = choose(k - 1, j - 1) + (j <= k - 1 ? choose(k - 1, j) : 0);
		}
	}
}

std::uint64_t BallIndexer::rank(const BitVec& y) const {
	if (!fits_) {
		throw std::logic_error("BallIndexer::rank requires a 64-bit volume");
	}
	const unsigned w = static_cast<unsigned>(y.weight());
	if (w > radius_) {
		throw std::domain_error("vector weight exceeds ball radius");
	}
	std::uint64_t r = 0;
	for (unsigned j = 0; j < w; ++j) {
		r += choose(K_, j);
	}
	unsigned seen = 0;
	for (std::size_t k = 0; k < y.word_count(); ++k) {
		std::uint64_t word = y.word(k);
		while (word != 0) {
			const unsigned pos = static_cast<unsigned>(64 * k + std::countr_zero(word));
			word &= word - 1;
			++seen;
			r += choose(pos, seen);
		}
	}
	return r;
}

BitVec BallIndexer::unrank(std::uint64_t rank) const {
	if (!fits_) {
		throw std::logic_error("BallIndexer::unrank requires a 64-bit volume");
	}
	if (rank >= volume_u64_) {
		throw std::domain_error("rank outside the ball");
	}
	unsigned w = 0;
	while (rank >= choose(K_, w)) {
		rank -= choose(K_, w);
		++w;
	}
	BitVec y(K_);
	unsigned upper = K_;
	for (unsigned j = w; j >= 1; --j) {
		// Largest p < upper with C(p, j) <= rank, by binary search.
		unsigned lo = j - 1;
		unsigned hi = upper - 1;
		while (lo < hi) {
			const unsigned mid = lo + (hi - lo + 1) / 2;
			if (choose(mid, j) <= rank) {
				lo = mid;
			} else {
				hi = mid - 1;
			}
		}
		rank -= choose(lo, j);
		y.set(lo, true);
		upper = lo;
	}
	return y;
}

BitVec BallIndexer::sample(Rng& rng) const {
	const BigInt r = uniform_big_below(rng, volume_);
	unsigned w = 0;
	while (r >= cumulative_[w]) {
		++w;
	}
	// Partial Fisher-Yates over the K positions.
	std::vector<unsigned> positions(K_);
	for (unsigned k = 0; k < K_; ++k) {
		positions[k] = k;
	}
	BitVec y(K_);
	for (unsigned j = 0; j < w; ++j) {
		const auto pick = j + static_cast<unsigned>(uniform_below(rng, K_ - j));
		std::swap(positions[j], positions[pick]);
		y.set(positions[j], true);
	}
	return y;
}

BigInt uniform_big_below(Rng& rng, const BigInt& bound) {
	if (bound <= 0) {
		throw std::domain_error("uniform_big_below: empty range");
	}
	if (bound <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
		return BigInt(uniform_below(rng, static_cast<std::uint64_t>(bound)));
	}
	const unsigned bits = static_cast<unsigned>(mp::msb(bound)) + 1;
	for (;;) {
		BigInt x = 0;
		for (unsigned have = 0; have < bits; have += 64) {
			x = (x << 64) | BigInt(rng());
		}
		x &= (BigInt(1) << bits) - 1;
		if (x < bound) {
			return x;
		}
	}
}

} // namespace mvc
