#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace mvc {

// Fixed-length packed bit vector with inline storage.
//
// Coordinate 1 lives in bit 0 of word 0, coordinate 65 in bit 0 of word 1,
// and so on. Positions in the API are 0-based (position p == coordinate
// p + 1). Bits beyond size() are always zero so equality is word-wise.
class BitVec {
public:
	static constexpr std::size_t kMaxBits = 512;
	static constexpr std::size_t kWords = kMaxBits / 64;

	BitVec() = default;
	explicit BitVec(std::size_t length);

	static BitVec from_u64(std::size_t length, std::uint64_t value);
	static BitVec from_hex(std::size_t length, std::string_view hex);
	static BitVec from_string(std::string_view bits);

	std::size_t size() const noexcept { return size_; }
	bool empty() const noexcept { return size_ == 0; }

	bool get(std::size_t pos) const noexcept {
		return (words_[pos >> 6] >> (pos & 63)) & 1u;
	}
	void set(std::size_t pos, bool value) noexcept {
		const std::uint64_t mask = std::uint64_t{1} << (pos & 63);
		if (value) {
			words_[pos >> 6] |= mask;
		} else {
			words_[pos >> 6] &= ~mask;
		}
	}
	void flip(std::size_t pos) noexcept {
		words_[pos >> 6] ^= std::uint64_t{1} << (pos & 63);
	}

	// Reads `count` (<= 64) bits starting at `pos`; bit `pos` becomes the LSB.
	std::uint64_t get_bits(std::size_t pos, std::size_t count) const noexcept;
	void set_bits(std::size_t pos, std::size_t count, std::uint64_t value) noexcept;

	std::size_t weight() const noexcept;
	bool is_zero() const noexcept;
	// Parity of the coordinate-wise AND, i.e. the GF(2) inner product.
	bool dot(const BitVec& other) const noexcept;

	std::uint64_t word(std::size_t k) const noexcept { return words_[k]; }
	std::size_t word_count() const noexcept { return (size_ + 63) / 64; }
	std::uint64_t low_u64() const noexcept { return words_[0]; }

	BitVec& operator^=(const BitVec& other) noexcept;
	BitVec& operator&=(const BitVec& other) noexcept;
	friend BitVec operator^(BitVec a, const BitVec& b) noexcept { return a ^= b; }
	friend BitVec operator&(BitVec a, const BitVec& b) noexcept { return a &= b; }

	friend bool operator==(const BitVec& a, const BitVec& b) noexcept {
		return a.size_ == b.size_ && a.words_ == b.words_;
	}
	friend bool operator<(const BitVec& a, const BitVec& b) noexcept;

	// Byte k holds coordinates 8k+1..8k+8, coordinate 8k+1 in the LSB.
	std::string to_hex() const;
	// One character per coordinate, coordinate 1 first.
	std::string to_string() const;

	std::size_t hash() const noexcept;

private:
	std::array<std::uint64_t, kWords> words_{};
	std::uint32_t size_ = 0;
};

std::size_t hamming_distance(const BitVec& a, const BitVec& b) noexcept;

// One version W_u of the stored value.
using Message = BitVec;

struct BitVecHash {
	std::size_t operator()(const BitVec& v) const noexcept { return v.hash(); }
};

} // namespace mvc
