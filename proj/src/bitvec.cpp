#include "mvc/bitvec.hpp"

#include <stdexcept>

namespace mvc {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char ch) {
	if (ch >= '0' && ch <= '9') {
		return ch - '0';
	}
	if (ch >= 'a' && ch <= 'f') {
		return ch - 'a' + 10;
	}
	if (ch >= 'A' && ch <= 'F') {
		return ch - 'A' + 10;
	}
	throw std::invalid_argument("bad hex digit");
}

} // namespace

BitVec::BitVec(std::size_t length) : size_(static_cast<std::uint32_t>(length)) {
	if (length > kMaxBits) {
		throw std::length_error("BitVec length exceeds " + std::to_string(kMaxBits) + " bits");
	}
}

BitVec BitVec::from_u64(std::size_t length, std::uint64_t value) {
	BitVec v(length);
	v.set_bits(0, length < 64 ? length : 64, value);
	return v;
}

BitVec BitVec::from_hex(std::size_t length, std::string_view hex) {
	BitVec v(length);
	if (hex.size() != 2 * ((length + 7) / 8)) {
		throw std::invalid_argument("hex length does not match bit length");
	}
	for (std::size_t byte = 0; 2 * byte < hex.size(); ++byte) {
		const auto value = static_cast<std::uint64_t>(hex_value(hex[2 * byte]) * 16 + hex_value(hex[2 * byte + 1]));
		const std::size_t pos = 8 * byte;
		const std::size_t count = length - pos < 8 ? length - pos : 8;
		if ((value >> count) != 0) {
			throw std::invalid_argument("hex sets bits beyond length");
		}
		v.set_bits(pos, count, value);
	}
	return v;
}

BitVec BitVec::from_string(std::string_view bits) {
	BitVec v(bits.size());
	for (std::size_t i = 0; i < bits.size(); ++i) {
		if (bits[i] == '1') {
			v.set(i, true);
		} else if (bits[i] != '0') {
			throw std::invalid_argument("bit string must contain only 0 and 1");
		}
	}
	return v;
}

std::uint64_t BitVec::get_bits(std::size_t pos, std::size_t count) const noexcept {
	if (count == 0) {
		return 0;
	}
	const std::size_t w = pos >> 6;
	const std::size_t off = pos & 63;
	std::uint64_t value = words_[w] >> off;
	if (off != 0 && off + count > 64 && w + 1 < kWords) {
		value |= words_[w + 1] << (64 - off);
	}
	if (count < 64) {
		value &= (std::uint64_t{1} << count) - 1;
	}
	return value;
}

void BitVec::set_bits(std::size_t pos, std::size_t count, std::uint64_t value) noexcept {
	for (std::size_t k = 0; k < count; ++k) {
		set(pos + k, (value >> k) & 1u);
	}
}

std::size_t BitVec::weight() const noexcept {
	std::size_t total = 0;
	for (auto w : words_) {
		total += static_cast<std::size_t>(std::popcount(w));
	}
	return total;
}

bool BitVec::is_zero() const noexcept {
	for (auto w : words_) {
		if (w != 0) {
			return false;
		}
	}
	return true;
}

bool BitVec::dot(const BitVec& other) const noexcept {
	std::uint64_t acc = 0;
	for (std::size_t k = 0; k < kWords; ++k) {
		acc ^= words_[k] & other.words_[k];
	}
	return std::popcount(acc) & 1;
}

BitVec& BitVec::operator^=(const BitVec& other) noexcept {
	for (std::size_t k = 0; k < kWords; ++k) {
		words_[k] ^= other.words_[k];
	}
	return *this;
}

BitVec& BitVec::operator&=(const BitVec& other) noexcept {
	for (std::size_t k = 0; k < kWords; ++k) {
		words_[k] &= other.words_[k];
	}
	return *this;
}

bool operator<(const BitVec& a, const BitVec& b) noexcept {
	if (a.size_ != b.size_) {
		return a.size_ < b.size_;
	}
	for (std::size_t k = BitVec::kWords; k-- > 0;) {
		if (a.words_[k] != b.words_[k]) {
			return a.words_[k] < b.words_[k];
		}
	}
	return false;
}

std::string BitVec::to_hex() const {
	std::string out;
	const std::size_t bytes = (size_ + 7) / 8;
	out.reserve(2 * bytes);
	for (std::size_t byte = 0; byte < bytes; ++byte) {
		const auto value = get_bits(8 * byte, 8);
		out.push_back(kHexDigits[value >> 4]);
		out.push_back(kHexDigits[value & 15]);
	}
	return out;
}

std::string BitVec::to_string() const {
	std::string out(size_, '0');
	for (std::size_t i = 0; i < size_; ++i) {
		if (get(i)) {
			out[i] = '1';
		}
	}
	return out;
}

std::size_t BitVec::hash() const noexcept {
	std::uint64_t h = 0x9e3779b97f4a7c15ull ^ size_;
	for (auto w : words_) {
		h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
	}
	return static_cast<std::size_t>(h);
}

std::size_t hamming_distance(const BitVec& a, const BitVec& b) noexcept {
	std::size_t total = 0;
	for (std::size_t k = 0; k < BitVec::kWords; ++k) {
		total += static_cast<std::size_t>(std::popcount(a.word(k) ^ b.word(k)));
	}
	return total;
}

} // namespace mvc
