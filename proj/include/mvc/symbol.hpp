#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvc/bitvec.hpp"

namespace mvc {

class MalformedSymbol : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Growable bit string. Bits are packed big-endian within bytes: bit 0 of the
// string is the MSB of byte 0.
class BitString {
public:
	std::size_t size() const noexcept { return bits_; }
	bool empty() const noexcept { return bits_ == 0; }
	bool bit(std::size_t pos) const;
	const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

	// Appends the low `count` bits of value, most significant first.
	void append_bits(std::uint64_t value, unsigned count);
	// Appends coordinates 1..K in order.
	void append_message(const BitVec& w);
	void append(const BitString& other);

	std::string to_hex() const;

	static BitString from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits);

	friend bool operator==(const BitString&, const BitString&) = default;

private:
	std::vector<std::uint8_t> bytes_;
	std::size_t bits_ = 0;
};

class BitReader {
public:
	explicit BitReader(const BitString& source) : source_(&source) {}

	std::size_t remaining() const noexcept { return source_->size() - pos_; }
	std::uint64_t read(unsigned count);
	BitVec read_message(std::size_t K);
	void skip(std::size_t count);

private:
	const BitString* source_;
	std::size_t pos_ = 0;
};

// What one server stores. overhead_bits is the part of the payload that is
// bookkeeping (record counts) rather than coded content; it is an accounting
// annotation and is not serialized.
struct StoredSymbol {
	BitString payload;
	std::size_t overhead_bits = 0;

	std::size_t bit_length() const noexcept { return payload.size(); }
	std::size_t content_bits() const noexcept { return payload.size() - overhead_bits; }
	bool empty() const noexcept { return payload.empty(); }

	// Wire form: 32-bit big-endian bit length, then ceil(len/8) payload bytes.
	std::vector<std::uint8_t> serialize() const;
	static StoredSymbol deserialize(std::span<const std::uint8_t> wire);

	friend bool operator==(const StoredSymbol& a, const StoredSymbol& b) { return a.payload == b.payload; }
};

} // namespace mvc
