#include "mvc/symbol.hpp"

#include <cstdio>

namespace mvc {

bool BitString::bit(std::size_t pos) const {
	if (pos >= bits_) {
		throw std::out_of_range("bit position past end of bit string");
	}
	return (bytes_[pos >> 3] >> (7 - (pos & 7))) & 1u;
}

void BitString::append_bits(std::uint64_t value, unsigned count) {
	if (count > 64) {
		throw std::domain_error("append_bits takes at most 64 bits");
	}
	for (unsigned k = count; k-- > 0;) {
		if ((bits_ & 7) == 0) {
			bytes_.push_back(0);
		}
		if ((value >> k) & 1u) {
			bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ & 7));
		}
		++bits_;
	}
}

void BitString::append_message(const BitVec& w) {
	for (std::size_t p = 0; p < w.size(); ++p) {
		append_bits(w.get(p) ? 1 : 0, 1);
	}
}

void BitString::append(const BitString& other) {
	for (std::size_t p = 0; p < other.size(); ++p) {
		append_bits(other.bit(p) ? 1 : 0, 1);
	}
}

std::string BitString::to_hex() const {
	std::string out;
	out.reserve(bytes_.size() * 2);
	char buf[3];
	for (auto b : bytes_) {
		std::snprintf(buf, sizeof buf, "%02x", b);
		out += buf;
	}
	return out;
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits) {
	if (bytes.size() != (bits + 7) / 8) {
		throw MalformedSymbol("byte count does not match bit length");
	}
	BitString s;
	s.bytes_.assign(bytes.begin(), bytes.end());
	s.bits_ = bits;
	if (bits % 8 != 0 && (s.bytes_.back() & (0xffu >> (bits % 8))) != 0) {
		throw MalformedSymbol("nonzero padding bits");
	}
	return s;
}

std::uint64_t BitReader::read(unsigned count) {
	if (count > 64) {
		throw std::domain_error("read takes at most 64 bits");
	}
	if (count > remaining()) {
		throw MalformedSymbol("symbol truncated");
	}
	std::uint64_t v = 0;
	for (unsigned k = 0; k < count; ++k) {
		v = (v << 1) | (source_->bit(pos_++) ? 1u : 0u);
	}
	return v;
}

BitVec BitReader::read_message(std::size_t K) {
	if (K > remaining()) {
		throw MalformedSymbol("symbol truncated");
	}
	BitVec w(K);
	for (std::size_t p = 0; p < K; ++p) {
		w.set(p, source_->bit(pos_++));
	}
	return w;
}

void BitReader::skip(std::size_t count) {
	if (count > remaining()) {
		throw MalformedSymbol("symbol truncated");
	}
	pos_ += count;
}

std::vector<std::uint8_t> StoredSymbol::serialize() const {
	const auto len = static_cast<std::uint32_t>(payload.size());
	std::vector<std::uint8_t> out;
	out.reserve(4 + payload.bytes().size());
	for (int shift = 24; shift >= 0; shift -= 8) {
		out.push_back(static_cast<std::uint8_t>(len >> shift));
	}
	for (auto b : payload.bytes()) {
		out.push_back(b);
	}
	return out;
}

StoredSymbol StoredSymbol::deserialize(std::span<const std::uint8_t> wire) {
	if (wire.size() < 4) {
		throw MalformedSymbol("missing length prefix");
	}
	const std::size_t len = (std::size_t{wire[0]} << 24) | (std::size_t{wire[1]} << 16) | (std::size_t{wire[2]} << 8) |
	                        std::size_t{wire[3]};
	StoredSymbol s;
	s.payload = BitString::from_bytes(wire.subspan(4), len);
	return s;
}

} // namespace mvc
