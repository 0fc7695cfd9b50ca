#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "mvc/galois.hpp"
#include "mvc/rng.hpp"
#include "mvc/symbol.hpp"

using namespace mvc;

namespace {

// Carry-less multiply then reduce bit by bit.
std::uint32_t clmul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t poly, unsigned m) {
	std::uint64_t product = 0;
	for (unsigned k = 0; k < m; ++k) {
		if ((b >> k) & 1u) {
			product ^= static_cast<std::uint64_t>(a) << k;
		}
	}
	for (int k = 2 * static_cast<int>(m) - 2; k >= static_cast<int>(m); --k) {
		if ((product >> k) & 1u) {
			product ^= static_cast<std::uint64_t>(poly) << (k - m);
		}
	}
	return static_cast<std::uint32_t>(product);
}

std::vector<std::vector<unsigned>> subsets(unsigned n, unsigned k) {
	std::vector<std::vector<unsigned>> out;
	for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
		if (static_cast<unsigned>(__builtin_popcount(mask)) != k) {
			continue;
		}
		auto& s = out.emplace_back();
		for (unsigned i = 0; i < n; ++i) {
			if ((mask >> i) & 1u) {
				s.push_back(i);
			}
		}
	}
	return out;
}

} // namespace

TEST_SUITE("galois") {

TEST_CASE("reduction polynomials are irreducible with the right degree") {
	for (unsigned m = 1; m <= 16; ++m) {
		const auto p = reduction_polynomial(m);
		CHECK((p >> m) == 1u);
		CHECK(is_irreducible(p));
		CHECK((p & 1u) == 1u);
	}
	CHECK_FALSE(is_irreducible(0b101));   // x^2 + 1 = (x+1)^2
	CHECK_FALSE(is_irreducible(0b1111));  // x^3+x^2+x+1 = (x+1)^3
	CHECK(reduction_polynomial(8) == 0x11b);
}

TEST_CASE("field degree") {
	CHECK(field_degree_for(1) == 1);
	CHECK(field_degree_for(2) == 1);
	CHECK(field_degree_for(4) == 2);
	CHECK(field_degree_for(5) == 3);
	CHECK(field_degree_for(8) == 3);
	CHECK(field_degree_for(65536) == 16);
}

TEST_CASE("multiplication matches carry-less reduction and forms a field") {
	for (unsigned m = 1; m <= 8; ++m) {
		const GaloisField f(m);
		const auto q = f.order();
		for (std::uint32_t a = 0; a < q; ++a) {
			for (std::uint32_t b = 0; b < q; ++b) {
				CHECK(f.mul(a, b) == clmul_mod(a, b, f.polynomial(), m));
			}
			if (a != 0) {
				CHECK(f.mul(a, f.inv(a)) == 1u);
				CHECK(f.pow(a, q - 1) == 1u);
			}
		}
	}
	const GaloisField big(13);
	Rng rng(3);
	for (int t = 0; t < 2000; ++t) {
		const auto a = static_cast<FieldElement>(uniform_below(rng, big.order()));
		const auto b = static_cast<FieldElement>(uniform_below(rng, big.order()));
		const auto c = static_cast<FieldElement>(uniform_below(rng, big.order()));
		CHECK(big.mul(a, b) == clmul_mod(a, b, big.polynomial(), 13));
		CHECK(big.mul(a, big.add(b, c)) == big.add(big.mul(a, b), big.mul(a, c)));
	}
	CHECK_THROWS(big.inv(0));
}

TEST_CASE("every c-subset of an RS code decodes") {
	for (auto [n, c] : std::vector<std::pair<unsigned, unsigned>>{{4, 2}, {6, 3}, {8, 4}, {5, 5}, {3, 1}}) {
		const RsBlockCodec codec(n, c, 24);
		Rng rng(n * 31 + c);
		for (int t = 0; t < 10; ++t) {
			Message w(24);
			for (unsigned k = 0; k < 24; ++k) {
				w.set(k, rng() & 1u);
			}
			const auto streams = codec.encode_all(w);
			for (const auto& T : subsets(n, c)) {
				std::vector<std::vector<FieldElement>> picked;
				for (auto i : T) {
					picked.push_back(streams[i]);
				}
				CHECK(codec.decode(T, picked) == w);
			}
		}
	}
}

TEST_CASE("decoding needs c distinct symbols") {
	const RsBlockCodec codec(4, 2, 8);
	const auto streams = codec.encode_all(BitVec::from_u64(8, 0x5a));
	std::vector<unsigned> one{0};
	std::vector<std::vector<FieldElement>> s1{streams[0]};
	CHECK_THROWS_AS(codec.decode(one, s1), InsufficientSymbols);
	std::vector<unsigned> repeated{1, 1};
	std::vector<std::vector<FieldElement>> s2{streams[1], streams[1]};
	CHECK_THROWS(codec.decode(repeated, s2));
}

TEST_CASE("padding and stream sizes") {
	const RsBlockCodec codec(8, 4, 10);  // m = 3, blocks of 12 bits
	CHECK(codec.m() == 3);
	CHECK(codec.padded_bits() == 12);
	CHECK(codec.server_bits() == 3);
	const RsBlockCodec exact(4, 2, 8);
	CHECK(exact.padded_bits() == 8);
	CHECK(exact.server_bits() == 4);
}

TEST_CASE("binary generator reproduces the encoder and has full rank") {
	const RsBlockCodec codec(6, 3, 18);
	const auto gen = binary_expand_generator(codec);
	REQUIRE(gen.per_server.size() == 6);
	Rng rng(9);
	for (int t = 0; t < 20; ++t) {
		Message w(18);
		for (unsigned k = 0; k < 18; ++k) {
			w.set(k, rng() & 1u);
		}
		for (unsigned i = 0; i < 6; ++i) {
			const auto bits = gen.per_server[i].left_multiply(w);
			const auto symbols = codec.encode_server(i, w);
			for (unsigned b = 0; b < symbols.size(); ++b) {
				CHECK(bits.get_bits(b * codec.m(), codec.m()) == symbols[b]);
			}
		}
	}
	// Any c servers together have rank K.
	for (const auto& T : subsets(6, 3)) {
		std::vector<BinaryMatrix> parts;
		for (auto i : T) {
			parts.push_back(gen.per_server[i]);
		}
		CHECK(BinaryMatrix::hconcat(parts).rank() == 18);
	}
	CHECK(gen.max_update_efficiency() == 1);
}

TEST_CASE("binary matrix rank") {
	BinaryMatrix m(3, 3);
	m.set(0, 0, true);
	m.set(1, 1, true);
	m.set(2, 0, true);
	m.set(2, 1, true);
	CHECK(m.rank() == 2);
	m.set(2, 2, true);
	CHECK(m.rank() == 3);
}

}

TEST_SUITE("symbol") {

TEST_CASE("bit strings pack MSB first") {
	BitString s;
	s.append_bits(0b101, 3);
	s.append_bits(0xff, 8);
	CHECK(s.size() == 11);
	CHECK(s.bit(0));
	CHECK_FALSE(s.bit(1));
	CHECK(s.to_hex() == "bfe0");
	BitReader r(s);
	CHECK(r.read(3) == 0b101);
	CHECK(r.read(8) == 0xff);
	CHECK(r.remaining() == 0);
	CHECK_THROWS(r.read(1));
}

TEST_CASE("messages round trip through a bit string") {
	Rng rng(5);
	for (unsigned K : {1u, 7u, 64u, 65u, 300u, 512u}) {
		Message w(K);
		for (unsigned k = 0; k < K; ++k) {
			w.set(k, rng() & 1u);
		}
		BitString s;
		s.append_bits(3, 2);
		s.append_message(w);
		BitReader r(s);
		r.skip(2);
		CHECK(r.read_message(K) == w);
	}
}

TEST_CASE("stored symbols serialize and reject malformed input") {
	StoredSymbol sym;
	sym.payload.append_bits(0x1234, 13);
	const auto wire = sym.serialize();
	CHECK(wire.size() == 4 + 2);
	CHECK(StoredSymbol::deserialize(wire) == sym);
	auto bad = wire;
	bad.pop_back();
	CHECK_THROWS_AS(StoredSymbol::deserialize(bad), MalformedSymbol);
	auto dirty = wire;
	dirty.back() |= 1u;  // padding bit set
	CHECK_THROWS_AS(StoredSymbol::deserialize(dirty), MalformedSymbol);
	CHECK(StoredSymbol::deserialize(StoredSymbol{}.serialize()).empty());
}

}
