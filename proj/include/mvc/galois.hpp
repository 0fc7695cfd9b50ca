#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mvc/bitvec.hpp"

namespace mvc {

using FieldElement = std::uint32_t;

// Reduction polynomial used for GF(2^m), m in [1, 16]: among the irreducible
// polynomials of degree m with a nonzero constant term, the one of lowest
// weight, ties broken by smallest integer value. The bit mask includes x^m.
std::uint32_t reduction_polynomial(unsigned m);

// Exhaustive trial division by every polynomial of degree 1..deg/2.
bool is_irreducible(std::uint32_t poly);

// Smallest m with 2^m >= n, at least 1.
unsigned field_degree_for(unsigned n);

class GaloisField {
public:
	explicit GaloisField(unsigned m);

	unsigned degree() const noexcept { return m_; }
	std::uint32_t polynomial() const noexcept { return poly_; }
	std::uint32_t order() const noexcept { return std::uint32_t{1} << m_; }

	FieldElement add(FieldElement a, FieldElement b) const noexcept { return a ^ b; }
	FieldElement mul(FieldElement a, FieldElement b) const noexcept {
		if (!table_.empty()) {
			return table_[(a << m_) | b];
		}
		return mul_slow(a, b);
	}
	FieldElement pow(FieldElement a, std::uint64_t e) const noexcept;
	FieldElement inv(FieldElement a) const;

private:
	unsigned m_;
	std::uint32_t poly_;
	std::vector<std::uint16_t> table_;  // full product table for m <= 8

	FieldElement mul_slow(FieldElement a, FieldElement b) const noexcept;
};

// (n, c) Reed-Solomon code by evaluation of the message polynomial at
// lambda_i = i (as field elements 0..n-1). Symbol i of a block b is
// sum_j b_j * lambda_i^j.
class RsCode {
public:
	RsCode(GaloisField field, unsigned n, unsigned c);

	const GaloisField& field() const noexcept { return field_; }
	unsigned n() const noexcept { return n_; }
	unsigned c() const noexcept { return c_; }
	FieldElement evaluation_point(unsigned i) const { return points_.at(i); }
	// generator()[j][i] = lambda_i^j
	const std::vector<std::vector<FieldElement>>& generator() const noexcept { return generator_; }

	std::vector<FieldElement> encode_block(std::span<const FieldElement> block) const;
	FieldElement encode_symbol(unsigned server, std::span<const FieldElement> block) const;

	// Inverse of the c x c Vandermonde system for the given positions;
	// row-major, decoded_j = sum_k inverse[j*c + k] * symbol_k.
	std::vector<FieldElement> decoding_matrix(std::span<const unsigned> positions) const;

	std::vector<FieldElement> decode_block(std::span<const unsigned> positions,
	                                       std::span<const FieldElement> symbols) const;

private:
	GaloisField field_;
	unsigned n_;
	unsigned c_;
	std::vector<FieldElement> points_;
	std::vector<std::vector<FieldElement>> generator_;
};

class InsufficientSymbols : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Message <-> per-server symbol streams. The message is zero-padded to a
// multiple of c*m bits; every m consecutive bits form one symbol (first bit
// is the LSB), every c consecutive symbols form one block.
class RsBlockCodec {
public:
	RsBlockCodec(unsigned n, unsigned c, unsigned K, unsigned m);
	// m = field_degree_for(n).
	RsBlockCodec(unsigned n, unsigned c, unsigned K);

	const RsCode& code() const noexcept { return code_; }
	unsigned n() const noexcept { return code_.n(); }
	unsigned c() const noexcept { return code_.c(); }
	unsigned m() const noexcept { return code_.field().degree(); }
	unsigned message_bits() const noexcept { return K_; }
	unsigned padded_bits() const noexcept { return padded_; }
	unsigned blocks() const noexcept { return blocks_; }
	// Symbols stored per server per version (one per block).
	unsigned symbols_per_server() const noexcept { return blocks_; }
	unsigned server_bits() const noexcept { return blocks_ * m(); }

	std::vector<FieldElement> encode_server(unsigned server, const Message& w) const;
	std::vector<std::vector<FieldElement>> encode_all(const Message& w) const;

	// servers.size() must equal c, all distinct; streams[k] belongs to servers[k].
	Message decode(std::span<const unsigned> servers, std::span<const std::vector<FieldElement>> streams) const;

private:
	RsCode code_;
	unsigned K_;
	unsigned padded_;
	unsigned blocks_;

	FieldElement message_symbol(const Message& w, unsigned index) const;
};

// Dense GF(2) matrix, rows as bit vectors.
class BinaryMatrix {
public:
	BinaryMatrix(unsigned rows, unsigned cols);

	unsigned rows() const noexcept { return rows_; }
	unsigned cols() const noexcept { return cols_; }
	bool get(unsigned r, unsigned c) const { return data_.at(r).get(c); }
	void set(unsigned r, unsigned c, bool v) { data_.at(r).set(c, v); }
	const BitVec& row(unsigned r) const { return data_.at(r); }

	// x^T * this, x of length rows().
	BitVec left_multiply(const BitVec& x) const;
	unsigned rank() const;
	static BinaryMatrix hconcat(std::span<const BinaryMatrix> parts);

private:
	unsigned rows_;
	unsigned cols_;
	std::vector<BitVec> data_;
};

// Binary image of the per-server encoders: server i's K_pad x (K_pad/c)
// matrix plus its update efficiency, the maximum over message bits of the
// number of m-bit symbols the bit touches.
struct BinaryGenerator {
	unsigned symbol_bits = 0;
	std::vector<BinaryMatrix> per_server;
	std::vector<unsigned> update_efficiency;  // t^(i), in symbols

	unsigned max_update_efficiency() const;
	// The full K_pad x n*K_pad/c generator (G^(1), ..., G^(n)).
	BinaryMatrix full() const;
};

BinaryGenerator binary_expand_generator(const RsBlockCodec& codec);

} // namespace mvc
