#include "mvc/galois.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <string>

namespace mvc {

namespace {

constexpr std::array<std::uint32_t, 17> kReductionPolynomials = {
	0x0,                                                    // unused
	0x3,     0x7,    0xb,    0x13,   0x25,   0x43,   0x83,   0x11b,
	0x203,   0x409,  0x805,  0x1009, 0x201b, 0x4021, 0x8003, 0x1002b,
};

int poly_degree(std::uint32_t p) {
	return p == 0 ? -1 : 31 - std::countl_zero(p);
}

std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b) {
	const int db = poly_degree(b);
	while (a != 0 && poly_degree(a) >= db) {
		a ^= b << (poly_degree(a) - db);
	}
	return a;
}

} // namespace

std::uint32_t reduction_polynomial(unsigned m) {
	if (m < 1 || m > 16) {
		throw std::domain_error("field degree must lie in [1, 16]");
	}
	return kReductionPolynomials[m];
}

bool is_irreducible(std::uint32_t poly) {
	const int d = poly_degree(poly);
	if (d < 1) {
		return false;
	}
	for (std::uint32_t q = 2; poly_degree(q) <= d / 2; ++q) {
		if (poly_mod(poly, q) == 0) {
			return false;
		}
	}
	return true;
}

unsigned field_degree_for(unsigned n) {
	unsigned m = 1;
	while ((std::uint64_t{1} << m) < n) {
		++m;
	}
	return m;
}

GaloisField::GaloisField(unsigned m) : m_(m), poly_(reduction_polynomial(m)) {
	if (!is_irreducible(poly_)) {
		throw std::logic_error("reduction polynomial is reducible");
	}
	if (m <= 8) {
		const std::uint32_t q = order();
		table_.resize(static_cast<std::size_t>(q) * q);
		for (std::uint32_t a = 0; a < q; ++a) {
			for (std::uint32_t b = 0; b < q; ++b) {
				table_[(a << m_) | b] = static_cast<std::uint16_t>(mul_slow(a, b));
			}
		}
	}
}

FieldElement GaloisField::mul_slow(FieldElement a, FieldElement b) const noexcept {
	std::uint32_t acc = 0;
	while (b != 0) {
		if (b & 1u) {
			acc ^= a;
		}
		b >>= 1;
		a <<= 1;
		if (a & order()) {
			a ^= poly_;
		}
	}
	return acc;
}

FieldElement GaloisField::pow(FieldElement a, std::uint64_t e) const noexcept {
	FieldElement result = 1;
	while (e != 0) {
		if (e & 1u) {
			result = mul(result, a);
		}
		a = mul(a, a);
		e >>= 1;
	}
	return result;
}

FieldElement GaloisField::inv(FieldElement a) const {
	if (a == 0) {
		throw std::domain_error("zero has no inverse");
	}
	return pow(a, order() - 2);
}

RsCode::RsCode(GaloisField field, unsigned n, unsigned c) : field_(std::move(field)), n_(n), c_(c) {
	if (c < 1 || c > n) {
		throw std::domain_error("RS code needs 1 <= c <= n");
	}
	if (n > field_.order()) {
		throw std::domain_error("field too small for " + std::to_string(n) + " distinct evaluation points");
	}
	points_.resize(n);
	for (unsigned i = 0; i < n; ++i) {
		points_[i] = i;
	}
	generator_.assign(c, std::vector<FieldElement>(n));
	for (unsigned j = 0; j < c; ++j) {
		for (unsigned i = 0; i < n; ++i) {
			generator_[j][i] = field_.pow(points_[i], j);
		}
	}
}

FieldElement RsCode::encode_symbol(unsigned server, std::span<const FieldElement> block) const {
	FieldElement acc = 0;
	for (unsigned j = 0; j < c_; ++j) {
		acc ^= field_.mul(block[j], generator_[j][server]);
	}
	return acc;
}

std::vector<FieldElement> RsCode::encode_block(std::span<const FieldElement> block) const {
	if (block.size() != c_) {
		throw std::domain_error("block must hold exactly c symbols");
	}
	std::vector<FieldElement> out(n_);
	for (unsigned i = 0; i < n_; ++i) {
		out[i] = encode_symbol(i, block);
	}
	return out;
}

std::vector<FieldElement> RsCode::decoding_matrix(std::span<const unsigned> positions) const {
	if (positions.size() < c_) {
		throw InsufficientSymbols("need " + std::to_string(c_) + " symbols, got " + std::to_string(positions.size()));
	}
	if (positions.size() != c_) {
		throw std::domain_error("decoding takes exactly c symbols");
	}
	for (unsigned k = 0; k < c_; ++k) {
		if (positions[k] >= n_) {
			throw std::domain_error("server index out of range");
		}
		for (unsigned l = 0; l < k; ++l) {
			if (positions[l] == positions[k]) {
				throw std::domain_error("repeated server index");
			}
		}
	}
	// Gauss-Jordan on [V | I], V[k][j] = lambda_{pos_k}^j.
	const unsigned w = 2 * c_;
	std::vector<FieldElement> a(static_cast<std::size_t>(c_) * w, 0);
	for (unsigned k = 0; k < c_; ++k) {
		for (unsigned j = 0; j < c_; ++j) {
			a[k * w + j] = generator_[j][positions[k]];
		}
		a[k * w + c_ + k] = 1;
	}
	for (unsigned col = 0; col < c_; ++col) {
		unsigned pivot = col;
		while (pivot < c_ && a[pivot * w + col] == 0) {
			++pivot;
		}
		if (pivot == c_) {
			throw std::logic_error("singular Vandermonde system");
		}
		if (pivot != col) {
			for (unsigned j = 0; j < w; ++j) {
				std::swap(a[pivot * w + j], a[col * w + j]);
			}
		}
		const FieldElement scale = field_.inv(a[col * w + col]);
		for (unsigned j = 0; j < w; ++j) {
			a[col * w + j] = field_.mul(a[col * w + j], scale);
		}
		for (unsigned r = 0; r < c_; ++r) {
			const FieldElement f = a[r * w + col];
			if (r == col || f == 0) {
				continue;
			}
			for (unsigned j = 0; j < w; ++j) {
				a[r * w + j] ^= field_.mul(f, a[col * w + j]);
			}
		}
	}
	std::vector<FieldElement> inverse(static_cast<std::size_t>(c_) * c_);
	for (unsigned j = 0; j < c_; ++j) {
		for (unsigned k = 0; k < c_; ++k) {
			inverse[j * c_ + k] = a[j * w + c_ + k];
		}
	}
	return inverse;
}

std::vector<FieldElement> RsCode::decode_block(std::span<const unsigned> positions,
                                               std::span<const FieldElement> symbols) const {
	if (symbols.size() != positions.size()) {
		throw std::domain_error("positions and symbols differ in length");
	}
	const auto inverse = decoding_matrix(positions);
	std::vector<FieldElement> block(c_, 0);
	for (unsigned j = 0; j < c_; ++j) {
		for (unsigned k = 0; k < c_; ++k) {
			block[j] ^= field_.mul(inverse[j * c_ + k], symbols[k]);
		}
	}
	return block;
}

RsBlockCodec::RsBlockCodec(unsigned n, unsigned c, unsigned K, unsigned m)
	: code_(GaloisField(m), n, c), K_(K) {
	const unsigned chunk = c * m;
	blocks_ = (K + chunk - 1) / chunk;
	padded_ = blocks_ * chunk;
}

RsBlockCodec::RsBlockCodec(unsigned n, unsigned c, unsigned K) : RsBlockCodec(n, c, K, field_degree_for(n)) {}

FieldElement RsBlockCodec::message_symbol(const Message& w, unsigned index) const {
	const unsigned pos = index * m();
	if (pos >= K_) {
		return 0;
	}
	return static_cast<FieldElement>(w.get_bits(pos, std::min(m(), K_ - pos)));
}

std::vector<FieldElement> RsBlockCodec::encode_server(unsigned server, const Message& w) const {
	if (w.size() != K_) {
		throw std::domain_error("message length does not match the codec");
	}
	const unsigned c = code_.c();
	std::vector<FieldElement> block(c);
	std::vector<FieldElement> out(blocks_);
	for (unsigned b = 0; b < blocks_; ++b) {
		for (unsigned j = 0; j < c; ++j) {
			block[j] = message_symbol(w, b * c + j);
		}
		out[b] = code_.encode_symbol(server, block);
	}
	return out;
}

std::vector<std::vector<FieldElement>> RsBlockCodec::encode_all(const Message& w) const {
	std::vector<std::vector<FieldElement>> out(n());
	for (unsigned i = 0; i < n(); ++i) {
		out[i] = encode_server(i, w);
	}
	return out;
}

Message RsBlockCodec::decode(std::span<const unsigned> servers,
                             std::span<const std::vector<FieldElement>> streams) const {
	const unsigned c = code_.c();
	if (servers.size() < c) {
		throw InsufficientSymbols("need " + std::to_string(c) + " servers, got " + std::to_string(servers.size()));
	}
	if (streams.size() != servers.size()) {
		throw std::domain_error("servers and streams differ in length");
	}
	for (const auto& s : streams) {
		if (s.size() != blocks_) {
			throw std::domain_error("symbol stream has the wrong length");
		}
	}
	const auto inverse = code_.decoding_matrix(servers);
	const auto& field = code_.field();
	Message w(K_);
	for (unsigned b = 0; b < blocks_; ++b) {
		for (unsigned j = 0; j < c; ++j) {
			FieldElement sym = 0;
			for (unsigned k = 0; k < c; ++k) {
				sym ^= field.mul(inverse[j * c + k], streams[k][b]);
			}
			const unsigned pos = (b * c + j) * m();
			if (pos < K_) {
				w.set_bits(pos, std::min(m(), K_ - pos), sym);
			}
		}
	}
	return w;
}

BinaryMatrix::BinaryMatrix(unsigned rows, unsigned cols) : rows_(rows), cols_(cols), data_(rows, BitVec(cols)) {}

BitVec BinaryMatrix::left_multiply(const BitVec& x) const {
	if (x.size() != rows_) {
		throw std::domain_error("vector length does not match matrix rows");
	}
	BitVec out(cols_);
	for (unsigned r = 0; r < rows_; ++r) {
		if (x.get(r)) {
			out ^= data_[r];
		}
	}
	return out;
}

unsigned BinaryMatrix::rank() const {
	std::vector<BitVec> rows = data_;
	unsigned rank = 0;
	for (unsigned col = 0; col < cols_ && rank < rows_; ++col) {
		unsigned pivot = rank;
		while (pivot < rows_ && !rows[pivot].get(col)) {
			++pivot;
		}
		if (pivot == rows_) {
			continue;
		}
		std::swap(rows[pivot], rows[rank]);
		for (unsigned r = 0; r < rows_; ++r) {
			if (r != rank && rows[r].get(col)) {
				rows[r] ^= rows[rank];
			}
		}
		++rank;
	}
	return rank;
}

BinaryMatrix BinaryMatrix::hconcat(std::span<const BinaryMatrix> parts) {
	if (parts.empty()) {
		return BinaryMatrix(0, 0);
	}
	unsigned cols = 0;
	for (const auto& p : parts) {
		if (p.rows() != parts[0].rows()) {
			throw std::domain_error("hconcat of matrices with different row counts");
		}
		cols += p.cols();
	}
	BinaryMatrix out(parts[0].rows(), cols);
	unsigned offset = 0;
	for (const auto& p : parts) {
		for (unsigned r = 0; r < p.rows(); ++r) {
			for (unsigned c = 0; c < p.cols(); ++c) {
				if (p.get(r, c)) {
					out.set(r, offset + c, true);
				}
			}
		}
		offset += p.cols();
	}
	return out;
}

unsigned BinaryGenerator::max_update_efficiency() const {
	unsigned t = 0;
	for (auto v : update_efficiency) {
		t = std::max(t, v);
	}
	return t;
}

BinaryMatrix BinaryGenerator::full() const {
	return BinaryMatrix::hconcat(per_server);
}

BinaryGenerator binary_expand_generator(const RsBlockCodec& codec) {
	const unsigned rows = codec.padded_bits();
	const unsigned cols = codec.server_bits();
	const unsigned m = codec.m();
	const unsigned c = codec.c();
	BinaryGenerator g;
	g.symbol_bits = m;
	g.per_server.assign(codec.n(), BinaryMatrix(rows, cols));
	g.update_efficiency.assign(codec.n(), 0);

	// Row r is the image of the unit message e_r. Padding rows are computed
	// on the padded message directly, so the per-block structure is explicit.
	const RsCode& code = codec.code();
	std::vector<FieldElement> block(c);
	for (unsigned r = 0; r < rows; ++r) {
		const unsigned symbol_index = r / m;
		const unsigned b = symbol_index / c;
		std::fill(block.begin(), block.end(), 0);
		block[symbol_index % c] = FieldElement{1} << (r % m);
		for (unsigned i = 0; i < codec.n(); ++i) {
			const FieldElement sym = code.encode_symbol(i, block);
			for (unsigned bit = 0; bit < m; ++bit) {
				if ((sym >> bit) & 1u) {
					g.per_server[i].set(r, b * m + bit, true);
				}
			}
		}
	}
	for (unsigned i = 0; i < codec.n(); ++i) {
		for (unsigned r = 0; r < rows; ++r) {
			unsigned touched = 0;
			for (unsigned b = 0; b < codec.blocks(); ++b) {
				if (g.per_server[i].row(r).get_bits(b * m, m) != 0) {
					++touched;
				}
			}
			g.update_efficiency[i] = std::max(g.update_efficiency[i], touched);
		}
	}
	return g;
}

} // namespace mvc
