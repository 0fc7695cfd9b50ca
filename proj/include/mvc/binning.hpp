#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvc/schemes.hpp"

namespace mvc {

struct BinningParams {
	unsigned n = 0;
	unsigned c = 0;
	CorrelationModel model;
	double epsilon = 0;  // target error, 0 < epsilon < 1

	BinningParams() = default;
	BinningParams(unsigned n_, unsigned c_, CorrelationModel model_, double epsilon_);

	// -log2(epsilon * 2^(-nu*n)), the per-index error budget in bits.
	HighFloat error_exponent() const;
	HighFloat log2_volume() const;
};

// log2 of a positive double; exact when x is a power of two.
HighFloat log2_real(double x);

// c times a per-server index length, kept as integer coefficients of
// K, log2 Vol(r,K) and the error exponent so that sums and differences of
// rates are exact.
struct LinearRate {
	std::int64_t k = 0;
	std::int64_t log_volume = 0;
	std::int64_t constant = 0;
	std::int64_t exponent = 0;

	HighFloat value(const BinningParams& p) const;
	LinearRate& operator+=(const LinearRate& o);
	friend LinearRate operator+(LinearRate a, const LinearRate& b) { return a += b; }
	friend LinearRate operator-(LinearRate a, const LinearRate& b);
	std::string to_string() const;
};

// c * K R^(i)_{s_j} for every s_j in s, in increasing order.
std::vector<LinearRate> version_rates(const BinningParams& p, VersionSet s);
// Index lengths in bits, ceil(K R^(i)_{s_j} / c - reduction/c).
std::vector<unsigned> version_bits(const BinningParams& p, VersionSet s, double reduction_bits = 0);
// Longest index any server ever stores: ceil((K + (nu-1)(log2 Vol + 1) + E)/c).
unsigned index_capacity(const BinningParams& p);

enum class BinningKind { RandomPrf, ExactTable, Linear };
std::string to_string(BinningKind kind);
BinningKind binning_kind_from_string(const std::string& name);

// Bin assignment for every (server, version). Index bit k of a w is bit k of
// the capacity-length index; a shorter index is the prefix of a longer one.
// "Keys" pack the first `bits` index bits into an integer, first bit most
// significant.
class BinningCodebook {
public:
	BinningCodebook(BinningKind kind, std::uint64_t seed, BinningParams params);

	BinningKind kind() const noexcept { return kind_; }
	std::uint64_t seed() const noexcept { return seed_; }
	const BinningParams& params() const noexcept { return params_; }
	unsigned capacity() const noexcept { return capacity_; }

	BitString bin_index(ServerIndex i, VersionIndex u, const Message& w, unsigned bits) const;
	// bits <= 64.
	std::uint64_t bin_key(ServerIndex i, VersionIndex u, const Message& w, unsigned bits) const;

	// Linear kind only: the K x capacity generator of (i, u).
	BinaryMatrix generator(ServerIndex i, VersionIndex u) const;

	nlohmann::json descriptor() const;
	static BinningCodebook from_descriptor(const nlohmann::json& j);

private:
	BinningKind kind_;
	std::uint64_t seed_;
	BinningParams params_;
	unsigned capacity_;
	unsigned words_;  // ceil(capacity / 64)
	// Linear: columns_[(i*nu + u-1)*capacity + k] is index column k.
	std::vector<BitVec> columns_;
	// Exact table: table_[((i*nu + u-1) << K) + w] is the first index word.
	std::vector<std::uint64_t> table_;

	std::uint64_t index_word(ServerIndex i, VersionIndex u, const Message& w, unsigned word) const;
};

struct BinningOptions {
	BinningKind kind = BinningKind::RandomPrf;
	std::uint64_t seed = 1;
	// Subtracted from every K R^(i) before dividing by c; for ablations.
	double reduction_bits = 0;
};

// Random or linear binning with possible-set decoding.
class BinningScheme final : public MvcScheme {
public:
	BinningScheme(BinningParams params, BinningOptions options = {});

	std::string name() const override { return "binning"; }
	const BinningCodebook& codebook() const noexcept { return codebook_; }
	const BinningParams& params() const noexcept { return params_; }
	const BinningOptions& options() const noexcept { return options_; }

	StoredSymbol encode(ServerIndex i, VersionSet s, std::span<const Message> received) const override;
	// Finds every chain (w_{u_1}, ..., w_{u_L}) over the versions seen by T up
	// to their latest common version u_L that is consistent with the stored
	// indices, and succeeds iff all such chains agree on w_{u_L}.
	DecodeResult decode(std::span<const ServerIndex> T, const SystemState& state,
	                    std::span<const StoredSymbol> symbols) const override;
	AnalyticCost analytic_cost() const override;

private:
	BinningParams params_;
	BinningOptions options_;
	BinningCodebook codebook_;
	// Per (i, u): all w sorted by full index key, for K <= 16.
	std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> buckets_;
	std::vector<std::vector<std::uint64_t>> keys_;

	std::uint64_t full_key(ServerIndex i, VersionIndex u, const Message& w) const;
};

struct RateInequality {
	unsigned from = 1;  // the sum runs over u_from..u_L
	HighFloat lhs;
	HighFloat rhs;
	HighFloat slack;
	bool holds = false;
};

struct RegionCheck {
	bool satisfied = true;
	std::vector<RateInequality> inequalities;
	HighFloat min_slack;
};

// Relaxed region for decode scenario u_1 < ... < u_L with per-version total
// rates (bits over the decoding servers): the suffix sums from i = 2..L and
// the full sum including the +K term.
RegionCheck rate_region_check(const BinningParams& p, std::span<const VersionIndex> scenario,
                              std::span<const LinearRate> totals);
RegionCheck rate_region_check(const BinningParams& p, std::span<const VersionIndex> scenario,
                              std::span<const double> total_bits);

// Scenario and totals induced by the rate allocation for a state and a
// decoding set T; nullopt if T has no common version.
std::optional<RegionCheck> allocation_region_check(const BinningParams& p, const SystemState& state,
                                                   std::span<const ServerIndex> T);

// P(u^T G = 0) for a K x M matrix G with i.i.d. Bernoulli(p) entries and
// w_H(u) = w.
double even_parity_probability(double p, unsigned w, unsigned M);

struct ParityEstimate {
	double estimate = 0;
	double standard_error = 0;
	std::uint64_t draws = 0;
};
ParityEstimate estimate_even_parity(double p, unsigned w, unsigned M, std::uint64_t draws, std::uint64_t seed);

struct BinningCost {
	double closed_form = 0;     // for a server holding all versions
	double allocation_sum = 0;  // sum of the per-version rates for S(i) = [nu]
	double integer_bits = 0;    // max over S(i) of the summed index lengths
	VersionSet worst_set;
	double discrepancy = 0;     // allocation_sum - closed_form
};
BinningCost binning_worst_case_cost(const BinningParams& p);

double binary_entropy(double x);

struct Example1Report {
	double delta = 0;
	double h = 0;           // H(delta)
	double h_star = 0;      // H(delta * delta), delta * delta = 2 delta (1 - delta)
	double r1 = 0, r2 = 0, r3 = 0;  // normalized totals per version
	struct Exclusion {
		std::string subset;
		std::string requirement;
		double have = 0;
		double need = 0;
		bool excluded = false;
	};
	std::vector<Exclusion> exclusions;
	bool all_excluded() const;
};
Example1Report example1_rate_comparison(double delta);

} // namespace mvc
