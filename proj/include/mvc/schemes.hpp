#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvc/galois.hpp"
#include "mvc/model.hpp"
#include "mvc/symbol.hpp"

namespace mvc {

enum class DecodeStatus { Decoded, Null, Error };

struct DecodeResult {
	DecodeStatus status = DecodeStatus::Null;
	Message value;
	std::string detail;

	static DecodeResult decoded(Message w) { return {DecodeStatus::Decoded, std::move(w), {}}; }
	static DecodeResult null() { return {DecodeStatus::Null, {}, {}}; }
	static DecodeResult error(std::string why) { return {DecodeStatus::Error, {}, std::move(why)}; }
};

std::string to_string(DecodeStatus s);

struct SchemeConfig {
	unsigned n = 0;
	unsigned c = 0;
	CorrelationModel model;

	SchemeConfig() = default;
	SchemeConfig(unsigned n_, unsigned c_, CorrelationModel model_);
};

// Table-I style cost of one scheme. `formula` is the real-valued expression
// at the nominal K; `integer_bound` bounds the realized content bits of any
// stored symbol (after padding and rounding to whole bits).
struct AnalyticCost {
	double formula = 0;
	double integer_bound = 0;
	unsigned padded_K = 0;
	std::string expression;
};

// Encoders see only (i, S(i), W_{S(i)}); decoders see T, the state
// descriptor and the |T| stored symbols. Implementations are immutable and
// safe to call concurrently.
class MvcScheme {
public:
	explicit MvcScheme(SchemeConfig config) : config_(std::move(config)) {}
	virtual ~MvcScheme() = default;

	virtual std::string name() const = 0;
	const SchemeConfig& config() const noexcept { return config_; }
	unsigned n() const noexcept { return config_.n; }
	unsigned c() const noexcept { return config_.c; }
	unsigned nu() const noexcept { return config_.model.nu; }
	unsigned K() const noexcept { return config_.model.K; }
	const CorrelationModel& model() const noexcept { return config_.model; }

	// received[k] is the version numbered by the k-th smallest member of s.
	virtual StoredSymbol encode(ServerIndex i, VersionSet s, std::span<const Message> received) const = 0;
	virtual DecodeResult decode(std::span<const ServerIndex> T, const SystemState& state,
	                            std::span<const StoredSymbol> symbols) const = 0;

	// Number of servers a decoder is handed.
	virtual unsigned read_arity() const { return config_.c; }
	virtual AnalyticCost analytic_cost() const = 0;
	virtual bool data_dependent_cost() const { return false; }

	StoredSymbol encode_tuple(ServerIndex i, VersionSet s, const VersionTuple& tuple) const;

private:
	SchemeConfig config_;
};

using SchemePtr = std::shared_ptr<const MvcScheme>;

// Every server keeps a full copy of its newest version.
class ReplicationScheme final : public MvcScheme {
public:
	explicit ReplicationScheme(SchemeConfig config);
	std::string name() const override { return "replication"; }
	StoredSymbol encode(ServerIndex i, VersionSet s, std::span<const Message> received) const override;
	DecodeResult decode(std::span<const ServerIndex> T, const SystemState& state,
	                    std::span<const StoredSymbol> symbols) const override;
	unsigned read_arity() const override { return 1; }
	AnalyticCost analytic_cost() const override;
};

// Field degree for the plain MDS and delta schemes: the smallest
// m >= ceil(log2 n), m <= 16, with c*m dividing K, so no padding is needed;
// ceil(log2 n) if there is none.
unsigned unpadded_field_degree(unsigned n, unsigned c, unsigned K);

// One RS codeword symbol stream per received version.
class MdsScheme final : public MvcScheme {
public:
	explicit MdsScheme(SchemeConfig config);
	std::string name() const override { return "mds"; }
	const RsBlockCodec& codec() const noexcept { return codec_; }
	StoredSymbol encode(ServerIndex i, VersionSet s, std::span<const Message> received) const override;
	DecodeResult decode(std::span<const ServerIndex> T, const SystemState& state,
	                    std::span<const StoredSymbol> symbols) const override;
	AnalyticCost analytic_cost() const override;

private:
	RsBlockCodec codec_;
};

// RS symbols of the first received version, then for each later version the
// ball rank of its XOR difference from the previous received version.
class DeltaScheme final : public MvcScheme {
public:
	explicit DeltaScheme(SchemeConfig config);
	std::string name() const override { return "delta"; }
	const RsBlockCodec& codec() const noexcept { return codec_; }
	// Bits of the difference index for a version gap of `gap`.
	unsigned index_bits(unsigned gap) const;
	StoredSymbol encode(ServerIndex i, VersionSet s, std::span<const Message> received) const override;
	DecodeResult decode(std::span<const ServerIndex> T, const SystemState& state,
	                    std::span<const StoredSymbol> symbols) const override;
	AnalyticCost analytic_cost() const override;

	// Index of the difference y among the ball for a version gap, and back.
	BigInt rank(unsigned gap, const Message& y) const;
	std::optional<Message> unrank(unsigned gap, const BigInt& index) const;

private:
	RsBlockCodec codec_;
	std::vector<BallIndexer> balls_;  // by gap - 1
	std::vector<unsigned> index_bits_;
};

// RS code with m = ceil(log2 n). Later versions are stored as (index, value)
// records for the symbols that changed, preceded by a record count, or as a
// full re-encoding when the records would not be shorter.
class RsUpdateScheme final : public MvcScheme {
public:
	explicit RsUpdateScheme(SchemeConfig config);
	std::string name() const override { return "rs-update"; }
	const RsBlockCodec& codec() const noexcept { return codec_; }
	unsigned index_bits() const noexcept { return index_bits_; }
	unsigned count_bits() const noexcept { return count_bits_; }
	bool records_shorter(unsigned changed) const noexcept;
	StoredSymbol encode(ServerIndex i, VersionSet s, std::span<const Message> received) const override;
	DecodeResult decode(std::span<const ServerIndex> T, const SystemState& state,
	                    std::span<const StoredSymbol> symbols) const override;
	AnalyticCost analytic_cost() const override;
	bool data_dependent_cost() const override { return true; }
	// Per-version update cost with the real-valued log.
	double asymptotic_update_cost() const;

private:
	RsBlockCodec codec_;
	unsigned index_bits_;
	unsigned count_bits_;
};

// Negative control: each server keeps only the RS symbols of its newest
// version. Fails whenever the servers of T disagree on their newest version.
class LatestOnlyScheme final : public MvcScheme {
public:
	explicit LatestOnlyScheme(SchemeConfig config);
	std::string name() const override { return "latest-only"; }
	StoredSymbol encode(ServerIndex i, VersionSet s, std::span<const Message> received) const override;
	DecodeResult decode(std::span<const ServerIndex> T, const SystemState& state,
	                    std::span<const StoredSymbol> symbols) const override;
	AnalyticCost analytic_cost() const override;

private:
	RsBlockCodec codec_;
};

// Turns a scheme decoding from c servers into one decoding from any c_R
// servers under write quorum c_W, c = c_W + c_R - n: the decoder picks the
// c-subset of T with the highest latest common version (first in
// lexicographic order on ties) and delegates.
class QuorumBridge final : public MvcScheme {
public:
	QuorumBridge(SchemePtr inner, unsigned c_w, unsigned c_r);
	std::string name() const override { return inner_->name(); }
	const MvcScheme& inner() const noexcept { return *inner_; }
	unsigned c_w() const noexcept { return c_w_; }
	unsigned c_r() const noexcept { return c_r_; }
	StoredSymbol encode(ServerIndex i, VersionSet s, std::span<const Message> received) const override {
		return inner_->encode(i, s, received);
	}
	DecodeResult decode(std::span<const ServerIndex> T, const SystemState& state,
	                    std::span<const StoredSymbol> symbols) const override;
	unsigned read_arity() const override { return c_r_; }
	AnalyticCost analytic_cost() const override { return inner_->analytic_cost(); }
	bool data_dependent_cost() const override { return inner_->data_dependent_cost(); }

private:
	SchemePtr inner_;
	unsigned c_w_;
	unsigned c_r_;
};

SchemePtr quorum_bridge(SchemePtr inner, unsigned c_w, unsigned c_r);

struct CostSearchOptions {
	std::uint64_t cap = kDefaultEnumerationCap;
	unsigned random_tuples = 64;
	std::uint64_t seed = 1;
};

struct WorstCaseCost {
	std::string scheme;
	AnalyticCost analytic;
	std::size_t measured_bits = 0;        // max content bits
	std::size_t measured_total_bits = 0;  // max payload bits, bookkeeping included
	std::size_t overhead_bits = 0;        // bookkeeping bits of the worst payload
	ServerIndex worst_server = 0;
	VersionSet worst_set;
	std::optional<VersionTuple> witness;
	bool exhaustive = false;
	std::uint64_t tuples_examined = 0;
};

// Maximum stored size over every server, every S(i) and either all of A
// (when |A| * n * 2^nu fits in the cap) or adversarial plus random tuples.
WorstCaseCost worst_case_cost(const MvcScheme& scheme, const CostSearchOptions& options = {});

// Tuples designed to maximize per-version symbol changes: successive
// versions flip `radius` bits, each in a different code block.
std::vector<VersionTuple> spread_flip_tuples(const CorrelationModel& model, unsigned block_bits);

} // namespace mvc
