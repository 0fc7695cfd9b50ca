#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mvc/bitvec.hpp"
#include "mvc/combinatorics.hpp"

namespace mvc {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

// Thrown when an exhaustive enumeration would exceed the configured cap.
class CapExceeded : public std::runtime_error {
public:
	CapExceeded(const std::string& what, BigInt estimate)
		: std::runtime_error(what + " (size estimate " + estimate.str() + ")"), estimate_(std::move(estimate)) {}
	const BigInt& estimate() const noexcept { return estimate_; }

private:
	BigInt estimate_;
};

// Version indices are 1-based (u in [1, nu]); server indices are 0-based.
using VersionIndex = unsigned;
using ServerIndex = unsigned;

// Subset of [nu] as a bit mask, bit u-1 set iff u is present. nu <= 31.
class VersionSet {
public:
	constexpr VersionSet() = default;
	constexpr explicit VersionSet(std::uint32_t mask) : mask_(mask) {}
	VersionSet(std::initializer_list<VersionIndex> versions);

	constexpr std::uint32_t mask() const noexcept { return mask_; }
	constexpr bool empty() const noexcept { return mask_ == 0; }
	constexpr bool contains(VersionIndex u) const noexcept { return u >= 1 && ((mask_ >> (u - 1)) & 1u); }
	void insert(VersionIndex u) { mask_ |= std::uint32_t{1} << (u - 1); }
	unsigned size() const noexcept;
	std::optional<VersionIndex> max() const noexcept;
	std::optional<VersionIndex> min() const noexcept;
	// Members in increasing order.
	std::vector<VersionIndex> members() const;
	VersionSet only_up_to(VersionIndex u) const noexcept;

	friend constexpr VersionSet operator&(VersionSet a, VersionSet b) noexcept { return VersionSet(a.mask_ & b.mask_); }
	friend constexpr VersionSet operator|(VersionSet a, VersionSet b) noexcept { return VersionSet(a.mask_ | b.mask_); }
	friend constexpr bool operator==(VersionSet a, VersionSet b) noexcept = default;

	std::string to_string() const;

private:
	std::uint32_t mask_ = 0;
};

struct CorrelationModel {
	unsigned K = 0;
	unsigned radius = 0;
	unsigned nu = 1;

	CorrelationModel() = default;
	CorrelationModel(unsigned K_, unsigned radius_, unsigned nu_);

	// radius = floor(num / den * K), computed exactly.
	static CorrelationModel from_rational(std::uint64_t num, std::uint64_t den, unsigned K, unsigned nu);

	BigInt ball_volume() const { return hamming_ball_volume(radius, K); }
	// |A| = 2^K * Vol^(nu-1).
	BigInt possible_set_size() const;
};

struct VersionTuple {
	std::vector<Message> versions;

	const Message& at(VersionIndex u) const { return versions.at(u - 1); }
	unsigned nu() const noexcept { return static_cast<unsigned>(versions.size()); }
	bool is_possible(const CorrelationModel& model) const;
	// Highest m >= from with W_m == w, or nullopt.
	std::optional<VersionIndex> latest_match(const Message& w, VersionIndex from = 1) const;
};

class SystemState {
public:
	SystemState() = default;
	SystemState(std::vector<VersionSet> per_server, unsigned c_w);

	// State number `index` of the lexicographic enumeration of P([nu])^n:
	// bit i*nu + (u-1) of index says whether u is in S(i).
	static SystemState from_index(std::uint64_t index, unsigned n, unsigned nu, unsigned c_w);
	std::uint64_t index(unsigned nu) const;

	unsigned n() const noexcept { return static_cast<unsigned>(per_server_.size()); }
	unsigned c_w() const noexcept { return c_w_; }
	const std::vector<VersionSet>& per_server() const noexcept { return per_server_; }
	VersionSet at(ServerIndex i) const { return per_server_.at(i); }
	void set(ServerIndex i, VersionSet s) { per_server_.at(i) = s; }

	unsigned holders(VersionIndex u) const noexcept;
	VersionSet complete_versions(unsigned nu) const;
	std::optional<VersionIndex> latest_complete(unsigned nu) const;
	std::optional<VersionIndex> latest_common(std::span<const ServerIndex> servers) const;
	VersionSet common(std::span<const ServerIndex> servers) const;
	VersionSet union_of(std::span<const ServerIndex> servers) const;

	std::string to_string() const;

	friend bool operator==(const SystemState&, const SystemState&) = default;

private:
	std::vector<VersionSet> per_server_;
	unsigned c_w_ = 0;
};

// Free-function forms of the state queries.
std::optional<VersionIndex> latest_complete_version(const SystemState& state, unsigned nu);
std::optional<VersionIndex> latest_common_version(const SystemState& state, std::span<const ServerIndex> servers);

VersionTuple sample_tuple(const CorrelationModel& model, std::uint64_t seed);

// Random access enumeration of A: tuple t is (w_1, d_2, ..., d_nu) in mixed
// radix (2^K, Vol, ..., Vol), with w_{m+1} = w_m xor unrank(d_{m+1}).
class PossibleSetEnumerator {
public:
	explicit PossibleSetEnumerator(const CorrelationModel& model, std::uint64_t cap = kDefaultEnumerationCap);

	std::uint64_t size() const noexcept { return size_; }
	VersionTuple tuple_at(std::uint64_t index) const;
	const CorrelationModel& model() const noexcept { return model_; }

	// Single-consumer cursor.
	class Cursor {
	public:
		explicit Cursor(const PossibleSetEnumerator& owner) : owner_(&owner) {}
		bool next(VersionTuple& out);

	private:
		const PossibleSetEnumerator* owner_;
		std::uint64_t position_ = 0;
	};
	Cursor cursor() const { return Cursor(*this); }

private:
	CorrelationModel model_;
	BallIndexer ball_;
	std::uint64_t size_ = 0;
};

std::vector<VersionTuple> enumerate_possible_set(const CorrelationModel& model,
                                                 std::uint64_t cap = kDefaultEnumerationCap);

// Partial assignment of versions, as (version index, value) pairs.
using PartialTuple = std::vector<std::pair<VersionIndex, Message>>;

// All assignments to `wanted` (in the given order) such that together with
// `fixed` they extend to a member of A. The two index sets must be disjoint.
std::vector<std::vector<Message>> enumerate_conditional_set(const CorrelationModel& model, const PartialTuple& fixed,
                                                            const std::vector<VersionIndex>& wanted,
                                                            std::uint64_t cap = kDefaultEnumerationCap);

// All vectors within `radius` of `center`, in ball-rank order.
std::vector<Message> ball_members(const Message& center, unsigned radius);

} // namespace mvc
