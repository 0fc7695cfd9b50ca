#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvc/schemes.hpp"

namespace mvc {

enum class VerifyMode {
	Exhaustive,  // every state, every subset, every tuple of A
	MonteCarlo,  // random (tuple, state, subset) triples
	Sweep,       // every state and subset against a shared sample of tuples
};
std::string to_string(VerifyMode m);
VerifyMode verify_mode_from_string(const std::string& name);

enum class VerifyEngine {
	Parallel,         // OpenMP over states, tuples encoded once per chunk
	SerialReference,  // nested loops, every symbol encoded on demand
};

struct VerifyOptions {
	VerifyMode mode = VerifyMode::Exhaustive;
	VerifyEngine engine = VerifyEngine::Parallel;
	std::uint64_t cap = kDefaultEnumerationCap;  // on states * subsets * tuples
	std::uint64_t trials = 1000;                 // Monte-Carlo draws, or tuples per sweep
	std::uint64_t seed = 1;
	unsigned max_witnesses = 16;
	int jobs = 0;  // OpenMP threads; 0 keeps the runtime default
};

struct Witness {
	std::uint64_t state_index = 0;
	SystemState state;
	std::vector<ServerIndex> servers;
	VersionTuple tuple;
	VersionIndex target = 0;
	DecodeStatus status = DecodeStatus::Null;
	std::optional<VersionIndex> decoded_version;
	std::string detail;
};

struct Interval {
	double low = 0;
	double high = 0;
};
// Wilson score interval; z = 1.96 gives 95%.
Interval wilson_interval(std::uint64_t failures, std::uint64_t trials, double z = 1.959963984540054);

struct VerificationReport {
	std::string scheme;
	std::string requirement;  // "A" or "definition-2"
	unsigned n = 0;
	unsigned subset_size = 0;
	unsigned c_w = 0;
	VerifyMode mode = VerifyMode::Exhaustive;
	std::uint64_t states_checked = 0;
	std::uint64_t subsets_checked = 0;  // (state, subset) pairs with a nonvacuous guard
	std::uint64_t tuples_checked = 0;
	std::uint64_t decodes = 0;
	std::uint64_t vacuous = 0;  // Monte-Carlo draws whose guard was empty
	std::uint64_t failures = 0;
	std::vector<Witness> witnesses;
	double empirical_error = 0;
	Interval interval;
	// Exhaustive and sweep modes only: the worst (state, subset) pair and
	// the mean over states of the per-state error.
	std::optional<double> max_case_error;
	std::optional<double> state_averaged_error;
	std::vector<std::string> warnings;

	bool passed() const noexcept { return failures == 0; }
	nlohmann::json to_json() const;
};

// Decoding requirement A: every c-subset T with a common version decodes a
// version at least as late as max of the intersection of S(t) over T.
VerificationReport verify_requirement_A(const MvcScheme& scheme, const VerifyOptions& options = {});

// Quorum form: every c_R-subset decodes a version at least as late as the
// latest version held by c_W servers, whenever one exists. The scheme must
// read from c_R servers (see QuorumBridge).
VerificationReport verify_definition_2(const MvcScheme& scheme, unsigned c_w, unsigned c_r,
                                       const VerifyOptions& options = {});

struct CaseOutcome {
	std::optional<VersionIndex> target;  // nullopt: vacuous guard
	DecodeResult result;
	std::optional<VersionIndex> decoded_version;
	bool ok = false;
};
// One decode: encode every server of T from the tuple, decode, judge
// against `target` (nullopt: the guard is vacuous and anything passes).
CaseOutcome check_case(const MvcScheme& scheme, const SystemState& state, std::span<const ServerIndex> T,
                       const VersionTuple& tuple, std::optional<VersionIndex> target);

struct SeedEstimate {
	std::uint64_t seed = 0;
	VerificationReport report;
};
struct EpsilonEstimate {
	std::vector<SeedEstimate> per_seed;
	std::size_t best = 0;  // smallest worst-case error, then smallest overall error
	const SeedEstimate& best_seed() const { return per_seed.at(best); }
};
// Runs verify_requirement_A (Sweep or Monte-Carlo) for schemes built from
// each codebook seed.
EpsilonEstimate estimate_epsilon(const std::function<SchemePtr(std::uint64_t)>& factory,
                                 const std::vector<std::uint64_t>& seeds, const VerifyOptions& options);

} // namespace mvc
