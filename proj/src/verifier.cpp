#include "mvc/verifier.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace mvc {

namespace {

constexpr std::uint64_t kTupleTag = 0x7475706c65;  // "tuple"
constexpr std::uint64_t kTrialTag = 0x747269616c;  // "trial"
constexpr std::size_t kTupleChunk = 512;

struct Requirement {
	bool definition_2 = false;
	unsigned subset_size = 0;
	unsigned c_w = 0;

	std::optional<VersionIndex> target(const SystemState& state, std::span<const ServerIndex> T, unsigned nu) const {
		return definition_2 ? state.latest_complete(nu) : state.latest_common(T);
	}
};

std::vector<std::vector<ServerIndex>> all_subsets(unsigned n, unsigned k) {
	std::vector<std::vector<ServerIndex>> out;
	std::vector<ServerIndex> pick(k);
	for (unsigned j = 0; j < k; ++j) {
		pick[j] = j;
	}
	for (;;) {
		out.push_back(pick);
		int j = static_cast<int>(k) - 1;
		while (j >= 0 && pick[j] == n - k + j) {
			--j;
		}
		if (j < 0) {
			return out;
		}
		++pick[j];
		for (unsigned l = j + 1; l < k; ++l) {
			pick[l] = pick[l - 1] + 1;
		}
	}
}

struct Judgement {
	bool ok = false;
	std::optional<VersionIndex> decoded_version;
};

Judgement judge(const DecodeResult& r, const VersionTuple& tuple, VersionIndex target) {
	Judgement j;
	if (r.status == DecodeStatus::Decoded && r.value.size() == tuple.at(1).size()) {
		j.decoded_version = tuple.latest_match(r.value, target);
		j.ok = j.decoded_version.has_value();
	}
	return j;
}

DecodeResult safe_decode(const MvcScheme& scheme, std::span<const ServerIndex> T, const SystemState& state,
                         std::span<const StoredSymbol> symbols) {
	try {
		return scheme.decode(T, state, symbols);
	} catch (const std::exception& e) {
		return DecodeResult::error(e.what());
	}
}

Witness make_witness(std::uint64_t state_index, const SystemState& state, std::span<const ServerIndex> T,
                     const VersionTuple& tuple, VersionIndex target, const DecodeResult& r,
                     const std::optional<VersionIndex>& decoded_version) {
	Witness w;
	w.state_index = state_index;
	w.state = state;
	w.servers.assign(T.begin(), T.end());
	w.tuple = tuple;
	w.target = target;
	w.status = r.status;
	w.decoded_version = decoded_version;
	w.detail = r.detail;
	return w;
}

std::uint64_t state_count(unsigned n, unsigned nu) {
	return std::uint64_t{1} << (n * nu);
}

struct GuardedPair {
	std::uint64_t state_index;
	std::uint32_t subset;
	VersionIndex target;
};

// Shared driver for exhaustive and sweep modes. tuple_at(k) yields tuple k of
// `tuple_total`.
template <class TupleAt>
void run_enumeration(const MvcScheme& scheme, const Requirement& req, const VerifyOptions& options,
                     std::uint64_t tuple_total, TupleAt tuple_at, VerificationReport& report) {
	const unsigned n = scheme.n();
	const unsigned nu = scheme.nu();
	const auto subsets = all_subsets(n, req.subset_size);
	const std::uint64_t states = state_count(n, nu);

	std::vector<GuardedPair> pairs;
	std::vector<std::uint64_t> pairs_per_state(states, 0);
	for (std::uint64_t s = 0; s < states; ++s) {
		const auto state = SystemState::from_index(s, n, nu, req.c_w);
		for (std::uint32_t k = 0; k < subsets.size(); ++k) {
			if (const auto t = req.target(state, subsets[k], nu)) {
				pairs.push_back({s, k, *t});
				++pairs_per_state[s];
			}
		}
	}
	report.states_checked = states;
	report.subsets_checked = pairs.size();
	report.tuples_checked = tuple_total;

	std::vector<std::uint64_t> failures(pairs.size(), 0);
	std::vector<std::vector<Witness>> witnesses(pairs.size());
	const std::uint32_t masks = std::uint32_t{1} << nu;

	if (options.engine == VerifyEngine::SerialReference) {
		for (std::size_t p = 0; p < pairs.size(); ++p) {
			const auto& pair = pairs[p];
			const auto state = SystemState::from_index(pair.state_index, n, nu, req.c_w);
			const auto& T = subsets[pair.subset];
			for (std::uint64_t k = 0; k < tuple_total; ++k) {
				const VersionTuple tuple = tuple_at(k);
				std::vector<StoredSymbol> symbols;
				for (auto i : T) {
					symbols.push_back(scheme.encode_tuple(i, state.at(i), tuple));
				}
				const auto r = safe_decode(scheme, T, state, symbols);
				const auto j = judge(r, tuple, pair.target);
				if (!j.ok) {
					++failures[p];
					if (witnesses[p].empty()) {
						witnesses[p].push_back(
							make_witness(pair.state_index, state, T, tuple, pair.target, r, j.decoded_version));
					}
				}
			}
		}
	} else {
		const int threads = options.jobs > 0 ? options.jobs : omp_get_max_threads();
		std::vector<VersionTuple> chunk;
		std::vector<StoredSymbol> table;
		for (std::uint64_t first = 0; first < tuple_total; first += kTupleChunk) {
			const std::size_t size = static_cast<std::size_t>(std::min<std::uint64_t>(kTupleChunk, tuple_total - first));
			chunk.resize(size);
			table.assign(size * n * masks, StoredSymbol{});
#pragma omp parallel for schedule(static) num_threads(threads)
			for (std::size_t t = 0; t < size; ++t) {
				chunk[t] = tuple_at(first + t);
				for (ServerIndex i = 0; i < n; ++i) {
					for (std::uint32_t m = 1; m < masks; ++m) {
						table[(t * n + i) * masks + m] = scheme.encode_tuple(i, VersionSet(m), chunk[t]);
					}
				}
			}
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
			for (std::size_t p = 0; p < pairs.size(); ++p) {
				const auto& pair = pairs[p];
				const auto state = SystemState::from_index(pair.state_index, n, nu, req.c_w);
				const auto& T = subsets[pair.subset];
				std::vector<StoredSymbol> symbols(T.size());
				for (std::size_t t = 0; t < size; ++t) {
					for (std::size_t k = 0; k < T.size(); ++k) {
						symbols[k] = table[(t * n + T[k]) * masks + state.at(T[k]).mask()];
					}
					const auto r = safe_decode(scheme, T, state, symbols);
					const auto j = judge(r, chunk[t], pair.target);
					if (!j.ok) {
						++failures[p];
						if (witnesses[p].empty()) {
							witnesses[p].push_back(
								make_witness(pair.state_index, state, T, chunk[t], pair.target, r, j.decoded_version));
						}
					}
				}
			}
		}
	}

	// Deterministic reduction in (state, subset, tuple) order.
	std::vector<std::uint64_t> state_failures(states, 0);
	double worst = 0;
	for (std::size_t p = 0; p < pairs.size(); ++p) {
		report.failures += failures[p];
		state_failures[pairs[p].state_index] += failures[p];
		if (tuple_total > 0) {
			worst = std::max(worst, static_cast<double>(failures[p]) / static_cast<double>(tuple_total));
		}
		for (auto& w : witnesses[p]) {
			if (report.witnesses.size() < options.max_witnesses) {
				report.witnesses.push_back(std::move(w));
			}
		}
	}
	report.decodes = pairs.size() * tuple_total;
	report.empirical_error =
		report.decodes == 0 ? 0.0 : static_cast<double>(report.failures) / static_cast<double>(report.decodes);
	report.interval = wilson_interval(report.failures, report.decodes);
	report.max_case_error = worst;
	double sum = 0;
	std::uint64_t counted = 0;
	for (std::uint64_t s = 0; s < states; ++s) {
		if (pairs_per_state[s] > 0 && tuple_total > 0) {
			sum += static_cast<double>(state_failures[s]) / static_cast<double>(pairs_per_state[s] * tuple_total);
			++counted;
		}
	}
	report.state_averaged_error = counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

void run_monte_carlo(const MvcScheme& scheme, const Requirement& req, const VerifyOptions& options,
                     VerificationReport& report) {
	const unsigned n = scheme.n();
	const unsigned nu = scheme.nu();
	const auto subsets = all_subsets(n, req.subset_size);
	const std::uint64_t states = n * nu >= 64 ? ~std::uint64_t{0} : state_count(n, nu);
	const std::uint64_t trials = options.trials;

	// 0: vacuous, 1: pass, 2: fail
	std::vector<std::uint8_t> outcome(trials, 0);
	std::vector<std::vector<std::pair<std::uint64_t, Witness>>> found(1);
	const int threads = options.engine == VerifyEngine::SerialReference ? 1
	                    : options.jobs > 0                               ? options.jobs
	                                                                     : omp_get_max_threads();
	found.resize(threads);
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
	for (std::uint64_t k = 0; k < trials; ++k) {
		Rng rng(derive_seed(options.seed, {kTrialTag, k}));
		const auto tuple = sample_tuple(scheme.model(), rng());
		const std::uint64_t s = uniform_below(rng, states);
		const auto& T = subsets[uniform_below(rng, subsets.size())];
		const auto state = SystemState::from_index(s, n, nu, req.c_w);
		const auto target = req.target(state, T, nu);
		if (!target) {
			continue;
		}
		std::vector<StoredSymbol> symbols;
		for (auto i : T) {
			symbols.push_back(scheme.encode_tuple(i, state.at(i), tuple));
		}
		const auto r = safe_decode(scheme, T, state, symbols);
		const auto j = judge(r, tuple, *target);
		outcome[k] = j.ok ? 1 : 2;
		auto& mine = found[omp_get_thread_num()];
		if (!j.ok && mine.size() < options.max_witnesses) {
			mine.emplace_back(k, make_witness(s, state, T, tuple, *target, r, j.decoded_version));
		}
	}
	std::uint64_t guarded = 0;
	for (auto o : outcome) {
		report.vacuous += o == 0;
		guarded += o != 0;
		report.failures += o == 2;
	}
	std::vector<std::pair<std::uint64_t, Witness>> merged;
	for (auto& f : found) {
		for (auto& w : f) {
			merged.push_back(std::move(w));
		}
	}
	std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
	for (auto& [k, w] : merged) {
		if (report.witnesses.size() < options.max_witnesses) {
			report.witnesses.push_back(std::move(w));
		}
	}
	report.states_checked = trials;
	report.subsets_checked = guarded;
	report.tuples_checked = trials;
	report.decodes = guarded;
	report.empirical_error = guarded == 0 ? 0.0 : static_cast<double>(report.failures) / static_cast<double>(guarded);
	report.interval = wilson_interval(report.failures, guarded);
}

std::uint64_t binomial_u64(unsigned n, unsigned k) {
	return static_cast<std::uint64_t>(binomial(n, k));
}

VerificationReport run(const MvcScheme& scheme, const Requirement& req, const VerifyOptions& options) {
	VerificationReport report;
	report.scheme = scheme.name();
	report.requirement = req.definition_2 ? "definition-2" : "A";
	report.n = scheme.n();
	report.subset_size = req.subset_size;
	report.c_w = req.c_w;
	report.mode = options.mode;

	const unsigned n = scheme.n();
	const unsigned nu = scheme.nu();
	const BigInt states = BigInt(1) << (n * nu);
	const BigInt pairs = states * binomial_u64(n, req.subset_size);
	const BigInt cap(options.cap);

	if (report.mode == VerifyMode::Exhaustive) {
		const BigInt size = pairs * scheme.model().possible_set_size();
		if (size > cap) {
			report.warnings.push_back("exhaustive check needs " + size.str() + " decodes, above the cap of " +
			                          cap.str() + "; switched to monte-carlo");
			report.mode = VerifyMode::MonteCarlo;
		}
	}
	if (report.mode == VerifyMode::Sweep && pairs * options.trials > cap) {
		report.warnings.push_back("sweep needs " + BigInt(pairs * options.trials).str() +
		                          " decodes, above the cap of " + cap.str() + "; switched to monte-carlo");
		report.mode = VerifyMode::MonteCarlo;
	}

	switch (report.mode) {
	case VerifyMode::Exhaustive: {
		const PossibleSetEnumerator all(scheme.model(), options.cap);
		run_enumeration(scheme, req, options, all.size(), [&](std::uint64_t k) { return all.tuple_at(k); }, report);
		break;
	}
	case VerifyMode::Sweep:
		run_enumeration(
			scheme, req, options, options.trials,
			[&](std::uint64_t k) { return sample_tuple(scheme.model(), derive_seed(options.seed, {kTupleTag, k})); },
			report);
		break;
	case VerifyMode::MonteCarlo:
		run_monte_carlo(scheme, req, options, report);
		break;
	}
	return report;
}

nlohmann::json state_json(const SystemState& s) {
	auto out = nlohmann::json::array();
	for (const auto& v : s.per_server()) {
		out.push_back(v.members());
	}
	return out;
}

} // namespace

std::string to_string(VerifyMode m) {
	switch (m) {
	case VerifyMode::Exhaustive:
		return "exhaustive";
	case VerifyMode::MonteCarlo:
		return "monte-carlo";
	case VerifyMode::Sweep:
		return "sweep";
	}
	return "?";
}

VerifyMode verify_mode_from_string(const std::string& name) {
	if (name == "exhaustive") {
		return VerifyMode::Exhaustive;
	}
	if (name == "monte-carlo") {
		return VerifyMode::MonteCarlo;
	}
	if (name == "sweep") {
		return VerifyMode::Sweep;
	}
	throw std::invalid_argument("unknown mode '" + name + "' (exhaustive, monte-carlo, sweep)");
}

Interval wilson_interval(std::uint64_t failures, std::uint64_t trials, double z) {
	if (trials == 0) {
		return {0.0, 1.0};
	}
	const double nn = static_cast<double>(trials);
	const double p = static_cast<double>(failures) / nn;
	const double z2 = z * z;
	const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
	const double half = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
	const double low = failures == 0 ? 0.0 : std::max(0.0, centre - half);
	const double high = failures == trials ? 1.0 : std::min(1.0, centre + half);
	return {low, high};
}

nlohmann::json VerificationReport::to_json() const {
	nlohmann::json j{
		{"scheme", scheme},
		{"requirement", requirement},
		{"n", n},
		{"subset_size", subset_size},
		{"mode", to_string(mode)},
		{"states_checked", states_checked},
		{"subsets_checked", subsets_checked},
		{"tuples_checked", tuples_checked},
		{"decodes", decodes},
		{"failures", failures},
		{"empirical_error", empirical_error},
		{"wilson95", {interval.low, interval.high}},
		{"passed", passed()},
	};
	if (requirement == "definition-2") {
		j["c_w"] = c_w;
	}
	if (mode == VerifyMode::MonteCarlo) {
		j["vacuous_draws"] = vacuous;
	}
	j["max_case_error"] = max_case_error ? nlohmann::json(*max_case_error) : nlohmann::json(nullptr);
	j["state_averaged_error"] = state_averaged_error ? nlohmann::json(*state_averaged_error) : nlohmann::json(nullptr);
	auto ws = nlohmann::json::array();
	for (const auto& w : witnesses) {
		std::vector<unsigned> servers;
		for (auto s : w.servers) {
			servers.push_back(s + 1);
		}
		std::vector<std::string> tuple;
		for (const auto& v : w.tuple.versions) {
			tuple.push_back(v.to_hex());
		}
		ws.push_back({
			{"state", state_json(w.state)},
			{"servers", servers},
			{"tuple_hex", tuple},
			{"target_version", w.target},
			{"status", to_string(w.status)},
			{"decoded_version", w.decoded_version ? nlohmann::json(*w.decoded_version) : nlohmann::json(nullptr)},
			{"detail", w.detail},
		});
	}
	j["witnesses"] = ws;
	j["warnings"] = warnings;
	return j;
}

VerificationReport verify_requirement_A(const MvcScheme& scheme, const VerifyOptions& options) {
	return run(scheme, {false, scheme.read_arity() == 1 ? scheme.c() : scheme.read_arity(), scheme.c()}, options);
}

VerificationReport verify_definition_2(const MvcScheme& scheme, unsigned c_w, unsigned c_r,
                                       const VerifyOptions& options) {
	if (c_w < 1 || c_r < 1 || c_w > scheme.n() || c_r > scheme.n()) {
		throw std::domain_error("quorum sizes must lie in [1, n]");
	}
	return run(scheme, {true, c_r, c_w}, options);
}

CaseOutcome check_case(const MvcScheme& scheme, const SystemState& state, std::span<const ServerIndex> T,
                       const VersionTuple& tuple, std::optional<VersionIndex> target) {
	CaseOutcome out;
	out.target = target;
	std::vector<StoredSymbol> symbols;
	for (auto i : T) {
		symbols.push_back(scheme.encode_tuple(i, state.at(i), tuple));
	}
	out.result = safe_decode(scheme, T, state, symbols);
	if (out.result.status == DecodeStatus::Decoded) {
		out.decoded_version = tuple.latest_match(out.result.value, 1);
	}
	if (!target) {
		out.ok = true;
		return out;
	}
	const auto j = judge(out.result, tuple, *target);
	out.ok = j.ok;
	if (j.decoded_version) {
		out.decoded_version = j.decoded_version;
	}
	return out;
}

EpsilonEstimate estimate_epsilon(const std::function<SchemePtr(std::uint64_t)>& factory,
                                 const std::vector<std::uint64_t>& seeds, const VerifyOptions& options) {
	if (seeds.empty()) {
		throw std::domain_error("need at least one codebook seed");
	}
	EpsilonEstimate est;
	for (auto seed : seeds) {
		const auto scheme = factory(seed);
		est.per_seed.push_back({seed, verify_requirement_A(*scheme, options)});
	}
	auto key = [](const VerificationReport& r) {
		return std::make_pair(r.max_case_error.value_or(r.empirical_error), r.empirical_error);
	};
	for (std::size_t k = 1; k < est.per_seed.size(); ++k) {
		if (key(est.per_seed[k].report) < key(est.per_seed[est.best].report)) {
			est.best = k;
		}
	}
	return est;
}

} // namespace mvc
