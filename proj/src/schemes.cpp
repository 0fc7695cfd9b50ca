#include "mvc/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace mvc {

namespace {

void append_stream(BitString& out, const std::vector<FieldElement>& stream, unsigned m) {
	for (auto s : stream) {
		out.append_bits(s, m);
	}
}

std::vector<FieldElement> read_stream(BitReader& in, unsigned blocks, unsigned m) {
	std::vector<FieldElement> stream(blocks);
	for (auto& s : stream) {
		s = static_cast<FieldElement>(in.read(m));
	}
	return stream;
}

void append_big(BitString& out, const BigInt& value, unsigned bits) {
	for (unsigned k = bits; k > 0;) {
		const unsigned take = (k - 1) % 64 + 1;
		k -= take;
		out.append_bits(static_cast<std::uint64_t>((value >> k) & ((BigInt(1) << take) - 1)), take);
	}
}

BigInt read_big(BitReader& in, unsigned bits) {
	BigInt value = 0;
	for (unsigned k = bits; k > 0;) {
		const unsigned take = (k - 1) % 64 + 1;
		k -= take;
		value = (value << take) | BigInt(in.read(take));
	}
	return value;
}

// Position of version u among the members of s, or -1.
int position_of(VersionSet s, VersionIndex u) {
	if (!s.contains(u)) {
		return -1;
	}
	return static_cast<int>(VersionSet(s.mask() & ((std::uint32_t{1} << (u - 1)) - 1)).size());
}

// The decoding servers (first `arity` of T) and their latest common version.
struct DecodeTarget {
	std::vector<ServerIndex> servers;
	std::optional<VersionIndex> version;
};

DecodeTarget decode_target(std::span<const ServerIndex> T, const SystemState& state, unsigned arity) {
	DecodeTarget t;
	t.servers.assign(T.begin(), T.begin() + std::min<std::size_t>(arity, T.size()));
	t.version = state.latest_common(t.servers);
	return t;
}

void check_arity(std::span<const ServerIndex> T, std::span<const StoredSymbol> symbols, unsigned arity) {
	if (T.size() != symbols.size()) {
		throw std::domain_error("one stored symbol per decoding server required");
	}
	if (T.size() < arity) {
		throw InsufficientSymbols("decoder needs " + std::to_string(arity) + " servers, got " +
		                          std::to_string(T.size()));
	}
}

} // namespace

std::string to_string(DecodeStatus s) {
	switch (s) {
	case DecodeStatus::Decoded:
		return "decoded";
	case DecodeStatus::Null:
		return "null";
	case DecodeStatus::Error:
		return "error";
	}
	return "?";
}

SchemeConfig::SchemeConfig(unsigned n_, unsigned c_, CorrelationModel model_) : n(n_), c(c_), model(model_) {
	if (n == 0 || n > 65536) {
		throw std::domain_error("n must lie in [1, 65536]");
	}
	if (c < 1 || c > n) {
		throw std::domain_error("c must lie in [1, n]");
	}
}

StoredSymbol MvcScheme::encode_tuple(ServerIndex i, VersionSet s, const VersionTuple& tuple) const {
	std::vector<Message> received;
	for (auto u : s.members()) {
		received.push_back(tuple.at(u));
	}
	return encode(i, s, received);
}

// ---- replication -----------------------------------------------------------

ReplicationScheme::ReplicationScheme(SchemeConfig config) : MvcScheme(std::move(config)) {}

StoredSymbol ReplicationScheme::encode(ServerIndex, VersionSet s, std::span<const Message> received) const {
	StoredSymbol out;
	if (!s.empty()) {
		out.payload.append_message(received.back());
	}
	return out;
}

DecodeResult ReplicationScheme::decode(std::span<const ServerIndex> T, const SystemState& state,
                                       std::span<const StoredSymbol> symbols) const {
	check_arity(T, symbols, 1);
	std::optional<std::size_t> best;
	VersionIndex best_version = 0;
	for (std::size_t k = 0; k < T.size(); ++k) {
		const auto newest = state.at(T[k]).max();
		if (newest && *newest > best_version) {
			best_version = *newest;
			best = k;
		}
	}
	if (!best) {
		return DecodeResult::null();
	}
	try {
		if (symbols[*best].bit_length() != K()) {
			return DecodeResult::error("replica has the wrong length");
		}
		BitReader in(symbols[*best].payload);
		return DecodeResult::decoded(in.read_message(K()));
	} catch (const MalformedSymbol& e) {
		return DecodeResult::error(e.what());
	}
}

AnalyticCost ReplicationScheme::analytic_cost() const {
	return {static_cast<double>(K()), static_cast<double>(K()), K(), "K"};
}

// ---- MDS ---------------------------------------------------------------------

unsigned unpadded_field_degree(unsigned n, unsigned c, unsigned K) {
	const unsigned base = field_degree_for(n);
	for (unsigned m = base; m <= 16; ++m) {
		if (K % (c * m) == 0) {
			return m;
		}
	}
	return base;
}

MdsScheme::MdsScheme(SchemeConfig config)
	: MvcScheme(config), codec_(config.n, config.c, config.model.K, unpadded_field_degree(config.n, config.c, config.model.K)) {}

StoredSymbol MdsScheme::encode(ServerIndex i, VersionSet, std::span<const Message> received) const {
	StoredSymbol out;
	for (const auto& w : received) {
		append_stream(out.payload, codec_.encode_server(i, w), codec_.m());
	}
	return out;
}

DecodeResult MdsScheme::decode(std::span<const ServerIndex> T, const SystemState& state,
                               std::span<const StoredSymbol> symbols) const {
	check_arity(T, symbols, c());
	const auto target = decode_target(T, state, c());
	if (!target.version) {
		return DecodeResult::null();
	}
	try {
		std::vector<std::vector<FieldElement>> streams;
		for (std::size_t k = 0; k < target.servers.size(); ++k) {
			const VersionSet s = state.at(target.servers[k]);
			if (symbols[k].bit_length() != s.size() * codec_.server_bits()) {
				return DecodeResult::error("stored symbol has the wrong length");
			}
			BitReader in(symbols[k].payload);
			in.skip(position_of(s, *target.version) * codec_.server_bits());
			streams.push_back(read_stream(in, codec_.blocks(), codec_.m()));
		}
		return DecodeResult::decoded(codec_.decode(target.servers, streams));
	} catch (const MalformedSymbol& e) {
		return DecodeResult::error(e.what());
	}
}

AnalyticCost MdsScheme::analytic_cost() const {
	const double formula = static_cast<double>(nu()) * K() / c();
	return {formula, static_cast<double>(nu() * codec_.server_bits()), codec_.padded_bits(), "nu*K/c"};
}

// ---- delta -------------------------------------------------------------------

DeltaScheme::DeltaScheme(SchemeConfig config)
	: MvcScheme(config), codec_(config.n, config.c, config.model.K, unpadded_field_degree(config.n, config.c, config.model.K)) {
	for (unsigned gap = 1; gap < std::max(2u, nu()); ++gap) {
		balls_.emplace_back(K(), std::min(gap * model().radius, K()));
		index_bits_.push_back(ceil_log2(balls_.back().volume()));
	}
}

unsigned DeltaScheme::index_bits(unsigned gap) const {
	return index_bits_.at(gap - 1);
}

BigInt DeltaScheme::rank(unsigned gap, const Message& y) const {
	const auto& ball = balls_.at(gap - 1);
	if (y.weight() > ball.radius()) {
		throw std::domain_error("consecutive versions differ by more than the correlation radius allows");
	}
	return ball.fits_u64() ? BigInt(ball.rank(y)) : ball_rank(y);
}

std::optional<Message> DeltaScheme::unrank(unsigned gap, const BigInt& index) const {
	const auto& ball = balls_.at(gap - 1);
	if (index >= ball.volume()) {
		return std::nullopt;
	}
	return ball.fits_u64() ? ball.unrank(static_cast<std::uint64_t>(index)) : ball_unrank(index, K());
}

StoredSymbol DeltaScheme::encode(ServerIndex i, VersionSet s, std::span<const Message> received) const {
	StoredSymbol out;
	const auto members = s.members();
	for (std::size_t k = 0; k < received.size(); ++k) {
		if (k == 0) {
			append_stream(out.payload, codec_.encode_server(i, received[0]), codec_.m());
			continue;
		}
		const unsigned gap = members[k] - members[k - 1];
		append_big(out.payload, rank(gap, received[k] ^ received[k - 1]), index_bits(gap));
	}
	return out;
}

DecodeResult DeltaScheme::decode(std::span<const ServerIndex> T, const SystemState& state,
                                 std::span<const StoredSymbol> symbols) const {
	check_arity(T, symbols, c());
	const auto target = decode_target(T, state, c());
	if (!target.version) {
		return DecodeResult::null();
	}
	try {
		std::vector<std::vector<FieldElement>> streams;
		for (std::size_t k = 0; k < target.servers.size(); ++k) {
			const ServerIndex t = target.servers[k];
			const auto members = state.at(t).members();
			BitReader in(symbols[k].payload);
			auto stream = read_stream(in, codec_.blocks(), codec_.m());
			for (std::size_t j = 1; j < members.size() && members[j] <= *target.version; ++j) {
				const unsigned gap = members[j] - members[j - 1];
				const auto y = unrank(gap, read_big(in, index_bits(gap)));
				if (!y) {
					return DecodeResult::error("difference index outside the ball");
				}
				const auto change = codec_.encode_server(t, *y);
				for (unsigned b = 0; b < codec_.blocks(); ++b) {
					stream[b] ^= change[b];
				}
			}
			streams.push_back(std::move(stream));
		}
		return DecodeResult::decoded(codec_.decode(target.servers, streams));
	} catch (const MalformedSymbol& e) {
		return DecodeResult::error(e.what());
	}
}

AnalyticCost DeltaScheme::analytic_cost() const {
	const double log_vol = log2_volume(model().radius, K());
	const double formula = static_cast<double>(K()) / c() + (nu() - 1) * log_vol;
	const double bound = codec_.server_bits() + static_cast<double>(nu() - 1) * index_bits(1);
	return {formula, bound, codec_.padded_bits(), "K/c + (nu-1)*log2 Vol(r,K)"};
}

// ---- RS update-efficient -----------------------------------------------------

RsUpdateScheme::RsUpdateScheme(SchemeConfig config)
	: MvcScheme(config), codec_(config.n, config.c, config.model.K),
	  index_bits_(ceil_log2(std::uint64_t{codec_.blocks()})),
	  count_bits_(ceil_log2(std::uint64_t{codec_.blocks()} + 1)) {}

bool RsUpdateScheme::records_shorter(unsigned changed) const noexcept {
	return std::uint64_t{changed} * (index_bits_ + codec_.m()) < codec_.server_bits();
}

StoredSymbol RsUpdateScheme::encode(ServerIndex i, VersionSet, std::span<const Message> received) const {
	StoredSymbol out;
	const unsigned m = codec_.m();
	std::vector<FieldElement> previous;
	for (std::size_t k = 0; k < received.size(); ++k) {
		auto current = codec_.encode_server(i, received[k]);
		if (k == 0) {
			append_stream(out.payload, current, m);
		} else {
			std::vector<unsigned> changed;
			for (unsigned b = 0; b < codec_.blocks(); ++b) {
				if (current[b] != previous[b]) {
					changed.push_back(b);
				}
			}
			out.payload.append_bits(changed.size(), count_bits_);
			out.overhead_bits += count_bits_;
			if (records_shorter(static_cast<unsigned>(changed.size()))) {
				for (auto b : changed) {
					out.payload.append_bits(b, index_bits_);
					out.payload.append_bits(current[b], m);
				}
			} else {
				append_stream(out.payload, current, m);
			}
		}
		previous = std::move(current);
	}
	return out;
}

DecodeResult RsUpdateScheme::decode(std::span<const ServerIndex> T, const SystemState& state,
                                    std::span<const StoredSymbol> symbols) const {
	check_arity(T, symbols, c());
	const auto target = decode_target(T, state, c());
	if (!target.version) {
		return DecodeResult::null();
	}
	const unsigned m = codec_.m();
	try {
		std::vector<std::vector<FieldElement>> streams;
		for (std::size_t k = 0; k < target.servers.size(); ++k) {
			const auto members = state.at(target.servers[k]).members();
			BitReader in(symbols[k].payload);
			auto stream = read_stream(in, codec_.blocks(), m);
			for (std::size_t j = 1; j < members.size() && members[j] <= *target.version; ++j) {
				const auto count = static_cast<unsigned>(in.read(count_bits_));
				if (count > codec_.blocks()) {
					return DecodeResult::error("update count exceeds the number of symbols");
				}
				if (!records_shorter(count)) {
					stream = read_stream(in, codec_.blocks(), m);
					continue;
				}
				for (unsigned r = 0; r < count; ++r) {
					const auto b = static_cast<unsigned>(in.read(index_bits_));
					if (b >= codec_.blocks()) {
						return DecodeResult::error("update index out of range");
					}
					stream[b] = static_cast<FieldElement>(in.read(m));
				}
			}
			streams.push_back(std::move(stream));
		}
		return DecodeResult::decoded(codec_.decode(target.servers, streams));
	} catch (const MalformedSymbol& e) {
		return DecodeResult::error(e.what());
	}
}

double RsUpdateScheme::asymptotic_update_cost() const {
	const double m = codec_.m();
	const double np = std::ldexp(1.0, static_cast<int>(codec_.m()));
	const double per_update = model().radius == 0 ? 0.0 : model().radius * std::log2(K() * np / (c() * m));
	return std::min(per_update, static_cast<double>(K()) / c());
}

AnalyticCost RsUpdateScheme::analytic_cost() const {
	const double formula = static_cast<double>(K()) / c() + (nu() - 1) * asymptotic_update_cost();
	const double per_record = std::min<double>(static_cast<double>(model().radius) * (index_bits_ + codec_.m()),
	                                           codec_.server_bits());
	const double bound = codec_.server_bits() + (nu() - 1) * per_record;
	return {formula, bound, codec_.padded_bits(), "K/c + (nu-1)*min(r*log2(K*n_p/(c*log2 n_p)), K/c)"};
}

// ---- latest-only ------------------------------------------------------------

LatestOnlyScheme::LatestOnlyScheme(SchemeConfig config)
	: MvcScheme(config), codec_(config.n, config.c, config.model.K, unpadded_field_degree(config.n, config.c, config.model.K)) {}

StoredSymbol LatestOnlyScheme::encode(ServerIndex i, VersionSet s, std::span<const Message> received) const {
	StoredSymbol out;
	if (!s.empty()) {
		append_stream(out.payload, codec_.encode_server(i, received.back()), codec_.m());
	}
	return out;
}

DecodeResult LatestOnlyScheme::decode(std::span<const ServerIndex> T, const SystemState& state,
                                      std::span<const StoredSymbol> symbols) const {
	check_arity(T, symbols, c());
	std::optional<VersionIndex> newest;
	bool all_empty = true;
	for (unsigned k = 0; k < c(); ++k) {
		const auto v = state.at(T[k]).max();
		if (v) {
			all_empty = false;
		}
		if (k == 0) {
			newest = v;
		} else if (v != newest) {
			return DecodeResult::error("servers hold different newest versions");
		}
	}
	if (all_empty) {
		return DecodeResult::null();
	}
	try {
		std::vector<std::vector<FieldElement>> streams;
		for (unsigned k = 0; k < c(); ++k) {
			BitReader in(symbols[k].payload);
			streams.push_back(read_stream(in, codec_.blocks(), codec_.m()));
		}
		return DecodeResult::decoded(codec_.decode(T.first(c()), streams));
	} catch (const MalformedSymbol& e) {
		return DecodeResult::error(e.what());
	}
}

AnalyticCost LatestOnlyScheme::analytic_cost() const {
	return {static_cast<double>(K()) / c(), static_cast<double>(codec_.server_bits()), codec_.padded_bits(), "K/c"};
}

// ---- quorum bridge -----------------------------------------------------------

namespace {

SchemeConfig bridge_config(const SchemePtr& inner, unsigned c_w, unsigned c_r) {
	if (!inner) {
		throw std::invalid_argument("quorum bridge needs a scheme");
	}
	const unsigned n = inner->n();
	if (c_w < 1 || c_r < 1 || c_w > n || c_r > n) {
		throw std::domain_error("quorum sizes must lie in [1, n]");
	}
	if (c_w + c_r <= n) {
		throw std::domain_error("quorums do not intersect: c_w + c_r must exceed n");
	}
	if (c_w + c_r - n != inner->c()) {
		throw std::domain_error("bridge needs a scheme with c = c_w + c_r - n = " + std::to_string(c_w + c_r - n));
	}
	return inner->config();
}

} // namespace

QuorumBridge::QuorumBridge(SchemePtr inner, unsigned c_w, unsigned c_r)
	: MvcScheme(bridge_config(inner, c_w, c_r)), inner_(std::move(inner)), c_w_(c_w), c_r_(c_r) {}

DecodeResult QuorumBridge::decode(std::span<const ServerIndex> T, const SystemState& state,
                                  std::span<const StoredSymbol> symbols) const {
	check_arity(T, symbols, c_r_);
	const unsigned c = inner_->c();
	const unsigned size = static_cast<unsigned>(T.size());
	std::vector<unsigned> pick(c);
	for (unsigned k = 0; k < c; ++k) {
		pick[k] = k;
	}
	std::vector<unsigned> best;
	VersionIndex best_version = 0;
	std::vector<ServerIndex> subset(c);
	for (;;) {
		for (unsigned k = 0; k < c; ++k) {
			subset[k] = T[pick[k]];
		}
		const auto v = state.latest_common(subset);
		if (v && *v > best_version) {
			best_version = *v;
			best = pick;
		}
		// Next c-subset of positions in lexicographic order.
		int k = static_cast<int>(c) - 1;
		while (k >= 0 && pick[k] == size - c + k) {
			--k;
		}
		if (k < 0) {
			break;
		}
		++pick[k];
		for (unsigned j = k + 1; j < c; ++j) {
			pick[j] = pick[j - 1] + 1;
		}
	}
	if (best.empty()) {
		return DecodeResult::null();
	}
	std::vector<ServerIndex> servers;
	std::vector<StoredSymbol> chosen;
	for (auto p : best) {
		servers.push_back(T[p]);
		chosen.push_back(symbols[p]);
	}
	return inner_->decode(servers, state, chosen);
}

SchemePtr quorum_bridge(SchemePtr inner, unsigned c_w, unsigned c_r) {
	return std::make_shared<QuorumBridge>(std::move(inner), c_w, c_r);
}

// ---- worst-case cost ---------------------------------------------------------

std::vector<VersionTuple> spread_flip_tuples(const CorrelationModel& model, unsigned block_bits) {
	std::vector<VersionTuple> out;
	const unsigned K = model.K;
	block_bits = std::max(1u, std::min(block_bits, K));
	const unsigned blocks = (K + block_bits - 1) / block_bits;
	for (int variant = 0; variant < 2; ++variant) {
		VersionTuple t;
		Message w(K);
		if (variant == 1) {
			for (unsigned p = 0; p < K; p += 2) {
				w.set(p, true);
			}
		}
		t.versions.push_back(w);
		for (unsigned v = 2; v <= model.nu; ++v) {
			std::set<unsigned> flipped;
			for (unsigned k = 0; k < model.radius; ++k) {
				const unsigned idx = (v - 2) * model.radius + k;
				const unsigned pos = ((idx % blocks) * block_bits + (idx / blocks) % block_bits) % K;
				if (flipped.insert(pos).second) {
					w.flip(pos);
				}
			}
			t.versions.push_back(w);
		}
		out.push_back(std::move(t));
	}
	return out;
}

WorstCaseCost worst_case_cost(const MvcScheme& scheme, const CostSearchOptions& options) {
	WorstCaseCost result;
	result.scheme = scheme.name();
	result.analytic = scheme.analytic_cost();
	const auto& model = scheme.model();
	const std::uint64_t per_tuple = std::uint64_t{scheme.n()} << model.nu;

	auto examine = [&](const VersionTuple& tuple) {
		++result.tuples_examined;
		for (ServerIndex i = 0; i < scheme.n(); ++i) {
			for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << model.nu); ++mask) {
				const auto sym = scheme.encode_tuple(i, VersionSet(mask), tuple);
				if (sym.content_bits() > result.measured_bits || !result.witness) {
					result.measured_bits = sym.content_bits();
					result.overhead_bits = sym.overhead_bits;
					result.worst_server = i;
					result.worst_set = VersionSet(mask);
					result.witness = tuple;
				}
				result.measured_total_bits = std::max(result.measured_total_bits, sym.bit_length());
			}
		}
	};

	const BigInt size = model.possible_set_size();
	if (size * per_tuple <= BigInt(options.cap)) {
		result.exhaustive = true;
		PossibleSetEnumerator all(model, options.cap);
		auto cursor = all.cursor();
		VersionTuple t;
		while (cursor.next(t)) {
			examine(t);
		}
		return result;
	}
	for (const auto& t : spread_flip_tuples(model, scheme.c() * field_degree_for(scheme.n()))) {
		examine(t);
	}
	for (unsigned k = 0; k < options.random_tuples; ++k) {
		examine(sample_tuple(model, derive_seed(options.seed, {0x636f7374, k})));
	}
	return result;
}

} // namespace mvc
