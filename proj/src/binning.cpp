#include "mvc/binning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvc {

namespace mp = boost::multiprecision;

namespace {

constexpr std::uint64_t kPrfTag = 0x62696e2d707266;     // "bin-prf"
constexpr std::uint64_t kTableTag = 0x62696e2d746162;   // "bin-tab"
constexpr std::uint64_t kLinearTag = 0x62696e2d6c696e;  // "bin-lin"
constexpr unsigned kExactTableMaxK = 16;
constexpr unsigned kBruteForceMaxK = 24;

unsigned ceil_nonnegative(const HighFloat& x) {
	if (x <= 0) {
		return 0;
	}
	return static_cast<unsigned>(mp::ceil(x));
}

std::uint64_t prefix(std::uint64_t word, unsigned bits) {
	return bits == 0 ? 0 : word >> (64 - bits);
}

} // namespace

HighFloat log2_real(double x) {
	if (!(x > 0) || !std::isfinite(x)) {
		throw std::domain_error("log2 of a non-positive value");
	}
	int exponent = 0;
	const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent, mantissa in [0.5, 1)
	if (mantissa == 0.5) {
		return HighFloat(exponent - 1);
	}
	return HighFloat(exponent) + log2_high(HighFloat(mantissa));
}

BinningParams::BinningParams(unsigned n_, unsigned c_, CorrelationModel model_, double epsilon_)
	: n(n_), c(c_), model(model_), epsilon(epsilon_) {
	SchemeConfig check(n, c, model);
	if (!(epsilon > 0 && epsilon < 1)) {
		throw std::domain_error("binning needs 0 < epsilon < 1");
	}
}

HighFloat BinningParams::error_exponent() const {
	return HighFloat(model.nu) * n - log2_real(epsilon);
}

HighFloat BinningParams::log2_volume() const {
	return log2_high(model.ball_volume());
}

HighFloat LinearRate::value(const BinningParams& p) const {
	HighFloat v = HighFloat(k) * p.model.K + HighFloat(constant);
	if (log_volume != 0) {
		v += HighFloat(log_volume) * p.log2_volume();
	}
	if (exponent != 0) {
		v += HighFloat(exponent) * p.error_exponent();
	}
	return v;
}

LinearRate& LinearRate::operator+=(const LinearRate& o) {
	k += o.k;
	log_volume += o.log_volume;
	constant += o.constant;
	exponent += o.exponent;
	return *this;
}

LinearRate operator-(LinearRate a, const LinearRate& b) {
	a.k -= b.k;
	a.log_volume -= b.log_volume;
	a.constant -= b.constant;
	a.exponent -= b.exponent;
	return a;
}

std::string LinearRate::to_string() const {
	return std::to_string(k) + "*K + " + std::to_string(log_volume) + "*log2Vol + " + std::to_string(constant) +
	       " + " + std::to_string(exponent) + "*E";
}

std::vector<LinearRate> version_rates(const BinningParams& p, VersionSet s) {
	(void)p;
	std::vector<LinearRate> out;
	const auto members = s.members();
	for (std::size_t j = 0; j < members.size(); ++j) {
		const auto u = static_cast<std::int64_t>(members[j]);
		if (j == 0) {
			out.push_back({1, u - 1, u - 1, 1});
		} else {
			out.push_back({0, u - static_cast<std::int64_t>(members[j - 1]), u - 1, 1});
		}
	}
	return out;
}

std::vector<unsigned> version_bits(const BinningParams& p, VersionSet s, double reduction_bits) {
	std::vector<unsigned> out;
	for (const auto& r : version_rates(p, s)) {
		out.push_back(ceil_nonnegative((r.value(p) - HighFloat(reduction_bits)) / p.c));
	}
	return out;
}

unsigned index_capacity(const BinningParams& p) {
	const std::int64_t v = p.model.nu - 1;
	return ceil_nonnegative(LinearRate{1, v, v, 1}.value(p) / p.c);
}

std::string to_string(BinningKind kind) {
	switch (kind) {
	case BinningKind::RandomPrf:
		return "random";
	case BinningKind::ExactTable:
		return "table";
	case BinningKind::Linear:
		return "linear";
	}
	return "?";
}

BinningKind binning_kind_from_string(const std::string& name) {
	if (name == "random") {
		return BinningKind::RandomPrf;
	}
	if (name == "table") {
		return BinningKind::ExactTable;
	}
	if (name == "linear") {
		return BinningKind::Linear;
	}
	throw std::invalid_argument("unknown binning kind '" + name + "' (random, table, linear)");
}

// ---- codebook ----------------------------------------------------------------

BinningCodebook::BinningCodebook(BinningKind kind, std::uint64_t seed, BinningParams params)
	: kind_(kind), seed_(seed), params_(params), capacity_(index_capacity(params)), words_((capacity_ + 63) / 64) {
	if (capacity_ > BitVec::kMaxBits) {
		throw std::domain_error("bin index longer than " + std::to_string(BitVec::kMaxBits) + " bits");
	}
	const unsigned K = params_.model.K;
	const unsigned nu = params_.model.nu;
	const std::size_t pairs = std::size_t{params_.n} * nu;
	if (kind_ == BinningKind::ExactTable) {
		if (K > kExactTableMaxK || capacity_ > 64) {
			throw std::domain_error("exact bin tables need K <= 16 and indices of at most 64 bits");
		}
		table_.resize(pairs << K);
		for (ServerIndex i = 0; i < params_.n; ++i) {
			for (VersionIndex u = 1; u <= nu; ++u) {
				Rng rng(derive_seed(seed_, {kTableTag, i, u}));
				const std::size_t base = (std::size_t{i} * nu + u - 1) << K;
				for (std::size_t w = 0; w < (std::size_t{1} << K); ++w) {
					table_[base + w] = rng();
				}
			}
		}
	} else if (kind_ == BinningKind::Linear) {
		columns_.assign(pairs * capacity_, BitVec(K));
		for (ServerIndex i = 0; i < params_.n; ++i) {
			for (VersionIndex u = 1; u <= nu; ++u) {
				Rng rng(derive_seed(seed_, {kLinearTag, i, u}));
				const std::size_t base = (std::size_t{i} * nu + u - 1) * capacity_;
				for (unsigned row = 0; row < K; ++row) {
					for (unsigned chunk = 0; chunk < words_; ++chunk) {
						const std::uint64_t x = rng();
						for (unsigned b = 0; b < 64 && chunk * 64 + b < capacity_; ++b) {
							if ((x >> b) & 1u) {
								columns_[base + chunk * 64 + b].set(row, true);
							}
						}
					}
				}
			}
		}
	}
}

std::uint64_t BinningCodebook::index_word(ServerIndex i, VersionIndex u, const Message& w, unsigned word) const {
	switch (kind_) {
	case BinningKind::RandomPrf: {
		std::uint64_t h = derive_seed(seed_, {kPrfTag, i, u, word});
		for (std::size_t k = 0; k < std::max<std::size_t>(1, w.word_count()); ++k) {
			h = splitmix64(h ^ w.word(k));
		}
		return h;
	}
	case BinningKind::ExactTable:
		return table_[((std::size_t{i} * params_.model.nu + u - 1) << params_.model.K) + w.low_u64()];
	case BinningKind::Linear: {
		const std::size_t base = (std::size_t{i} * params_.model.nu + u - 1) * capacity_;
		std::uint64_t out = 0;
		for (unsigned b = 0; b < 64 && word * 64 + b < capacity_; ++b) {
			if (w.dot(columns_[base + word * 64 + b])) {
				out |= std::uint64_t{1} << (63 - b);
			}
		}
		return out;
	}
	}
	return 0;
}

std::uint64_t BinningCodebook::bin_key(ServerIndex i, VersionIndex u, const Message& w, unsigned bits) const {
	if (bits > 64 || bits > capacity_) {
		throw std::domain_error("bin key longer than the codebook index");
	}
	return prefix(index_word(i, u, w, 0), bits);
}

BitString BinningCodebook::bin_index(ServerIndex i, VersionIndex u, const Message& w, unsigned bits) const {
	if (bits > capacity_) {
		throw std::domain_error("bin index longer than the codebook capacity");
	}
	BitString out;
	for (unsigned word = 0; word * 64 < bits; ++word) {
		const unsigned take = std::min(64u, bits - word * 64);
		out.append_bits(prefix(index_word(i, u, w, word), take), take);
	}
	return out;
}

BinaryMatrix BinningCodebook::generator(ServerIndex i, VersionIndex u) const {
	if (kind_ != BinningKind::Linear) {
		throw std::logic_error("only linear codebooks have a generator matrix");
	}
	const unsigned K = params_.model.K;
	BinaryMatrix g(K, capacity_);
	const std::size_t base = (std::size_t{i} * params_.model.nu + u - 1) * capacity_;
	for (unsigned col = 0; col < capacity_; ++col) {
		for (unsigned row = 0; row < K; ++row) {
			if (columns_[base + col].get(row)) {
				g.set(row, col, true);
			}
		}
	}
	return g;
}

nlohmann::json BinningCodebook::descriptor() const {
	nlohmann::json j{
		{"format", "mvc-binning-codebook"},
		{"version", 1},
		{"kind", to_string(kind_)},
		{"seed", seed_},
		{"K", params_.model.K},
		{"n", params_.n},
		{"c", params_.c},
		{"nu", params_.model.nu},
		{"radius", params_.model.radius},
		{"epsilon", params_.epsilon},
		{"capacity_bits", capacity_},
	};
	if (kind_ == BinningKind::Linear) {
		j["matrix"] = {{"rows", params_.model.K}, {"cols", capacity_}};
	}
	return j;
}

BinningCodebook BinningCodebook::from_descriptor(const nlohmann::json& j) {
	if (j.at("format").get<std::string>() != "mvc-binning-codebook" || j.at("version").get<int>() != 1) {
		throw std::invalid_argument("not a version-1 binning codebook descriptor");
	}
	BinningParams p(j.at("n").get<unsigned>(), j.at("c").get<unsigned>(),
	                CorrelationModel(j.at("K").get<unsigned>(), j.at("radius").get<unsigned>(), j.at("nu").get<unsigned>()),
	                j.at("epsilon").get<double>());
	BinningCodebook book(binning_kind_from_string(j.at("kind").get<std::string>()), j.at("seed").get<std::uint64_t>(), p);
	if (book.capacity() != j.at("capacity_bits").get<unsigned>()) {
		throw std::invalid_argument("descriptor capacity does not match its parameters");
	}
	return book;
}

// ---- scheme ------------------------------------------------------------------

BinningScheme::BinningScheme(BinningParams params, BinningOptions options)
	: MvcScheme(SchemeConfig(params.n, params.c, params.model)), params_(params), options_(options),
	  codebook_(options.kind, options.seed, params) {
	const unsigned K = params_.model.K;
	if (K > kExactTableMaxK) {
		return;
	}
	const unsigned nu = params_.model.nu;
	buckets_.resize(std::size_t{params_.n} * nu);
	keys_.resize(std::size_t{params_.n} * nu);
	for (ServerIndex i = 0; i < params_.n; ++i) {
		for (VersionIndex u = 1; u <= nu; ++u) {
			auto& keys = keys_[i * nu + u - 1];
			auto& bucket = buckets_[i * nu + u - 1];
			keys.resize(std::size_t{1} << K);
			bucket.reserve(keys.size());
			for (std::uint32_t w = 0; w < keys.size(); ++w) {
				keys[w] = codebook_.bin_key(i, u, Message::from_u64(K, w), std::min(64u, codebook_.capacity())) <<
				          (64 - std::min(64u, codebook_.capacity()));
				bucket.emplace_back(keys[w], w);
			}
			std::sort(bucket.begin(), bucket.end());
		}
	}
}

std::uint64_t BinningScheme::full_key(ServerIndex i, VersionIndex u, const Message& w) const {
	if (!keys_.empty()) {
		return keys_[i * params_.model.nu + u - 1][w.low_u64()];
	}
	const unsigned bits = std::min(64u, codebook_.capacity());
	return bits == 0 ? 0 : codebook_.bin_key(i, u, w, bits) << (64 - bits);
}

StoredSymbol BinningScheme::encode(ServerIndex i, VersionSet s, std::span<const Message> received) const {
	StoredSymbol out;
	const auto bits = version_bits(params_, s, options_.reduction_bits);
	const auto members = s.members();
	for (std::size_t j = 0; j < members.size(); ++j) {
		out.payload.append(codebook_.bin_index(i, members[j], received[j], bits[j]));
	}
	return out;
}

DecodeResult BinningScheme::decode(std::span<const ServerIndex> T, const SystemState& state,
                                   std::span<const StoredSymbol> symbols) const {
	if (T.size() != symbols.size() || T.size() < c()) {
		throw InsufficientSymbols("binning decoder needs c servers with one symbol each");
	}
	const std::vector<ServerIndex> servers(T.begin(), T.begin() + c());
	const auto latest = state.latest_common(servers);
	if (!latest) {
		return DecodeResult::null();
	}
	const unsigned K = params_.model.K;

	struct Constraint {
		ServerIndex server;
		unsigned bits;
		std::uint64_t key;
	};
	std::vector<std::vector<Constraint>> constraints(*latest + 1);
	try {
		for (unsigned k = 0; k < c(); ++k) {
			const VersionSet s = state.at(servers[k]);
			const auto bits = version_bits(params_, s, options_.reduction_bits);
			const auto members = s.members();
			std::size_t total = 0;
			for (auto b : bits) {
				total += b;
			}
			if (symbols[k].bit_length() != total) {
				return DecodeResult::error("stored symbol has the wrong length");
			}
			BitReader in(symbols[k].payload);
			for (std::size_t j = 0; j < members.size(); ++j) {
				if (bits[j] > 64) {
					throw std::domain_error("possible-set decoding supports indices of at most 64 bits");
				}
				const std::uint64_t key = in.read(bits[j]);
				if (members[j] <= *latest) {
					constraints[members[j]].push_back({servers[k], bits[j], key});
				}
			}
		}
	} catch (const MalformedSymbol& e) {
		return DecodeResult::error(e.what());
	}

	auto consistent = [&](VersionIndex u, const Message& w) {
		for (const auto& con : constraints[u]) {
			if (prefix(full_key(con.server, u, w), con.bits) != con.key) {
				return false;
			}
		}
		return true;
	};
	// Every w agreeing with the indices of version u, or nullopt if that set
	// cannot be listed within the brute-force limit.
	auto bin_members = [&](VersionIndex u) -> std::vector<Message> {
		std::vector<Message> out;
		if (!buckets_.empty()) {
			const auto& best = *std::max_element(constraints[u].begin(), constraints[u].end(),
			                                     [](const Constraint& a, const Constraint& b) { return a.bits < b.bits; });
			const auto& bucket = buckets_[best.server * params_.model.nu + u - 1];
			const std::uint64_t lo = best.bits == 0 ? 0 : best.key << (64 - best.bits);
			auto it = std::lower_bound(bucket.begin(), bucket.end(), std::make_pair(lo, std::uint32_t{0}));
			for (; it != bucket.end() && prefix(it->first, best.bits) == best.key; ++it) {
				const Message w = Message::from_u64(K, it->second);
				if (consistent(u, w)) {
					out.push_back(w);
				}
			}
			return out;
		}
		if (K > kBruteForceMaxK) {
			throw CapExceeded("possible-set decoding over 2^K candidates", BigInt(1) << K);
		}
		for (std::uint64_t x = 0; x < (std::uint64_t{1} << K); ++x) {
			const Message w = Message::from_u64(K, x);
			if (consistent(u, w)) {
				out.push_back(w);
			}
		}
		return out;
	};
	auto bucket_size = [&](VersionIndex u) -> std::uint64_t {
		if (buckets_.empty()) {
			return ~std::uint64_t{0};
		}
		unsigned bits = 0;
		for (const auto& con : constraints[u]) {
			bits = std::max(bits, con.bits);
		}
		return bits >= K ? 1 : std::uint64_t{1} << (K - bits);
	};

	std::vector<Message> reachable;
	VersionIndex previous = 0;
	for (VersionIndex u = 1; u <= *latest; ++u) {
		if (constraints[u].empty()) {
			continue;
		}
		std::vector<Message> next;
		if (previous == 0) {
			next = bin_members(u);
		} else {
			const unsigned radius = static_cast<unsigned>(
				std::min<std::uint64_t>(std::uint64_t{u - previous} * params_.model.radius, K));
			const BigInt ball = hamming_ball_volume(radius, K);
			if (BigInt(reachable.size()) * ball > BigInt(bucket_size(u))) {
				for (auto& w : bin_members(u)) {
					const bool near = std::any_of(reachable.begin(), reachable.end(),
					                              [&](const Message& x) { return hamming_distance(x, w) <= radius; });
					if (near) {
						next.push_back(std::move(w));
					}
				}
			} else {
				for (const auto& x : reachable) {
					for (auto& w : ball_members(x, radius)) {
						if (consistent(u, w)) {
							next.push_back(std::move(w));
						}
					}
				}
				std::sort(next.begin(), next.end());
				next.erase(std::unique(next.begin(), next.end()), next.end());
			}
		}
		if (next.empty()) {
			return DecodeResult::error("no possible tuple matches the stored indices");
		}
		reachable = std::move(next);
		previous = u;
	}
	if (reachable.size() != 1) {
		return DecodeResult::error(std::to_string(reachable.size()) + " candidates for the latest common version");
	}
	return DecodeResult::decoded(reachable.front());
}

AnalyticCost BinningScheme::analytic_cost() const {
	const auto cost = binning_worst_case_cost(params_);
	return {cost.closed_form, cost.integer_bits, K(),
	        "(K + (nu-1)*log2 Vol + nu(nu-1)/2 - nu*log2(eps*2^(-nu*n)))/c"};
}

// ---- rate region -------------------------------------------------------------

namespace {

RegionCheck finish(RegionCheck check) {
	check.satisfied = true;
	for (std::size_t k = 0; k < check.inequalities.size(); ++k) {
		const auto& q = check.inequalities[k];
		check.satisfied = check.satisfied && q.holds;
		if (k == 0 || q.slack < check.min_slack) {
			check.min_slack = q.slack;
		}
	}
	return check;
}

} // namespace

RegionCheck rate_region_check(const BinningParams& p, std::span<const VersionIndex> scenario,
                              std::span<const LinearRate> totals) {
	if (scenario.size() != totals.size() || scenario.empty()) {
		throw std::domain_error("one total rate per scenario version required");
	}
	const std::size_t L = scenario.size();
	const auto c = static_cast<std::int64_t>(p.c);
	RegionCheck check;
	for (std::size_t from = 1; from <= L; ++from) {
		LinearRate lhs;
		LinearRate rhs{0, 0, c * static_cast<std::int64_t>(L - 1), c};
		for (std::size_t j = from; j <= L; ++j) {
			lhs += totals[j - 1];
			if (j >= 2) {
				rhs.log_volume += c * (static_cast<std::int64_t>(scenario[j - 1]) - scenario[j - 2]);
			}
		}
		if (from == 1) {
			rhs.k += c;
		}
		const LinearRate diff = lhs - rhs;
		const bool exact_zero = diff.k == 0 && diff.log_volume == 0 && diff.constant == 0 && diff.exponent == 0;
		RateInequality q;
		q.from = static_cast<unsigned>(from);
		q.lhs = lhs.value(p) / c;
		q.rhs = rhs.value(p) / c;
		q.slack = exact_zero ? HighFloat(0) : diff.value(p) / c;
		q.holds = q.slack >= 0;
		check.inequalities.push_back(q);
	}
	// Report the suffix constraints first, the full sum last.
	std::rotate(check.inequalities.begin(), check.inequalities.begin() + 1, check.inequalities.end());
	return finish(std::move(check));
}

RegionCheck rate_region_check(const BinningParams& p, std::span<const VersionIndex> scenario,
                              std::span<const double> total_bits) {
	if (scenario.size() != total_bits.size() || scenario.empty()) {
		throw std::domain_error("one total rate per scenario version required");
	}
	const std::size_t L = scenario.size();
	const HighFloat log_vol = p.log2_volume();
	const HighFloat e = p.error_exponent();
	RegionCheck check;
	for (std::size_t from = 2; from <= L + 1; ++from) {
		const std::size_t start = from == L + 1 ? 1 : from;
		HighFloat lhs = 0;
		HighFloat rhs = HighFloat(L - 1) + e;
		for (std::size_t j = start; j <= L; ++j) {
			lhs += total_bits[j - 1];
			if (j >= 2) {
				rhs += HighFloat(scenario[j - 1] - scenario[j - 2]) * log_vol;
			}
		}
		if (start == 1) {
			rhs += p.model.K;
		}
		RateInequality q;
		q.from = static_cast<unsigned>(start);
		q.lhs = lhs;
		q.rhs = rhs;
		q.slack = lhs - rhs;
		q.holds = q.slack >= 0;
		check.inequalities.push_back(q);
	}
	return finish(std::move(check));
}

std::optional<RegionCheck> allocation_region_check(const BinningParams& p, const SystemState& state,
                                                   std::span<const ServerIndex> T) {
	const auto latest = state.latest_common(T);
	if (!latest) {
		return std::nullopt;
	}
	std::vector<LinearRate> by_version(*latest + 1);
	VersionSet seen;
	for (auto t : T) {
		const VersionSet s = state.at(t);
		const auto members = s.members();
		const auto rates = version_rates(p, s);
		for (std::size_t j = 0; j < members.size() && members[j] <= *latest; ++j) {
			by_version[members[j]] += rates[j];
			seen.insert(members[j]);
		}
	}
	std::vector<VersionIndex> scenario = seen.members();
	std::vector<LinearRate> totals;
	for (auto u : scenario) {
		totals.push_back(by_version[u]);
	}
	return rate_region_check(p, scenario, totals);
}

// ---- even parity ---------------------------------------------------------------

double even_parity_probability(double p, unsigned w, unsigned M) {
	if (!(p >= 0 && p <= 1)) {
		throw std::domain_error("probability outside [0, 1]");
	}
	return std::pow((1.0 + std::pow(1.0 - 2.0 * p, static_cast<double>(w))) / 2.0, static_cast<double>(M));
}

ParityEstimate estimate_even_parity(double p, unsigned w, unsigned M, std::uint64_t draws, std::uint64_t seed) {
	if (!(p >= 0 && p <= 1)) {
		throw std::domain_error("probability outside [0, 1]");
	}
	if (draws == 0) {
		throw std::domain_error("need at least one draw");
	}
	Rng rng(seed);
	std::uint64_t hits = 0;
	for (std::uint64_t d = 0; d < draws; ++d) {
		// Only the w rows of G selected by u matter; each column must have an
		// even number of ones among them.
		bool zero = true;
		for (unsigned col = 0; col < M; ++col) {
			unsigned ones = 0;
			for (unsigned row = 0; row < w; ++row) {
				ones += uniform_unit(rng) < p ? 1u : 0u;
			}
			zero = zero && (ones % 2 == 0);
		}
		hits += zero ? 1 : 0;
	}
	ParityEstimate e;
	e.draws = draws;
	e.estimate = static_cast<double>(hits) / static_cast<double>(draws);
	const double truth = even_parity_probability(p, w, M);
	e.standard_error = std::sqrt(truth * (1 - truth) / static_cast<double>(draws));
	return e;
}

// ---- costs and the three-version example ------------------------------------

BinningCost binning_worst_case_cost(const BinningParams& p) {
	const unsigned nu = p.model.nu;
	const HighFloat closed_form = (HighFloat(p.model.K) + HighFloat(nu - 1) * p.log2_volume() +
	                           HighFloat(nu) * (nu - 1) / 2 + HighFloat(nu) * p.error_exponent()) /
	                          p.c;
	BinningCost cost;
	cost.closed_form = static_cast<double>(closed_form);
	const VersionSet all((nu >= 32 ? 0u : (std::uint32_t{1} << nu)) - 1);
	HighFloat sum = 0;
	for (const auto& r : version_rates(p, all)) {
		sum += r.value(p);
	}
	cost.allocation_sum = static_cast<double>(sum / p.c);
	cost.discrepancy = static_cast<double>(sum / p.c - closed_form);
	if (nu <= 16) {
		for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << nu); ++mask) {
			double bits = 0;
			for (auto b : version_bits(p, VersionSet(mask))) {
				bits += b;
			}
			if (bits > cost.integer_bits) {
				cost.integer_bits = bits;
				cost.worst_set = VersionSet(mask);
			}
		}
	} else {
		for (auto b : version_bits(p, all)) {
			cost.integer_bits += b;
		}
		cost.worst_set = all;
	}
	return cost;
}

double binary_entropy(double x) {
	if (!(x >= 0 && x <= 1)) {
		throw std::domain_error("entropy argument outside [0, 1]");
	}
	if (x == 0 || x == 1) {
		return 0;
	}
	return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

bool Example1Report::all_excluded() const {
	return std::all_of(exclusions.begin(), exclusions.end(), [](const Exclusion& e) { return e.excluded; });
}

Example1Report example1_rate_comparison(double delta) {
	if (!(delta > 0 && delta < 0.5)) {
		throw std::domain_error("delta must lie in (0, 1/2)");
	}
	Example1Report r;
	r.delta = delta;
	r.h = binary_entropy(delta);
	r.h_star = binary_entropy(2 * delta * (1 - delta));
	// Server 1 holds W1, W2, W3; server 2 holds W2, W3; c = 2. Normalized
	// totals to leading order: W1 K/2, W2 (K H + K + K H)/2, W3 (K H + K H)/2.
	r.r1 = 0.5;
	r.r2 = 0.5 + r.h;
	r.r3 = r.h;
	auto add = [&](std::string subset, std::string requirement, double have, double need) {
		r.exclusions.push_back({std::move(subset), std::move(requirement), have, need, have < need});
	};
	add("{W3}", "R3 >= 1", r.r3, 1.0);
	add("{W1,W3}", "R3 >= H(d*d)", r.r3, r.h_star);
	add("{W2,W3}", "R2+R3 >= 1+H(d)", r.r2 + r.r3, 1.0 + r.h);
	add("{W1,W2,W3}", "R1+R3 >= 1+H(d*d)", r.r1 + r.r3, 1.0 + r.h_star);
	return r;
}

} // namespace mvc
