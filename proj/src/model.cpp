#include "mvc/model.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

namespace mvc {

VersionSet::VersionSet(std::initializer_list<VersionIndex> versions) {
	for (auto u : versions) {
		if (u < 1 || u > 31) {
			throw std::domain_error("version index out of range");
		}
		insert(u);
	}
}

unsigned VersionSet::size() const noexcept {
	return static_cast<unsigned>(std::popcount(mask_));
}

std::optional<VersionIndex> VersionSet::max() const noexcept {
	if (mask_ == 0) {
		return std::nullopt;
	}
	return static_cast<VersionIndex>(32 - std::countl_zero(mask_));
}

std::optional<VersionIndex> VersionSet::min() const noexcept {
	if (mask_ == 0) {
		return std::nullopt;
	}
	return static_cast<VersionIndex>(std::countr_zero(mask_) + 1);
}

std::vector<VersionIndex> VersionSet::members() const {
	std::vector<VersionIndex> out;
	for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
		out.push_back(static_cast<VersionIndex>(std::countr_zero(m) + 1));
	}
	return out;
}

VersionSet VersionSet::only_up_to(VersionIndex u) const noexcept {
	if (u >= 32) {
		return *this;
	}
	return VersionSet(mask_ & ((std::uint32_t{1} << u) - 1));
}

std::string VersionSet::to_string() const {
	std::string out = "{";
	bool first = true;
	for (auto u : members()) {
		if (!first) {
			out += ",";
		}
		out += std::to_string(u);
		first = false;
	}
	return out + "}";
}

CorrelationModel::CorrelationModel(unsigned K_, unsigned radius_, unsigned nu_) : K(K_), radius(radius_), nu(nu_) {
	if (radius > K) {
		throw std::domain_error("radius must not exceed K");
	}
	if (nu < 1 || nu > 31) {
		throw std::domain_error("nu must lie in [1, 31]");
	}
	if (K == 0 || K > BitVec::kMaxBits) {
		throw std::domain_error("K must lie in [1, " + std::to_string(BitVec::kMaxBits) + "]");
	}
}

CorrelationModel CorrelationModel::from_rational(std::uint64_t num, std::uint64_t den, unsigned K, unsigned nu) {
	if (den == 0) {
		throw std::domain_error("delta denominator is zero");
	}
	const BigInt scaled = BigInt(num) * K / den;
	if (scaled > K) {
		throw std::domain_error("delta must not exceed 1");
	}
	return CorrelationModel(K, static_cast<unsigned>(scaled), nu);
}

BigInt CorrelationModel::possible_set_size() const {
	return (BigInt(1) << K) * boost::multiprecision::pow(ball_volume(), nu - 1);
}

bool VersionTuple::is_possible(const CorrelationModel& model) const {
	if (versions.size() != model.nu) {
		return false;
	}
	for (const auto& w : versions) {
		if (w.size() != model.K) {
			return false;
		}
	}
	for (std::size_t m = 1; m < versions.size(); ++m) {
		if (hamming_distance(versions[m - 1], versions[m]) > model.radius) {
			return false;
		}
	}
	return true;
}

std::optional<VersionIndex> VersionTuple::latest_match(const Message& w, VersionIndex from) const {
	for (auto u = nu(); u >= from && u >= 1; --u) {
		if (versions[u - 1] == w) {
			return u;
		}
	}
	return std::nullopt;
}

SystemState::SystemState(std::vector<VersionSet> per_server, unsigned c_w)
	: per_server_(std::move(per_server)), c_w_(c_w) {}

SystemState SystemState::from_index(std::uint64_t index, unsigned n, unsigned nu, unsigned c_w) {
	std::vector<VersionSet> sets(n);
	const std::uint64_t mask = (std::uint64_t{1} << nu) - 1;
	for (unsigned i = 0; i < n; ++i) {
		sets[i] = VersionSet(static_cast<std::uint32_t>((index >> (i * nu)) & mask));
	}
	return SystemState(std::move(sets), c_w);
}

std::uint64_t SystemState::index(unsigned nu) const {
	std::uint64_t out = 0;
	for (unsigned i = 0; i < n(); ++i) {
		out |= std::uint64_t{per_server_[i].mask()} << (i * nu);
	}
	return out;
}

unsigned SystemState::holders(VersionIndex u) const noexcept {
	unsigned count = 0;
	for (auto s : per_server_) {
		count += s.contains(u) ? 1 : 0;
	}
	return count;
}

VersionSet SystemState::complete_versions(unsigned nu) const {
	VersionSet out;
	for (VersionIndex u = 1; u <= nu; ++u) {
		if (holders(u) >= c_w_) {
			out.insert(u);
		}
	}
	return out;
}

std::optional<VersionIndex> SystemState::latest_complete(unsigned nu) const {
	return complete_versions(nu).max();
}

VersionSet SystemState::common(std::span<const ServerIndex> servers) const {
	if (servers.empty()) {
		throw std::domain_error("common version set of an empty server set");
	}
	std::uint32_t mask = ~std::uint32_t{0};
	for (auto t : servers) {
		mask &= per_server_.at(t).mask();
	}
	return VersionSet(mask);
}

std::optional<VersionIndex> SystemState::latest_common(std::span<const ServerIndex> servers) const {
	return common(servers).max();
}

VersionSet SystemState::union_of(std::span<const ServerIndex> servers) const {
	VersionSet out;
	for (auto t : servers) {
		out = out | per_server_.at(t);
	}
	return out;
}

std::string SystemState::to_string() const {
	std::string out = "[";
	for (std::size_t i = 0; i < per_server_.size(); ++i) {
		if (i) {
			out += " ";
		}
		out += per_server_[i].to_string();
	}
	return out + "]";
}

std::optional<VersionIndex> latest_complete_version(const SystemState& state, unsigned nu) {
	return state.latest_complete(nu);
}

std::optional<VersionIndex> latest_common_version(const SystemState& state, std::span<const ServerIndex> servers) {
	return state.latest_common(servers);
}

namespace {

Message random_message(Rng& rng, unsigned K) {
	Message w(K);
	for (unsigned pos = 0; pos < K; pos += 64) {
		const unsigned count = std::min(64u, K - pos);
		std::uint64_t bits = rng();
		if (count < 64) {
			bits &= (std::uint64_t{1} << count) - 1;
		}
		w.set_bits(pos, count, bits);
	}
	return w;
}

void require_enumerable_space(unsigned K, std::uint64_t cap) {
	if (K >= 63 || (std::uint64_t{1} << K) > cap) {
		throw CapExceeded("enumeration of {0,1}^" + std::to_string(K) + " exceeds cap", BigInt(1) << K);
	}
}

} // namespace

VersionTuple sample_tuple(const CorrelationModel& model, std::uint64_t seed) {
	Rng rng(seed);
	const BallIndexer ball(model.K, model.radius);
	VersionTuple tuple;
	tuple.versions.reserve(model.nu);
	tuple.versions.push_back(random_message(rng, model.K));
	for (unsigned m = 1; m < model.nu; ++m) {
		tuple.versions.push_back(tuple.versions.back() ^ ball.sample(rng));
	}
	return tuple;
}

PossibleSetEnumerator::PossibleSetEnumerator(const CorrelationModel& model, std::uint64_t cap)
	: model_(model), ball_(model.K, model.radius) {
	const BigInt total = model.possible_set_size();
	if (total > BigInt(cap)) {
		throw CapExceeded("possible set enumeration exceeds cap " + std::to_string(cap), total);
	}
	size_ = static_cast<std::uint64_t>(total);
}

VersionTuple PossibleSetEnumerator::tuple_at(std::uint64_t index) const {
	if (index >= size_) {
		throw std::out_of_range("tuple index past the end of the possible set");
	}
	const std::uint64_t vol = ball_.volume_u64();
	std::vector<std::uint64_t> digits(model_.nu, 0);
	for (unsigned m = model_.nu; m-- > 1;) {
		digits[m] = index % vol;
		index /= vol;
	}
	VersionTuple tuple;
	tuple.versions.reserve(model_.nu);
	tuple.versions.push_back(Message::from_u64(model_.K, index));
	for (unsigned m = 1; m < model_.nu; ++m) {
		tuple.versions.push_back(tuple.versions.back() ^ ball_.unrank(digits[m]));
	}
	return tuple;
}

bool PossibleSetEnumerator::Cursor::next(VersionTuple& out) {
	if (position_ >= owner_->size()) {
		return false;
	}
	out = owner_->tuple_at(position_++);
	return true;
}

std::vector<VersionTuple> enumerate_possible_set(const CorrelationModel& model, std::uint64_t cap) {
	const PossibleSetEnumerator enumerator(model, cap);
	std::vector<VersionTuple> out;
	out.reserve(enumerator.size());
	auto cursor = enumerator.cursor();
	VersionTuple t;
	while (cursor.next(t)) {
		out.push_back(std::move(t));
	}
	return out;
}

std::vector<Message> ball_members(const Message& center, unsigned radius) {
	const unsigned K = static_cast<unsigned>(center.size());
	const BallIndexer ball(K, std::min(radius, K));
	if (!ball.fits_u64()) {
		throw CapExceeded("ball too large to enumerate", ball.volume());
	}
	std::vector<Message> out;
	out.reserve(ball.volume_u64());
	for (std::uint64_t r = 0; r < ball.volume_u64(); ++r) {
		out.push_back(center ^ ball.unrank(r));
	}
	return out;
}

std::vector<std::vector<Message>> enumerate_conditional_set(const CorrelationModel& model, const PartialTuple& fixed,
                                                            const std::vector<VersionIndex>& wanted,
                                                            std::uint64_t cap) {
	const unsigned K = model.K;
	auto span_radius = [&](VersionIndex a, VersionIndex b) {
		return static_cast<unsigned>(std::min<std::uint64_t>(std::uint64_t{b - a} * model.radius, K));
	};

	// role: 0 = free, 1 = fixed, 2 = wanted
	std::vector<int> role(model.nu + 1, 0);
	std::vector<Message> value(model.nu + 1);
	for (const auto& [u, w] : fixed) {
		if (u < 1 || u > model.nu || role[u] != 0) {
			throw std::domain_error("fixed versions must be distinct indices in [1, nu]");
		}
		if (w.size() != K) {
			throw std::domain_error("fixed message has the wrong length");
		}
		role[u] = 1;
		value[u] = w;
	}
	for (auto u : wanted) {
		if (u < 1 || u > model.nu || role[u] != 0) {
			throw std::domain_error("wanted versions must be distinct, in [1, nu], and disjoint from fixed");
		}
		role[u] = 2;
	}

	std::vector<VersionIndex> assigned;
	for (VersionIndex u = 1; u <= model.nu; ++u) {
		if (role[u] != 0) {
			assigned.push_back(u);
		}
	}

	// Consecutive fixed pairs are checked up front.
	for (std::size_t k = 1; k < assigned.size(); ++k) {
		const auto a = assigned[k - 1];
		const auto b = assigned[k];
		if (role[a] == 1 && role[b] == 1 && hamming_distance(value[a], value[b]) > span_radius(a, b)) {
			return {};
		}
	}

	std::vector<VersionIndex> order(wanted.begin(), wanted.end());
	std::sort(order.begin(), order.end());

	// Size estimate: each wanted index ranges over its predecessor's ball or the whole space.
	BigInt estimate = 1;
	for (auto u : order) {
		const auto it = std::find(assigned.begin(), assigned.end(), u);
		if (it == assigned.begin()) {
			estimate *= BigInt(1) << K;
		} else {
			estimate *= hamming_ball_volume(span_radius(*(it - 1), u), K);
		}
	}
	if (estimate > BigInt(cap)) {
		throw CapExceeded("conditional set enumeration exceeds cap " + std::to_string(cap), estimate);
	}

	std::vector<std::vector<Message>> out;
	std::map<VersionIndex, std::size_t> output_slot;
	for (std::size_t k = 0; k < wanted.size(); ++k) {
		output_slot[wanted[k]] = k;
	}

	auto recurse = [&](auto&& self, std::size_t depth) -> void {
		if (depth == order.size()) {
			std::vector<Message> completion(wanted.size());
			for (auto u : order) {
				completion[output_slot[u]] = value[u];
			}
			out.push_back(std::move(completion));
			return;
		}
		const VersionIndex u = order[depth];
		const auto it = std::find(assigned.begin(), assigned.end(), u);
		const bool has_prev = it != assigned.begin();
		const bool has_next_fixed = (it + 1) != assigned.end() && role[*(it + 1)] == 1;

		auto consider = [&](const Message& w) {
			if (has_next_fixed) {
				const auto q = *(it + 1);
				if (hamming_distance(w, value[q]) > span_radius(u, q)) {
					return;
				}
			}
			value[u] = w;
			self(self, depth + 1);
		};

		if (has_prev) {
			const auto p = *(it - 1);
			for (const auto& w : ball_members(value[p], span_radius(p, u))) {
				consider(w);
			}
		} else {
			require_enumerable_space(K, cap);
			for (std::uint64_t x = 0; x < (std::uint64_t{1} << K); ++x) {
				consider(Message::from_u64(K, x));
			}
		}
	};
	recurse(recurse, 0);
	return out;
}

} // namespace mvc
