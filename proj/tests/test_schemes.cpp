#include <doctest.h>

#include <cmath>

#include "mvc/registry.hpp"
#include "mvc/verifier.hpp"
#include "oracle.hpp"

using namespace mvc;

namespace {

SchemePtr build(const std::string& name, unsigned n, unsigned c, CorrelationModel model) {
	SchemeRequest r;
	r.name = name;
	r.config = SchemeConfig(n, c, model);
	return make_scheme(r);
}

Message random_message(unsigned K, Rng& rng) {
	Message w(K);
	for (unsigned k = 0; k < K; ++k) {
		w.set(k, rng() & 1u);
	}
	return w;
}

} // namespace

TEST_SUITE("schemes") {

TEST_CASE("config validation") {
	CHECK_THROWS(SchemeConfig(0, 1, CorrelationModel(8, 1, 2)));
	CHECK_THROWS(SchemeConfig(4, 5, CorrelationModel(8, 1, 2)));
	CHECK_THROWS(SchemeConfig(4, 0, CorrelationModel(8, 1, 2)));
	CHECK_THROWS(make_scheme({"nonsense", SchemeConfig(4, 2, CorrelationModel(8, 1, 2))}));
}

TEST_CASE("analytic formulas at K=8, c=2, nu=2, r=1") {
	const CorrelationModel model(8, 1, 2);
	CHECK(build("replication", 4, 2, model)->analytic_cost().formula == 8.0);
	CHECK(build("mds", 4, 2, model)->analytic_cost().formula == 8.0);
	// K/c + log2 9
	CHECK(build("delta", 4, 2, model)->analytic_cost().formula == doctest::Approx(4 + std::log2(9.0)).epsilon(1e-12));
	CHECK(build("latest-only", 4, 2, model)->analytic_cost().formula == 4.0);
}

TEST_CASE("unpadded field degree") {
	CHECK(unpadded_field_degree(4, 2, 8) == 2);
	CHECK(unpadded_field_degree(8, 4, 64) == 4);  // m=3 would pad 64 to 72
	CHECK(unpadded_field_degree(8, 4, 60) == 3);
}

TEST_CASE("every scheme decodes the latest common version on random states") {
	const CorrelationModel model(24, 2, 3);
	Rng rng(11);
	for (const auto& name : {"replication", "mds", "delta", "rs-update"}) {
		const auto s = build(name, 6, 3, model);
		for (int t = 0; t < 200; ++t) {
			const auto tuple = sample_tuple(model, rng());
			const auto state = SystemState::from_index(uniform_below(rng, 1u << 18), 6, 3, 3);
			std::vector<ServerIndex> T{0, 2, 5};
			const auto out = check_case(*s, state, T, tuple, state.latest_common(T));
			CHECK_MESSAGE(out.ok, name, " state ", state.to_string());
		}
	}
}

TEST_CASE("replication and MDS store exact sizes") {
	const CorrelationModel model(16, 1, 2);
	const auto mds = build("mds", 4, 2, model);
	const auto rep = build("replication", 4, 2, model);
	Rng rng(1);
	const auto tuple = sample_tuple(model, 5);
	CHECK(mds->encode_tuple(0, VersionSet{1, 2}, tuple).content_bits() == 16);
	CHECK(mds->encode_tuple(0, VersionSet{2}, tuple).content_bits() == 8);
	CHECK(mds->encode_tuple(0, VersionSet{}, tuple).empty());
	CHECK(rep->encode_tuple(3, VersionSet{1, 2}, tuple).content_bits() == 16);
}

TEST_CASE("delta difference index round trips") {
	const auto s = std::dynamic_pointer_cast<const DeltaScheme>(build("delta", 4, 2, CorrelationModel(40, 3, 3)));
	REQUIRE(s);
	CHECK(s->index_bits(1) == ceil_log2(hamming_ball_volume(3, 40)));
	CHECK(s->index_bits(2) == ceil_log2(hamming_ball_volume(6, 40)));
	Rng rng(4);
	const BallIndexer ball(40, 3);
	for (int t = 0; t < 100; ++t) {
		const auto y = ball.sample(rng);
		const auto idx = s->rank(1, y);
		CHECK(idx == ball_rank(y));
		CHECK(*s->unrank(1, idx) == y);
	}
	CHECK_FALSE(s->unrank(1, hamming_ball_volume(3, 40)).has_value());
}

TEST_CASE("delta handles a version gap") {
	const CorrelationModel model(16, 2, 3);
	const auto s = build("delta", 4, 2, model);
	for (std::uint64_t seed = 0; seed < 50; ++seed) {
		const auto tuple = sample_tuple(model, seed);
		// Servers 1 and 2 both skipped version 2.
		const SystemState state({VersionSet{1, 3}, VersionSet{1, 3}, VersionSet{2}, VersionSet{}}, 2);
		std::vector<ServerIndex> T{0, 1};
		CHECK(check_case(*s, state, T, tuple, 3).ok);
	}
}

TEST_CASE("update records: a single flipped bit touches at most one symbol per server") {
	const CorrelationModel model(24, 1, 2);
	const auto s = std::dynamic_pointer_cast<const RsUpdateScheme>(build("rs-update", 6, 3, model));
	REQUIRE(s);
	const auto& codec = s->codec();
	Rng rng(8);
	for (int t = 0; t < 10; ++t) {
		const auto w = random_message(24, rng);
		for (unsigned k = 0; k < 24; ++k) {
			auto v = w;
			v.flip(k);
			for (unsigned i = 0; i < 6; ++i) {
				const auto a = codec.encode_server(i, w);
				const auto b = codec.encode_server(i, v);
				unsigned changed = 0;
				for (std::size_t j = 0; j < a.size(); ++j) {
					changed += a[j] != b[j];
				}
				CHECK(changed <= 1);
			}
		}
	}
}

TEST_CASE("update record size switches to a full stream when shorter") {
	const auto s = std::dynamic_pointer_cast<const RsUpdateScheme>(build("rs-update", 4, 2, CorrelationModel(32, 8, 2)));
	REQUIRE(s);
	// 8 blocks of 2-bit symbols: index 3 bits + value 2 bits per record.
	CHECK(s->index_bits() == 3);
	CHECK(s->records_shorter(3));
	CHECK_FALSE(s->records_shorter(4));
	const auto tuple = sample_tuple(s->model(), 3);
	const auto sym = s->encode_tuple(1, VersionSet{1, 2}, tuple);
	CHECK(sym.content_bits() <= s->analytic_cost().integer_bound);
}

TEST_CASE("latest-only fails exactly when newest versions differ") {
	const CorrelationModel model(8, 1, 2);
	const auto s = build("latest-only", 4, 2, model);
	const auto tuple = sample_tuple(model, 1);
	std::vector<ServerIndex> T{0, 1};
	const SystemState same({VersionSet{1, 2}, VersionSet{2}, {}, {}}, 2);
	CHECK(check_case(*s, same, T, tuple, 2).ok);
	const SystemState split({VersionSet{1, 2}, VersionSet{1}, {}, {}}, 2);
	const auto out = check_case(*s, split, T, tuple, 1);
	CHECK_FALSE(out.ok);
	CHECK(out.result.status == DecodeStatus::Error);
}

TEST_CASE("quorum bridge picks the best c-subset") {
	const CorrelationModel model(8, 1, 2);
	SchemeRequest r{"mds", SchemeConfig(4, 2, model)};
	const auto bridged = make_quorum_scheme(r, 3, 3);
	CHECK(bridged->read_arity() == 3);
	CHECK(bridged->c() == 2);
	const auto tuple = sample_tuple(model, 2);
	// Version 2 is complete at servers 1..3; the read sees 1, 2, 4.
	const SystemState state({VersionSet{1, 2}, VersionSet{2}, VersionSet{1, 2}, VersionSet{1}}, 3);
	std::vector<ServerIndex> T{0, 1, 3};
	const auto out = check_case(*bridged, state, T, tuple, state.latest_complete(2));
	CHECK(out.ok);
	CHECK(*out.decoded_version >= 2);
	CHECK_THROWS(make_quorum_scheme(r, 2, 2));
	CHECK_THROWS(quorum_bridge(build("mds", 4, 3, model), 3, 3));
}

TEST_CASE("decoders reject the wrong number of symbols") {
	const CorrelationModel model(8, 1, 2);
	const auto s = build("mds", 4, 2, model);
	const auto state = SystemState::from_index(0xff, 4, 2, 2);
	std::vector<ServerIndex> T{0};
	std::vector<StoredSymbol> syms(1);
	CHECK_THROWS(s->decode(T, state, syms));
}

TEST_CASE("measured worst case within the integer bound") {
	const CorrelationModel model(8, 1, 2);
	for (const auto& name : {"replication", "mds", "delta", "rs-update", "latest-only", "binning"}) {
		const auto s = build(name, 4, 2, model);
		const auto w = worst_case_cost(*s);
		CHECK(w.exhaustive);
		CHECK_MESSAGE(w.measured_bits <= s->analytic_cost().integer_bound, name);
	}
}

TEST_CASE("spread flips change one bit per block") {
	const CorrelationModel model(32, 2, 3);
	for (const auto& t : spread_flip_tuples(model, 8)) {
		CHECK(t.is_possible(model));
		for (unsigned u = 2; u <= 3; ++u) {
			const auto d = t.at(u) ^ t.at(u - 1);
			CHECK(d.weight() == 2);
			for (unsigned b = 0; b < 4; ++b) {
				CHECK(__builtin_popcountll(d.get_bits(b * 8, 8)) <= 1);
			}
		}
	}
}

}
