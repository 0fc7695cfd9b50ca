#include <doctest.h>

#include <cmath>

#include "mvc/bounds.hpp"
#include "mvc/registry.hpp"
#include "oracle.hpp"

using namespace mvc;

namespace {

// Straight from the counting argument, all in GMP/MPFR.
oracle::Mpfr general_oracle(unsigned n, unsigned c, unsigned nu, unsigned K, unsigned r, double eps) {
	using oracle::Mpfr;
	const unsigned d = c + nu - 1;
	oracle::Mpz arrangements = oracle::binomial(d, nu);
	mpz_mul(arrangements.get(), arrangements.get(), oracle::factorial(nu).get());
	Mpfr err(0.0);
	if (eps > 0) {
		Mpfr scaled(eps);
		mpfr_mul_2ui(scaled.get(), scaled.get(), nu * n, MPFR_RNDN);
		err = oracle::log2(Mpfr(1.0) - scaled);
	}
	return (Mpfr(double(K)) + Mpfr(double(nu - 1)) * oracle::log2(oracle::ball_volume(r, K)) + err -
	        oracle::log2(arrangements)) /
	       Mpfr(double(d));
}

} // namespace

TEST_SUITE("bounds") {

TEST_CASE("general bound matches the big-number oracle") {
	for (unsigned K : {8u, 32u, 64u, 128u, 512u}) {
		for (unsigned nu : {1u, 2u, 3u}) {
			for (unsigned c : {1u, 2u, 4u, 8u}) {
				const unsigned n = 8;
				const double eps = std::ldexp(1.0, -static_cast<int>(nu * n) - 1);
				const BoundParams p{n, c, nu, K, K / 16, eps};
				CHECK(oracle::relative_error(lower_bound_general_high(p), general_oracle(n, c, nu, K, K / 16, eps)) <
				      0x1p-100);
			}
		}
	}
}

TEST_CASE("small worked values") {
	const BoundParams p{4, 2, 2, 8, 1, 0.0};
	// (8 + log2 9 - log2 6)/3
	CHECK(lower_bound_general(p) == doctest::Approx((8 + std::log2(9.0) - std::log2(6.0)) / 3).epsilon(1e-14));
	CHECK(lower_bound_general(p) == doctest::Approx(2.861654).epsilon(1e-6));
	// (8 + log2 9 - 1)/3
	CHECK(lower_bound_two_versions(p) == doctest::Approx((7 + std::log2(9.0)) / 3).epsilon(1e-14));
}

TEST_CASE("one version reduces to K/c minus log c") {
	for (unsigned c : {1u, 3u, 5u}) {
		const double eps = 0.01;
		const BoundParams p{6, c, 1, 40, 2, eps};
		const double expected = (40 + std::log2(1 - eps * 64) - std::log2(c)) / c;
		CHECK(lower_bound_general(p) == doctest::Approx(expected).epsilon(1e-13));
	}
}

TEST_CASE("domain guards") {
	CHECK_THROWS_AS(lower_bound_general({4, 2, 2, 8, 1, std::ldexp(1.0, -8)}), std::domain_error);
	CHECK_NOTHROW(lower_bound_general({4, 2, 2, 8, 1, std::ldexp(1.0, -9)}));
	CHECK_THROWS_AS(lower_bound_two_versions({4, 2, 3, 8, 1, 0}), std::domain_error);
	CHECK_THROWS_AS(lower_bound_general({4, 5, 2, 8, 1, 0}), std::domain_error);
	CHECK_THROWS_AS(lower_bound_general({4, 2, 2, 8, 9, 0}), std::domain_error);
	CHECK_THROWS_AS(lower_bound_general({4, 2, 2, 8, 1, -0.1}), std::domain_error);
}

TEST_CASE("the two-version constant is at least as tight") {
	for (unsigned c = 1; c <= 16; ++c) {
		const BoundParams p{16, c, 2, 64, 4, 0};
		// log2 c <= log2(C(c+1,2)*2) for every c >= 1.
		CHECK(lower_bound_two_versions(p) >= lower_bound_general(p));
	}
}

TEST_CASE("monotone in K and radius") {
	double last = -1e9;
	for (unsigned K = 8; K <= 256; K += 8) {
		const double b = lower_bound_general({8, 4, 2, K, 2, 0});
		CHECK(b >= last);
		last = b;
	}
	last = -1e9;
	for (unsigned r = 0; r <= 64; ++r) {
		const double b = lower_bound_general({8, 4, 3, 64, r, 0});
		CHECK(b >= last);
		last = b;
	}
}

TEST_CASE("gap factor") {
	const BoundParams p{4, 2, 2, 8, 1, 0};
	CHECK(gap_factor(p, lower_bound_general(p)) == doctest::Approx(1.0));
	CHECK_THROWS(gap_factor({4, 4, 2, 1, 0, 0}, 1.0));  // bound (1 - log2 20)/5 < 0
	// Replication against the bound for many servers grows like (c+nu-1)K/(K + log Vol).
	const BoundParams wide{16, 12, 2, 64, 2, 0};
	CHECK(gap_factor(wide, 64) > 2);
}

TEST_CASE("soundness at small points") {
	for (auto [n, c, K, r] : std::vector<std::array<unsigned, 4>>{{4, 2, 8, 1}, {4, 3, 12, 1}, {6, 3, 12, 2}, {3, 1, 8, 2}}) {
		const CorrelationModel model(K, r, 2);
		const double bound = lower_bound_general({n, c, 2, K, r, 0});
		for (const auto& name : {"replication", "mds", "delta", "rs-update"}) {
			const auto s = make_scheme({name, SchemeConfig(n, c, model)});
			CHECK_MESSAGE(bound <= double(worst_case_cost(*s).measured_bits), name);
		}
	}
}

}
