#include "mvc/bounds.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <stdexcept>

namespace mvc {

namespace {

// log2(1 - eps 2^(nu n)), or 0 for eps = 0.
HighFloat error_term(const BoundParams& p) {
	if (p.epsilon == 0) {
		return 0;
	}
	const HighFloat scaled = ldexp(HighFloat(p.epsilon), static_cast<int>(p.nu * p.n));
	return log2_high(HighFloat(1 - scaled));
}

} // namespace

void BoundParams::validate() const {
	if (n == 0 || c == 0 || c > n) {
		throw std::domain_error("need 1 <= c <= n");
	}
	if (nu == 0) {
		throw std::domain_error("nu must be positive");
	}
	if (K == 0 || radius > K) {
		throw std::domain_error("need K >= 1 and radius <= K");
	}
	if (!(epsilon >= 0)) {
		throw std::domain_error("epsilon must be nonnegative");
	}
	if (ldexp(HighFloat(epsilon), static_cast<int>(nu * n)) >= 1) {
		throw std::domain_error("epsilon must be below 2^(-nu*n)");
	}
}

HighFloat lower_bound_general_high(const BoundParams& p) {
	p.validate();
	const unsigned d = p.c + p.nu - 1;
	const HighFloat volume = log2_high(hamming_ball_volume(p.radius, p.K));
	const HighFloat arrangements = log2_high(BigInt(binomial(d, p.nu) * factorial(p.nu)));
	return (HighFloat(p.K) + HighFloat(p.nu - 1) * volume + error_term(p) - arrangements) / d;
}

double lower_bound_general(const BoundParams& p) {
	return static_cast<double>(lower_bound_general_high(p));
}

HighFloat lower_bound_two_versions_high(const BoundParams& p) {
	if (p.nu != 2) {
		throw std::domain_error("the two-version bound needs nu = 2");
	}
	p.validate();
	const HighFloat volume = log2_high(hamming_ball_volume(p.radius, p.K));
	return (HighFloat(p.K) + volume + error_term(p) - log2_high(BigInt(p.c))) / (p.c + 1);
}

double lower_bound_two_versions(const BoundParams& p) {
	return static_cast<double>(lower_bound_two_versions_high(p));
}

double gap_factor(const BoundParams& p, double scheme_cost) {
	const double bound = lower_bound_general(p);
	if (!(bound > 0)) {
		throw std::domain_error("gap factor needs a positive lower bound");
	}
	return scheme_cost / bound;
}

} // namespace mvc
