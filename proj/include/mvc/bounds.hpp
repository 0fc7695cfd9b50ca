#pragma once

#include <string>
#include <vector>

#include "mvc/combinatorics.hpp"

namespace mvc {

struct BoundParams {
	unsigned n = 0;
	unsigned c = 0;
	unsigned nu = 0;
	unsigned K = 0;
	unsigned radius = 0;
	double epsilon = 0;  // 0 <= epsilon < 2^(-nu*n)

	// Throws std::domain_error on a violated precondition.
	void validate() const;
};

// Counting lower bound on log2 q for any (n, c, nu) MVC with error epsilon:
//   (K + (nu-1) log Vol + log(1 - eps 2^(nu n)) - log(C(c+nu-1, nu) nu!)) / (c+nu-1)
HighFloat lower_bound_general_high(const BoundParams& p);
double lower_bound_general(const BoundParams& p);

// Two-version bound with the sharper constant:
//   (K + log Vol + log(1 - eps 2^(2n)) - log c) / (c+1)
HighFloat lower_bound_two_versions_high(const BoundParams& p);
double lower_bound_two_versions(const BoundParams& p);

// scheme_cost / bound; the bound must be positive.
double gap_factor(const BoundParams& p, double scheme_cost);

} // namespace mvc
