#pragma once

// Independent arithmetic for cross-checks: GMP integers and MPFR floats at
// 256 bits, nothing shared with the library's Boost-based code.

#include <cmath>
#include <string>

#include <gmp.h>
#include <mpfr.h>

#include "mvc/combinatorics.hpp"

namespace oracle {

class Mpz {
public:
	Mpz() { mpz_init(v_); }
	explicit Mpz(unsigned long x) { mpz_init_set_ui(v_, x); }
	Mpz(const Mpz& o) { mpz_init_set(v_, o.v_); }
	Mpz& operator=(const Mpz& o) {
		mpz_set(v_, o.v_);
		return *this;
	}
	~Mpz() { mpz_clear(v_); }
	mpz_ptr get() { return v_; }
	mpz_srcptr get() const { return v_; }
	std::string str() const {
		char* s = mpz_get_str(nullptr, 10, v_);
		std::string out(s);
		void (*freefunc)(void*, size_t);
		mp_get_memory_functions(nullptr, nullptr, &freefunc);
		freefunc(s, out.size() + 1);
		return out;
	}

private:
	mpz_t v_;
};

class Mpfr {
public:
	static constexpr mpfr_prec_t kPrec = 256;
	Mpfr() { mpfr_init2(v_, kPrec), mpfr_set_zero(v_, 1); }
	explicit Mpfr(double x) { mpfr_init2(v_, kPrec), mpfr_set_d(v_, x, MPFR_RNDN); }
	explicit Mpfr(const Mpz& z) { mpfr_init2(v_, kPrec), mpfr_set_z(v_, z.get(), MPFR_RNDN); }
	Mpfr(const Mpfr& o) { mpfr_init2(v_, kPrec), mpfr_set(v_, o.v_, MPFR_RNDN); }
	Mpfr& operator=(const Mpfr& o) {
		mpfr_set(v_, o.v_, MPFR_RNDN);
		return *this;
	}
	~Mpfr() { mpfr_clear(v_); }
	mpfr_ptr get() { return v_; }
	mpfr_srcptr get() const { return v_; }
	double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

	friend Mpfr operator+(const Mpfr& a, const Mpfr& b) { Mpfr r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
	friend Mpfr operator-(const Mpfr& a, const Mpfr& b) { Mpfr r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
	friend Mpfr operator*(const Mpfr& a, const Mpfr& b) { Mpfr r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
	friend Mpfr operator/(const Mpfr& a, const Mpfr& b) { Mpfr r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }

private:
	mpfr_t v_;
};

inline Mpz binomial(unsigned long n, unsigned long k) {
	Mpz r;
	mpz_bin_uiui(r.get(), n, k);
	return r;
}

inline Mpz factorial(unsigned long n) {
	Mpz r;
	mpz_fac_ui(r.get(), n);
	return r;
}

// Pascal's triangle summed row by row, no closed forms.
inline Mpz ball_volume(unsigned radius, unsigned K) {
	std::vector<Mpz> row(K + 1);
	mpz_set_ui(row[0].get(), 1);
	for (unsigned k = 1; k <= K; ++k) {
		for (unsigned j = k; j >= 1; --j) {
			mpz_add(row[j].get(), row[j].get(), row[j - 1].get());
		}
	}
	Mpz sum;
	for (unsigned j = 0; j <= std::min(radius, K); ++j) {
		mpz_add(sum.get(), sum.get(), row[j].get());
	}
	return sum;
}

inline Mpfr log2(const Mpfr& x) {
	Mpfr r;
	mpfr_log2(r.get(), x.get(), MPFR_RNDN);
	return r;
}

inline Mpfr log2(const Mpz& x) {
	return log2(Mpfr(x));
}

inline Mpfr from_high(const mvc::HighFloat& x) {
	Mpfr r;
	mpfr_set_str(r.get(), x.str(60, std::ios_base::scientific).c_str(), 10, MPFR_RNDN);
	return r;
}

inline Mpz from_big(const mvc::BigInt& x) {
	Mpz r;
	mpz_set_str(r.get(), x.str().c_str(), 10);
	return r;
}

// |ours - truth| / |truth| (absolute difference when truth is zero).
inline double relative_error(const mvc::HighFloat& ours, const Mpfr& truth) {
	const Mpfr diff = from_high(ours) - truth;
	Mpfr scale = truth;
	mpfr_abs(scale.get(), scale.get(), MPFR_RNDN);
	const double d = std::fabs(diff.to_double());
	return mpfr_zero_p(scale.get()) ? d : d / scale.to_double();
}

} // namespace oracle
