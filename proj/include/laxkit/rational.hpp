#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace laxkit {

using BigInt = mpz_class;
using BigRational = mpq_class;

BigRational make_rational(long num, long den = 1);
BigRational make_rational(const BigInt& num, const BigInt& den);

// Exact: every finite double is a dyadic rational.
BigRational from_double(double x);
double to_double(const BigRational& q);

// "7", "-3/8", "0.25" and "1e-3" are accepted; decimals are read exactly.
BigRational parse_rational(std::string_view text);
std::string to_string(const BigRational& q);

bool is_integer(const BigRational& q);
BigInt floor_of(const BigRational& q);
BigRational abs_of(const BigRational& q);
BigInt lcm_of(const BigInt& a, const BigInt& b);

// Rational with the smallest denominator in the closed interval [lo, hi].
BigRational simplest_between(BigRational lo, BigRational hi);

}  // namespace laxkit
