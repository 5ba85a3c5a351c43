#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace epschain {

using BigInt = mpz_class;
using BigRational = mpq_class;

// "p", "-p", "p/q"; throws std::invalid_argument
BigRational parseRational(std::string_view text);
std::string toString(const BigRational& q);
std::string toString(const BigInt& z);

inline bool isZero(const BigRational& q) { return sgn(q) == 0; }

BigRational ratPow(const BigRational& base, long exp);
BigInt factorial(unsigned long n);
BigInt binomial(long n, long k);

// floor of a rational
BigInt floorQ(const BigRational& q);

// bit size of numerator plus denominator, used for pivot choice
size_t bitSize(const BigRational& q);

}  // namespace epschain
