#pragma once

#include "epschain/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epschain {

// Dense univariate polynomial over Q, coefficients low degree first.
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<BigRational> coeffs);
    UPoly(const BigRational& c);  // NOLINT constant
    UPoly(long c) : UPoly(BigRational(c)) {}  // NOLINT

    static UPoly x();
    static UPoly monomial(const BigRational& c, int deg);
    // prod (x - r) for a root r
    static UPoly linear(const BigRational& a, const BigRational& b);  // a*x + b

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool isZero() const { return c_.empty(); }
    bool isConstant() const { return c_.size() <= 1; }
    const BigRational& coeff(int i) const;
    const BigRational& lc() const;
    const std::vector<BigRational>& coeffs() const { return c_; }
    // lowest nonzero exponent, -1 for zero
    int valuation() const;

    BigRational operator()(const BigRational& v) const;

    UPoly& operator+=(const UPoly& o);
    UPoly& operator-=(const UPoly& o);
    UPoly& operator*=(const UPoly& o);
    UPoly& operator*=(const BigRational& s);
    friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
    friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    friend UPoly operator*(UPoly a, const BigRational& s) { return a *= s; }
    friend UPoly operator*(const BigRational& s, UPoly a) { return a *= s; }
    UPoly operator-() const;
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

    UPoly pow(unsigned e) const;
    UPoly derivative() const;
    UPoly shift(const BigRational& a) const;     // p(x + a)
    UPoly scaleArg(const BigRational& s) const;  // p(s x)
    UPoly compose(const UPoly& q) const;         // p(q(x))
    UPoly monic() const;
    // q with p = q * primitive(), primitive has integer coprime coeffs and positive lc
    BigRational content() const;
    UPoly primitive() const;

    static std::pair<UPoly, UPoly> divRem(const UPoly& a, const UPoly& b);
    // exact quotient; throws std::domain_error when b does not divide a
    static UPoly divExact(const UPoly& a, const UPoly& b);

    std::string toString(std::string_view var = "x") const;

    static int compare(const UPoly& a, const UPoly& b);
    friend bool operator<(const UPoly& a, const UPoly& b) { return compare(a, b) < 0; }

private:
    void trim();
    std::vector<BigRational> c_;
};

UPoly gcd(const UPoly& a, const UPoly& b);  // monic, gcd(0,0) = 0
UPoly lcm(const UPoly& a, const UPoly& b);  // monic

// square-free factors p = c * prod f_i^i with f_i monic square-free
std::vector<std::pair<UPoly, int>> squarefreeDecomposition(const UPoly& p);

// distinct integer zeros, ascending
std::vector<long> integerRoots(const UPoly& p);
// distinct rational zeros, ascending
std::vector<BigRational> rationalRoots(const UPoly& p);

BigRational resultant(const UPoly& a, const UPoly& b);

// all j >= 0 such that gcd(p(x), q(x + j)) is nontrivial, ascending
std::vector<long> shiftSet(const UPoly& p, const UPoly& q);
// largest element of shiftSet, nullopt if empty
std::optional<long> dispersion(const UPoly& p, const UPoly& q);

// p = unit * prod (x - r_i)^{m_i} * prod f_j^{e_j}, the f_j monic without rational zeros
struct LinearFactorization {
    BigRational unit;
    std::vector<std::pair<BigRational, int>> roots;
    std::vector<std::pair<UPoly, int>> rest;
};
LinearFactorization factorLinear(const UPoly& p);

// Lagrange interpolation through (xs[i], ys[i])
UPoly interpolate(const std::vector<BigRational>& xs, const std::vector<BigRational>& ys);

}  // namespace epschain
