#pragma once

#include "epschain/rational.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace epschain {

// Exact constant: a polynomial in opaque zeta symbols with rational coefficients.
class ZetaValue {
public:
    using Monomial = std::vector<std::pair<int, int>>;  // (weight, power), sorted, nonempty

    ZetaValue() = default;
    ZetaValue(const BigRational& q) : q_(q) {}  // NOLINT
    ZetaValue(long q) : q_(q) {}                // NOLINT
    static ZetaValue zeta(int weight);
    static ZetaValue monomial(const Monomial& m, const BigRational& c);

    const BigRational& rational() const { return q_; }
    const std::map<Monomial, BigRational>& zetaTerms() const { return z_; }
    bool isRational() const { return z_.empty(); }
    bool isZero() const { return z_.empty() && q_ == 0; }
    // coefficient of a zeta monomial, the empty monomial gives the rational part
    BigRational coefficient(const Monomial& m) const;

    ZetaValue& operator+=(const ZetaValue& o);
    ZetaValue& operator-=(const ZetaValue& o);
    ZetaValue& operator*=(const ZetaValue& o);
    ZetaValue& operator*=(const BigRational& s);
    friend ZetaValue operator+(ZetaValue a, const ZetaValue& b) { return a += b; }
    friend ZetaValue operator-(ZetaValue a, const ZetaValue& b) { return a -= b; }
    friend ZetaValue operator*(ZetaValue a, const ZetaValue& b) { return a *= b; }
    friend ZetaValue operator*(ZetaValue a, const BigRational& s) { return a *= s; }
    // only rational divisors
    friend ZetaValue operator/(const ZetaValue& a, const ZetaValue& b);
    ZetaValue operator-() const;
    friend bool operator==(const ZetaValue& a, const ZetaValue& b) { return a.q_ == b.q_ && a.z_ == b.z_; }
    friend bool operator!=(const ZetaValue& a, const ZetaValue& b) { return !(a == b); }

    std::string toString() const;
    // parses "p/q", "zeta(2)", "5/18*zeta(2) + 1393/486", "zeta(2)^2"
    static ZetaValue parse(const std::string& text);

private:
    void clean();
    BigRational q_;
    std::map<Monomial, BigRational> z_;
};

inline bool isZero(const ZetaValue& v) { return v.isZero(); }

std::string monomialToString(const ZetaValue::Monomial& m);

}  // namespace epschain
