#pragma once

#include "epschain/multipoly.hpp"
#include "epschain/upoly.hpp"

#include <string>
#include <string_view>

namespace epschain {

// Multivariate rational function over Q.  Numerator and denominator are
// coprime, the denominator is primitive with positive leading coefficient.
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(const BigRational& c) : num_(c), den_(1) {}  // NOLINT
    RationalFunction(long c) : RationalFunction(BigRational(c)) {}  // NOLINT
    RationalFunction(MultiPoly num) : num_(std::move(num)), den_(1) {}  // NOLINT
    RationalFunction(MultiPoly num, MultiPoly den);

    static RationalFunction variable(const std::string& v) { return RationalFunction(MultiPoly::variable(v)); }

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    bool isZero() const { return num_.isZero(); }
    bool isPolynomial() const { return den_.isConstant(); }
    bool isConstant() const { return num_.isConstant() && den_.isConstant(); }
    BigRational constantValue() const;
    std::vector<std::string> vars() const { return unionVars(num_.vars(), den_.vars()); }
    bool hasVar(const std::string& v) const { return num_.hasVar(v) || den_.hasVar(v); }

    RationalFunction& operator+=(const RationalFunction& o);
    RationalFunction& operator-=(const RationalFunction& o);
    RationalFunction& operator*=(const RationalFunction& o);
    RationalFunction& operator/=(const RationalFunction& o);
    friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
    friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
    friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
    RationalFunction operator-() const;
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    RationalFunction inverse() const;
    RationalFunction pow(int e) const;

    // throws std::domain_error at a pole
    RationalFunction evaluate(const std::string& v, const BigRational& value) const;
    BigRational evaluateAll(const std::map<std::string, BigRational>& values) const;
    RationalFunction substitute(const std::string& v, const RationalFunction& s) const;
    RationalFunction shift(const std::string& v, const BigRational& c) const;
    RationalFunction derivative(const std::string& v) const;

    std::string toString() const;
    static int compare(const RationalFunction& a, const RationalFunction& b);
    friend bool operator<(const RationalFunction& a, const RationalFunction& b) { return compare(a, b) < 0; }

private:
    void normalizeDen();
    MultiPoly num_;
    MultiPoly den_{1};
};

inline bool isZero(const RationalFunction& r) { return r.isZero(); }

// Univariate rational function over Q, denominator monic, coprime parts.
class URatFun {
public:
    URatFun() : den_(1) {}
    URatFun(const BigRational& c) : num_(c), den_(1) {}  // NOLINT
    URatFun(long c) : URatFun(BigRational(c)) {}  // NOLINT
    URatFun(UPoly num) : num_(std::move(num)), den_(1) {}  // NOLINT
    URatFun(UPoly num, UPoly den);

    static URatFun x() { return URatFun(UPoly::x()); }

    const UPoly& num() const { return num_; }
    const UPoly& den() const { return den_; }
    bool isZero() const { return num_.isZero(); }
    bool isPolynomial() const { return den_.isConstant(); }
    bool isConstant() const { return num_.isConstant() && den_.isConstant(); }
    BigRational constantValue() const;

    URatFun& operator+=(const URatFun& o);
    URatFun& operator-=(const URatFun& o);
    URatFun& operator*=(const URatFun& o);
    URatFun& operator/=(const URatFun& o);
    friend URatFun operator+(URatFun a, const URatFun& b) { return a += b; }
    friend URatFun operator-(URatFun a, const URatFun& b) { return a -= b; }
    friend URatFun operator*(URatFun a, const URatFun& b) { return a *= b; }
    friend URatFun operator/(URatFun a, const URatFun& b) { return a /= b; }
    URatFun operator-() const { return URatFun(-num_, den_, true); }
    friend bool operator==(const URatFun& a, const URatFun& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    URatFun inverse() const;
    URatFun pow(int e) const;

    bool hasPoleAt(const BigRational& v) const { return den_(v) == 0; }
    BigRational operator()(const BigRational& v) const;  // throws std::domain_error at a pole
    URatFun shift(const BigRational& c) const;
    URatFun compose(const URatFun& s) const;
    URatFun derivative() const;

    std::string toString(std::string_view var = "x") const;
    static int compare(const URatFun& a, const URatFun& b);
    friend bool operator<(const URatFun& a, const URatFun& b) { return compare(a, b) < 0; }

    RationalFunction toMulti(const std::string& var) const;
    static URatFun fromMulti(const RationalFunction& r, const std::string& var);

private:
    URatFun(UPoly num, UPoly den, bool /*normalized*/) : num_(std::move(num)), den_(std::move(den)) {}
    UPoly num_;
    UPoly den_;
};

inline bool isZero(const URatFun& r) { return r.isZero(); }

// Parses expressions over + - * / ^ (integer exponents), parentheses,
// rational literals, identifiers and implicit multiplication ("2n(n+1)").
RationalFunction parseRationalFunction(std::string_view text);
MultiPoly parsePolynomial(std::string_view text);

}  // namespace epschain
