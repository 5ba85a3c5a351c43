#pragma once

#include "epschain/rational.hpp"
#include "epschain/upoly.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace epschain {

// Canonical variable order: n, k, j, x, y, z, ..., then other names, eps last.
bool variableLess(const std::string& a, const std::string& b);

// Sparse multivariate polynomial over Q.  Variables are kept sorted by
// variableLess and only variables that actually occur are stored.
class MultiPoly {
public:
    using Exponent = std::vector<int>;
    using TermMap = std::map<Exponent, BigRational>;

    MultiPoly() = default;
    MultiPoly(const BigRational& c);  // NOLINT
    MultiPoly(long c) : MultiPoly(BigRational(c)) {}  // NOLINT
    MultiPoly(std::vector<std::string> vars, TermMap terms);

    static MultiPoly variable(const std::string& name);
    static MultiPoly fromUPoly(const UPoly& p, const std::string& var);
    static MultiPoly fromCoefficients(const std::string& var, const std::vector<MultiPoly>& coeffs);

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    size_t termCount() const { return terms_.size(); }
    bool isZero() const { return terms_.empty(); }
    bool isConstant() const { return vars_.empty(); }
    BigRational constantValue() const;  // requires isConstant
    bool hasVar(const std::string& v) const;

    int degree(const std::string& v) const;
    int minDegree(const std::string& v) const;  // -1 for zero polynomial
    int totalDegree() const;
    // coefficient of the lexicographically leading term
    const BigRational& leadingCoefficient() const;

    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }
    MultiPoly& operator*=(const BigRational& s);
    friend MultiPoly operator*(MultiPoly a, const BigRational& s) { return a *= s; }
    friend MultiPoly operator*(const BigRational& s, MultiPoly a) { return a *= s; }
    MultiPoly operator-() const;
    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }
    MultiPoly pow(unsigned e) const;

    MultiPoly coefficient(const std::string& v, int power) const;
    std::vector<MultiPoly> coefficientsIn(const std::string& v) const;
    MultiPoly evaluate(const std::string& v, const BigRational& value) const;
    BigRational evaluateAll(const std::map<std::string, BigRational>& values) const;
    MultiPoly substitute(const std::string& v, const MultiPoly& s) const;
    MultiPoly shift(const std::string& v, const BigRational& c) const;
    MultiPoly derivative(const std::string& v) const;
    // requires no variables other than v
    UPoly toUPoly(const std::string& v) const;

    std::optional<MultiPoly> divideExact(const MultiPoly& b) const;
    // content with sign so that primitive() has positive leading coefficient
    BigRational content() const;
    MultiPoly primitive() const;

    std::string toString() const;
    static int compare(const MultiPoly& a, const MultiPoly& b);
    friend bool operator<(const MultiPoly& a, const MultiPoly& b) { return compare(a, b) < 0; }

    MultiPoly alignedTo(const std::vector<std::string>& vars) const;  // vars must be a superset

private:
    void normalize();
    std::vector<std::string> vars_;
    TermMap terms_;
};

std::vector<std::string> unionVars(const std::vector<std::string>& a, const std::vector<std::string>& b);

// normalized: primitive with positive leading coefficient; gcd(0, 0) = 0
MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

// nonnegative j with gcd(p, q(var + j)) nontrivial, p and q may contain parameters
std::vector<long> shiftSet(const MultiPoly& p, const MultiPoly& q, const std::string& var);
std::optional<long> dispersion(const MultiPoly& p, const MultiPoly& q, const std::string& var);

}  // namespace epschain
