#pragma once

#include "epschain/recurrence.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace epschain {

class NoCertificateError : public std::runtime_error {
public:
    explicit NoCertificateError(int maxOrder)
        : std::runtime_error("no certificate up to order " + std::to_string(maxOrder)), maxOrder_(maxOrder) {}
    int maxOrder() const { return maxOrder_; }

private:
    int maxOrder_;
};

class NotHyperexponentialError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One factor of a closed-form term, raised to an integer power:
// a rational function, binom(a, b), a! or base^exponent.
struct TermFactor {
    enum class Kind { Rational, Binomial, Factorial, Power };
    Kind kind = Kind::Rational;
    RationalFunction value;  // rational factor or power base
    MultiPoly a, b;          // binomial/factorial arguments; a is the exponent of a power
    int exponent = 1;
};

struct HypergeometricTerm {
    std::map<std::string, RationalFunction> shiftRatios;       // f(v+1)/f(v)
    std::map<std::string, RationalFunction> derivativeRatios;  // (d/dx f)/f
    BigRational baseValue{1};
    std::map<std::string, long> basePoint;  // where baseValue is taken, default 0
    std::vector<TermFactor> factors;        // closed form, when known

    static HypergeometricTerm fromFactors(std::vector<TermFactor> factors, const std::vector<std::string>& discrete,
                                          const std::vector<std::string>& continuous = {});
    // products and quotients of binom(a,b), fact(a), a!, c^e and rational
    // functions, e.g. "binom(n,k)^2*2^k/(k+1)" or "x^n*(1-x)^eps"
    static HypergeometricTerm parse(std::string_view text, const std::vector<std::string>& discrete,
                                    const std::vector<std::string>& continuous = {});

    // exact value at an integer point of the discrete variables; nullopt
    // where the term is undefined
    std::optional<BigRational> value(const std::map<std::string, long>& point) const;
    // mixed shift/derivative ratios commute
    bool compatible() const;
    const RationalFunction& ratio(const std::string& v) const;
};

struct TelescopeCertificate {
    enum class Kind { Discrete, Continuous };
    Kind kind = Kind::Discrete;
    std::string outer = "n", inner = "k";
    std::vector<MultiPoly> coeffs;  // a_0..a_d in the outer variable and parameters
    RationalFunction certificate;   // g = R f
    // continuous: [R f] at 1 minus at 0, zero when both ends vanish
    RationalFunction boundary;
    long validFrom = 0;
    // iterated integrals: the per-variable certificates
    std::vector<TelescopeCertificate> parts;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

// R with g = R f and g(k+1) - g(k) = f(k), or nullopt
std::optional<RationalFunction> gosper(const HypergeometricTerm& t, const std::string& k = "k");

std::optional<TelescopeCertificate> zeilbergerAtOrder(const HypergeometricTerm& t, int order,
                                                      const std::string& n = "n", const std::string& k = "k");
// smallest order 1..maxOrder, throws NoCertificateError
TelescopeCertificate zeilberger(const HypergeometricTerm& t, int maxOrder = 8, const std::string& n = "n",
                                const std::string& k = "k");

std::optional<TelescopeCertificate> almkvistZeilbergerAtOrder(const HypergeometricTerm& t, int order,
                                                              const std::string& n = "n",
                                                              const std::string& x = "x");
TelescopeCertificate almkvistZeilberger(const HypergeometricTerm& t, int maxOrder = 8, const std::string& n = "n",
                                        const std::string& x = "x");
// integral over [0,1]^s of a term whose factors each involve at most one of xs
TelescopeCertificate iterateAZ(const HypergeometricTerm& t, const std::vector<std::string>& xs, int maxOrder = 8,
                               const std::string& n = "n");

// the defining identity, checked as a rational-function identity
bool checkCertificate(const HypergeometricTerm& t, const TelescopeCertificate& c);

// sum_{k=lower(n)}^{upper(n)} t(n, k) with integer-linear bounds
struct DefiniteSum {
    HypergeometricTerm term;
    MultiPoly lower, upper;
    std::string n = "n", k = "k";
};

BigRational sumValue(const DefiniteSum& s, long n);

struct SumRecurrence {
    TelescopeCertificate certificate;
    LinearRecurrence recurrence;
};
SumRecurrence sumToRecurrence(const DefiniteSum& s, int maxOrder = 8);

}  // namespace epschain
