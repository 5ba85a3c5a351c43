#pragma once

#include "epschain/nested_sums.hpp"

#include <map>
#include <optional>
#include <vector>

namespace epschain::canon {

// z^n * prod_{j=1}^{n} prod_alpha (j + alpha)^e * prod_{j=1}^{n} prod_Q Q(j)^e
// with 0 <= alpha < 1 and Q monic of degree >= 2 without rational zeros.
struct ProdCanon {
    BigRational z{1};
    std::map<BigRational, long> alpha;
    std::map<UPoly, long> other;

    bool trivial() const { return z == 1 && alpha.empty() && other.empty(); }
    URatFun ratio() const;  // P(j) / P(j-1)
};
int compare(const ProdCanon& a, const ProdCanon& b);

struct SumAtom;

// zeta monomial * product * product of sums
struct Monomial {
    ZetaValue::Monomial zeta;
    ProdCanon prod;
    std::vector<SumAtom> sums;  // sorted
};

// sum_{j=lower}^{n or infinity} piece(j) * inner(j), inner without zeta factor.
// The piece is j^p, 1/(j+alpha)^m with 0 <= alpha < 1, or a rational function
// whose denominator has no rational zeros.
struct SumAtom {
    long lower = 1;
    URatFun piece;
    Monomial inner;
    bool infinite = false;
};

int compare(const Monomial& a, const Monomial& b);
int compare(const SumAtom& a, const SumAtom& b);
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

// linear combination of monomials with rational-function coefficients
using CanonExpr = std::map<Monomial, URatFun, MonomialLess>;

CanonExpr fromExpr(const Expr& e);
Expr toExpr(const CanonExpr& c);
Expr toExpr(const Monomial& m);

CanonExpr add(const CanonExpr& a, const CanonExpr& b);
CanonExpr scale(const CanonExpr& a, const URatFun& c);
CanonExpr multiply(const CanonExpr& a, const CanonExpr& b);
CanonExpr shift(const CanonExpr& a, long m);
CanonExpr sumOf(long lower, const CanonExpr& body, bool infinite = false);

// prod_{j=lower}^{n} ratio(j) = coefficient(n) * P(n)
std::pair<URatFun, ProdCanon> canonProduct(long lower, const URatFun& ratio);

int sumDepth(const Monomial& m);

}  // namespace epschain::canon
