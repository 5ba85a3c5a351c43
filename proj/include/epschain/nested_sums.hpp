#pragma once

#include "epschain/ratfun.hpp"
#include "epschain/value.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace epschain {

// prod_{j=lower}^{n} ratio(j); for n < lower - 1 the value is
// 1 / prod_{j=n+1}^{lower-1} ratio(j).
struct HGProduct {
    long lower = 1;
    URatFun ratio;
    std::optional<std::string> tag;
};

// Expression in one active variable built from rational functions,
// hypergeometric products, zeta constants, +, * and indefinite sums
// sum_{j=lower}^{n} body(j) whose body is an expression in j.  For
// n < lower - 1 the sum is -sum_{j=n+1}^{lower-1} body(j).
class Expr {
public:
    enum class Kind { Rat, Prod, Zeta, Add, Mul, Sum };

    Expr();  // zero
    Expr(const BigRational& c);  // NOLINT
    Expr(long c) : Expr(BigRational(c)) {}  // NOLINT
    Expr(const URatFun& r);  // NOLINT

    static Expr var();
    static Expr product(HGProduct p);
    static Expr power(const BigRational& base);  // base^n
    static Expr zeta(int weight);
    static Expr value(const ZetaValue& v);
    static Expr sum(long lower, const Expr& body, bool infinite = false);
    // S_{a1,...,ak}(n) with signed indices
    static Expr harmonic(const std::vector<int>& index);
    static Expr add(std::vector<Expr> terms);
    static Expr mul(std::vector<Expr> factors);

    Kind kind() const;
    const URatFun& rat() const;
    const HGProduct& prod() const;
    int zetaWeight() const;
    const std::vector<Expr>& children() const;
    long sumLower() const;
    const Expr& sumBody() const;
    bool sumInfinite() const;

    bool isZero() const;  // structurally the zero constant
    bool isRational() const { return kind() == Kind::Rat; }

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    Expr operator-() const;

    static bool structurallyEqual(const Expr& a, const Expr& b);
    static int compare(const Expr& a, const Expr& b);
    size_t nodeCount() const;
    int depth() const;  // nesting depth of sums

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

struct Expr::Node {
    Kind kind = Kind::Rat;
    URatFun rat;
    HGProduct prod;
    int weight = 0;
    std::vector<Expr> children;
    long lower = 1;
    bool infinite = false;
};

// Exact value at n; throws std::domain_error on a pole or an infinite sum.
ZetaValue eval(const Expr& e, long n);
// Values for n = lo..hi in linear time; nullopt where undefined.
std::vector<std::optional<ZetaValue>> evalRange(const Expr& e, long lo, long hi);

// e(n + m) with sums re-expressed up to n, in canonical form
Expr shift(const Expr& e, long m);
Expr canonicalize(const Expr& e);
// canonical form of sum_{j=lower}^{n} e(j)
Expr wrapIndefinite(const Expr& e, long lower);
bool equalCanonical(const Expr& a, const Expr& b);
// canonical form has no terms
bool isZeroCanonical(const Expr& e);

// signed harmonic-sum index; weight, then depth, then lexicographic order
using HarmonicIndex = std::vector<int>;
struct HarmonicIndexLess {
    bool operator()(const HarmonicIndex& a, const HarmonicIndex& b) const;
};
using HarmonicCombination = std::map<HarmonicIndex, BigInt, HarmonicIndexLess>;
HarmonicCombination quasiShuffle(const HarmonicIndex& a, const HarmonicIndex& b);
// direct recursive values of S_index(0..N), used as an oracle
std::vector<BigRational> harmonicValues(const HarmonicIndex& index, long N);

// A sequence given by an expression for n >= validFrom and explicit values below.
struct Sequence {
    Expr expr;
    long validFrom = 0;
    std::map<long, ZetaValue> values;

    Sequence() = default;
    Sequence(Expr e, long from = 0, std::map<long, ZetaValue> vals = {})  // NOLINT
        : expr(std::move(e)), validFrom(from), values(std::move(vals)) {}
    Sequence(long c) : expr(c) {}  // NOLINT

    ZetaValue at(long n) const;
    // values for lo..hi, throws where undefined
    std::vector<ZetaValue> range(long lo, long hi) const;
};

inline bool isZero(const Sequence& s) { return s.expr.isZero() && s.values.empty(); }

}  // namespace epschain
