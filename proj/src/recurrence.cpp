#include "epschain/recurrence.hpp"

#include "epschain/expr_io.hpp"

#include <stdexcept>

namespace epschain {

MultiPoly nPoly(const UPoly& p) { return MultiPoly::fromUPoly(p, "n"); }

namespace {

long computeDelta(const MultiPoly& lead) {
    if (lead.isZero()) throw std::invalid_argument("recurrence: leading coefficient is zero");
    if (lead.isConstant()) return 0;
    long d = -1;
    for (long r : integerRoots(lead.toUPoly("n")))
        if (r >= 0) d = std::max(d, r);
    return d + 1;
}

Sequence scaled(const Sequence& s, const BigRational& c) {
    Sequence out(s.expr * Expr(c), s.validFrom);
    for (const auto& [k, v] : s.values) out.values[k] = v * c;
    return out;
}

}  // namespace

LinearRecurrence::LinearRecurrence(std::vector<MultiPoly> c, Sequence b) : coeffs(std::move(c)), rhs(std::move(b)) {
    if (coeffs.empty()) throw std::invalid_argument("recurrence without coefficients");
    for (const auto& a : coeffs)
        for (const auto& v : a.vars())
            if (v != "n") throw std::invalid_argument("recurrence coefficient depends on " + v);
    delta_ = computeDelta(coeffs.back());
}

UPoly LinearRecurrence::coeff(int i) const { return coeffs.at(static_cast<size_t>(i)).toUPoly("n"); }

BigRational LinearRecurrence::coeffValue(int i, long n) const {
    return coeffs.at(static_cast<size_t>(i)).evaluateAll({{"n", BigRational(n)}});
}

std::vector<ZetaValue> LinearRecurrence::unroll(const std::vector<ZetaValue>& initial, long from, long to) const {
    int d = order();
    if (static_cast<int>(initial.size()) != d)
        throw std::invalid_argument("unroll needs " + std::to_string(d) + " initial values");
    std::vector<ZetaValue> v = initial;
    for (long n = from; n + d <= to; ++n) {
        BigRational lead = coeffValue(d, n);
        if (lead == 0)
            throw std::domain_error("leading coefficient vanishes at n = " + std::to_string(n));
        ZetaValue acc = rhs.at(n);
        for (int i = 0; i < d; ++i) acc -= v[static_cast<size_t>(n - from + i)] * coeffValue(i, n);
        v.push_back(acc * (BigRational(1) / lead));
    }
    if (to - from + 1 < static_cast<long>(v.size())) v.resize(static_cast<size_t>(std::max(0L, to - from + 1)));
    return v;
}

std::string LinearRecurrence::toString() const {
    std::string s;
    for (int i = 0; i <= order(); ++i) {
        const auto& a = coeffs[static_cast<size_t>(i)];
        if (a.isZero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + a.toString() + ")*F(n" + (i ? "+" + std::to_string(i) : std::string()) + ")";
    }
    return s + " = " + renderText(rhs.expr);
}

void LinearRecurrence::normalize() {
    if (homogeneous()) {
        MultiPoly g;
        for (const auto& a : coeffs) g = gcd(g, a);
        if (g.isZero()) return;
        for (auto& a : coeffs) a = *a.divideExact(g);
    }
    BigInt num = 0, den = 1;
    for (const auto& a : coeffs)
        for (const auto& [e, c] : a.terms()) {
            mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
        }
    if (num == 0) return;
    BigRational s(den, num);
    s.canonicalize();
    if (coeffs.back().leadingCoefficient() < 0) s = -s;
    for (auto& a : coeffs) a *= s;
    if (!homogeneous()) rhs = scaled(rhs, s);
    delta_ = computeDelta(coeffs.back());
}

}  // namespace epschain
