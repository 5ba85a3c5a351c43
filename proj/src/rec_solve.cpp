#include "epschain/rec_solve.hpp"

#include "epschain/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace epschain {

namespace {

using Op = std::vector<UPoly>;

constexpr long kCheckWindow = 40;

Op opOf(const LinearRecurrence& r) {
    Op a;
    for (int i = 0; i <= r.order(); ++i) a.push_back(r.coeff(i));
    return a;
}

// max nonnegative integer zero plus one, 0 without such zeros
long rootBound(const UPoly& p) {
    if (p.isConstant()) return 0;
    long d = -1;
    for (long r : integerRoots(p))
        if (r >= 0) d = std::max(d, r);
    return d + 1;
}

long ratioBound(const URatFun& r) { return std::max(rootBound(r.num()), rootBound(r.den())); }

UPoly fallingFactorial(long j) {
    UPoly f(1);
    for (long i = 0; i < j; ++i) f *= UPoly::linear(1, -i);
    return f;
}

UPoly primitivePositive(const UPoly& p) { return p.isZero() ? p : p.primitive(); }

URatFun normalizedRF(const URatFun& r) {
    if (r.isZero()) return r;
    return r * URatFun(BigRational(1) / r.num().content());
}

// basis of the polynomial kernel of sum_i a_i(n) E^i
std::vector<UPoly> polyKernel(const Op& a) {
    int d = static_cast<int>(a.size()) - 1;
    // difference form sum_j b_j(n) Delta^j
    std::vector<UPoly> b(static_cast<size_t>(d + 1));
    for (int j = 0; j <= d; ++j)
        for (int i = j; i <= d; ++i) b[j] += a[i] * BigRational(binomial(i, j));
    std::optional<int> m;
    for (int j = 0; j <= d; ++j)
        if (!b[j].isZero()) m = m ? std::max(*m, b[j].degree() - j) : b[j].degree() - j;
    if (!m) throw std::invalid_argument("zero recurrence operator");
    UPoly indicial;
    for (int j = 0; j <= d; ++j)
        if (!b[j].isZero() && b[j].degree() - j == *m) indicial += fallingFactorial(j) * b[j].lc();
    long bound = -1;
    for (long r : integerRoots(indicial)) bound = std::max(bound, r);
    if (bound < 0) return {};

    std::vector<UPoly> images;
    int rows = 0;
    for (long k = 0; k <= bound; ++k) {
        UPoly img;
        for (int i = 0; i <= d; ++i) img += a[i] * UPoly::linear(1, i).pow(static_cast<unsigned>(k));
        rows = std::max(rows, img.degree() + 1);
        images.push_back(std::move(img));
    }
    size_t cols = images.size();
    Matrix<BigRational> m2(static_cast<size_t>(rows), std::vector<BigRational>(cols, BigRational(0)));
    for (size_t k = 0; k < cols; ++k)
        for (int r = 0; r <= images[k].degree(); ++r) m2[static_cast<size_t>(r)][k] = images[k].coeff(r);
    std::vector<UPoly> out;
    for (const auto& v : nullspace(m2, cols)) out.push_back(primitivePositive(UPoly(v)));
    return out;
}

// drops a_0 = ... = a_{s-1} = 0; solutions z of the result give y(n) = z(n - s)
std::pair<Op, long> stripTrailing(const Op& a) {
    long s = 0;
    while (s < static_cast<long>(a.size()) && a[static_cast<size_t>(s)].isZero()) ++s;
    if (s == static_cast<long>(a.size())) throw std::invalid_argument("zero recurrence operator");
    return {Op(a.begin() + s, a.end()), s};
}

UPoly universalDenominator(const Op& a) {
    long d = static_cast<long>(a.size()) - 1;
    UPoly A = a.back().shift(BigRational(-d)), B = a.front();
    UPoly u(1);
    auto hs = shiftSet(A, B);
    for (auto it = hs.rbegin(); it != hs.rend(); ++it) {
        long h = *it;
        UPoly g = gcd(A, B.shift(BigRational(h)));
        if (g.isConstant()) continue;
        A = UPoly::divExact(A, g);
        B = UPoly::divExact(B, g.shift(BigRational(-h)));
        for (long i = 0; i <= h; ++i) u *= g.shift(BigRational(-i));
    }
    return u;
}

std::vector<URatFun> rationalKernel(const Op& a0) {
    auto [a, s] = stripTrailing(a0);
    if (a.size() == 1) return {};
    UPoly u = universalDenominator(a);
    UPoly l(1);
    for (size_t i = 0; i < a.size(); ++i) l = lcm(l, u.shift(BigRational(static_cast<long>(i))));
    Op c;
    for (size_t i = 0; i < a.size(); ++i)
        c.push_back(a[i] * UPoly::divExact(l, u.shift(BigRational(static_cast<long>(i)))));
    std::vector<URatFun> out;
    for (const auto& p : polyKernel(c)) out.push_back(normalizedRF(URatFun(p, u).shift(BigRational(-s))));
    return out;
}

URatFun applyOp(const Op& a, const URatFun& y) {
    URatFun acc;
    for (size_t i = 0; i < a.size(); ++i) acc += URatFun(a[i]) * y.shift(BigRational(static_cast<long>(i)));
    return acc;
}

// polynomial operator from rational coefficients, cleared of denominators
Op clearDenominators(const std::vector<URatFun>& c, UPoly* factor = nullptr) {
    UPoly l(1);
    for (const auto& x : c) l = lcm(l, x.den());
    Op out;
    for (const auto& x : c) out.push_back((x * URatFun(l)).num());
    if (factor) *factor = l;
    return out;
}

std::optional<URatFun> rationalParticularOp(const Op& a, const URatFun& b) {
    if (b.isZero()) return URatFun();
    size_t d = a.size() - 1;
    // (L y)(n+1)/b(n+1) - (L y)(n)/b(n) = 0
    std::vector<URatFun> m(d + 2);
    URatFun b1 = b.shift(BigRational(1));
    for (size_t i = 0; i <= d + 1; ++i) {
        if (i >= 1) m[i] += URatFun(a[i - 1].shift(BigRational(1))) / b1;
        if (i <= d) m[i] -= URatFun(a[i]) / b;
    }
    for (const auto& y : rationalKernel(clearDenominators(m))) {
        URatFun c = applyOp(a, y) / b;
        if (!c.isConstant()) continue;
        if (c.isZero()) continue;
        return y / c;
    }
    return std::nullopt;
}

std::vector<UPoly> monicDivisors(const UPoly& p) {
    auto f = factorLinear(p);
    std::vector<std::pair<UPoly, int>> atoms;
    for (const auto& [r, m] : f.roots) atoms.emplace_back(UPoly::linear(1, -r), m);
    for (const auto& [q, m] : f.rest) atoms.emplace_back(q, m);
    std::vector<UPoly> out{UPoly(1)};
    for (const auto& [q, m] : atoms) {
        std::vector<UPoly> next;
        for (const auto& base : out) {
            UPoly acc = base;
            for (int e = 0; e <= m; ++e) {
                next.push_back(acc);
                acc *= q;
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end(), [](const UPoly& x, const UPoly& y) {
        if (x.degree() != y.degree()) return x.degree() < y.degree();
        return UPoly::compare(x, y) < 0;
    });
    return out;
}

// ratios y(n+1)/y(n) of hypergeometric solutions, in enumeration order
std::vector<URatFun> hyperRatios(const Op& a0) {
    auto [a, s] = stripTrailing(a0);
    long d = static_cast<long>(a.size()) - 1;
    if (d == 0) return {};
    std::vector<URatFun> out;
    auto as = monicDivisors(a.front());
    auto bs = monicDivisors(a.back().shift(BigRational(1 - d)));
    for (const auto& A : as)
        for (const auto& B : bs) {
            std::vector<UPoly> P;
            for (long i = 0; i <= d; ++i) {
                UPoly p = a[static_cast<size_t>(i)];
                for (long j = 0; j < i; ++j) p *= A.shift(BigRational(j));
                for (long j = i; j < d; ++j) p *= B.shift(BigRational(j));
                P.push_back(std::move(p));
            }
            int m = 0;
            for (const auto& p : P) m = std::max(m, p.degree());
            std::vector<BigRational> zc;
            for (const auto& p : P) zc.push_back(p.degree() == m ? p.lc() : BigRational(0));
            for (const auto& z : rationalRoots(UPoly(zc))) {
                if (z == 0) continue;
                Op q;
                BigRational zi = 1;
                for (const auto& p : P) {
                    q.push_back(p * zi);
                    zi *= z;
                }
                for (const auto& c : polyKernel(q)) {
                    URatFun r = URatFun(A * z, B) * URatFun(c.shift(BigRational(1)), c);
                    r = r.shift(BigRational(-s));
                    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
                }
            }
        }
    return out;
}

HypergeometricSolution hgSolution(const URatFun& r) {
    long lower = std::max(1L, ratioBound(r) + 1);
    HypergeometricSolution h{r, lower, Expr()};
    h.expr = canonicalize(Expr::product(HGProduct{lower, r.shift(BigRational(-1)), std::nullopt}));
    return h;
}

Expr reciprocal(const HypergeometricSolution& h) {
    return Expr::product(HGProduct{h.lower, h.ratio.shift(BigRational(-1)).inverse(), std::nullopt});
}

// values of the ratio walk y(n0) = 1, y(n+1) = r(n) y(n)
std::vector<BigRational> ratioWalk(const URatFun& r, long n0, long len) {
    std::vector<BigRational> v{BigRational(1)};
    for (long i = 1; i < len; ++i) v.push_back(v.back() * r(BigRational(n0 + i - 1)));
    return v;
}

// first p >= from with e defined on p..p+len
long firstDefined(const Expr& e, long from, long len = kCheckWindow) {
    auto vals = evalRange(e, from, from + 2 * len);
    long p = from;
    for (long i = 0; i <= 2 * len; ++i)
        if (!vals[static_cast<size_t>(i)]) p = from + i + 1;
    if (p > from + len) throw std::domain_error("right-hand side has poles on the summation range");
    return p;
}

struct Partial {
    std::vector<Expr> basis;
    std::optional<Expr> particular;
    long from = 0;
};

// picks linearly independent expressions, in order, by their values on a window
std::vector<Expr> independent(const std::vector<Expr>& cands, size_t limit, long from) {
    if (cands.empty()) return {};
    long len = static_cast<long>(2 * limit + 4);
    std::vector<std::vector<std::optional<ZetaValue>>> vals;
    for (const auto& c : cands) vals.push_back(evalRange(c, from, from + len + kCheckWindow));
    long start = from;
    for (long off = 0; off <= kCheckWindow; ++off) {
        bool ok = true;
        for (const auto& v : vals)
            for (long i = off; i < off + len && ok; ++i)
                if (!v[static_cast<size_t>(i)] || !v[static_cast<size_t>(i)]->isRational()) ok = false;
        if (ok) {
            start = off;
            break;
        }
        if (off == kCheckWindow) throw std::domain_error("homogeneous solutions undefined on the check window");
    }
    std::vector<Expr> out;
    Matrix<BigRational> rows;
    for (size_t k = 0; k < cands.size() && out.size() < limit; ++k) {
        std::vector<BigRational> row;
        for (long i = start; i < start + len; ++i) row.push_back(vals[k][static_cast<size_t>(i)]->rational());
        rows.push_back(row);
        if (matrixRank(rows, static_cast<size_t>(len)) == rows.size())
            out.push_back(cands[k]);
        else
            rows.pop_back();
    }
    return out;
}

Partial solveOp(const Op& a, const std::optional<Expr>& rhs, long from) {
    long d = static_cast<long>(a.size()) - 1;
    Partial out;
    if (d == 0) {
        out.from = std::max(from, rootBound(a[0]));
        out.particular = rhs ? canonicalize(*rhs * Expr(URatFun(UPoly(1), a[0]))) : Expr();
        return out;
    }
    if (a[0].isZero()) {
        // only the stripped operator's solutions, the basis stays incomplete
        auto [b, s] = stripTrailing(a);
        Partial sub = solveOp(b, rhs ? std::optional<Expr>(shift(*rhs, s)) : std::nullopt, std::max(0L, from - s));
        for (const auto& e : sub.basis) out.basis.push_back(shift(e, -s));
        if (sub.particular) out.particular = shift(*sub.particular, -s);
        out.from = sub.from + s;
        return out;
    }
    from = std::max(from, rootBound(a.back()));
    if (rhs) from = firstDefined(*rhs, from);

    std::vector<HypergeometricSolution> hg;
    for (const auto& r : hyperRatios(a)) hg.push_back(hgSolution(r));
    std::vector<Expr> cands;
    for (const auto& h : hg) cands.push_back(h.expr);
    if (rhs && rhs->isRational())
        if (auto p = rationalParticularOp(a, rhs->rat())) out.particular = Expr(*p);

    bool needMore = static_cast<long>(independent(cands, static_cast<size_t>(d), from).size()) < d ||
                    (rhs && !out.particular);
    if (needMore && !hg.empty()) {
        const auto& h = hg.front();
        // F = h G and H = Delta G
        std::vector<URatFun> c;
        URatFun rho(1);
        for (long i = 0; i <= d; ++i) {
            c.push_back(URatFun(a[static_cast<size_t>(i)]) * rho);
            rho *= h.ratio.shift(BigRational(i));
        }
        UPoly q;
        Op cp = clearDenominators(c, &q);
        Op e;
        for (long j = 0; j < d; ++j) {
            UPoly acc;
            for (long i = j + 1; i <= d; ++i) acc += cp[static_cast<size_t>(i)];
            e.push_back(acc);
        }
        std::optional<Expr> sr;
        if (rhs) sr = canonicalize(Expr(URatFun(q)) * *rhs * reciprocal(h));
        long subFrom = std::max(from, h.lower - 1);
        subFrom = std::max(subFrom, rootBound(q));
        Partial sub = solveOp(e, sr, subFrom);
        long l = sub.from;
        auto lift = [&](const Expr& hexpr) {
            return canonicalize(h.expr * wrapIndefinite(shift(hexpr, -1), l + 1));
        };
        for (const auto& hb : sub.basis) cands.push_back(lift(hb));
        if (rhs && !out.particular && sub.particular) out.particular = lift(*sub.particular);
        from = std::max(from, l);
    }
    out.from = from;
    out.basis = independent(cands, static_cast<size_t>(d), from);
    return out;
}

bool satisfies(const LinearRecurrence& r, const Expr& e, bool withRhs, long from, long to) {
    auto vals = evalRange(e, from, to + r.order());
    for (long n = from; n <= to; ++n) {
        ZetaValue acc;
        for (int i = 0; i <= r.order(); ++i) {
            const auto& v = vals[static_cast<size_t>(n - from + i)];
            if (!v) return false;
            acc += *v * r.coeffValue(i, n);
        }
        if (withRhs) acc -= r.rhs.at(n);
        if (!acc.isZero()) return false;
    }
    return true;
}

// smallest p in [from, to] with e satisfying the recurrence on p..to, or nullopt
std::optional<long> validityStart(const LinearRecurrence& r, const Expr& e, bool withRhs, long from, long to) {
    if (!satisfies(r, e, withRhs, to - 5, to)) return std::nullopt;
    long p = to - 5;
    while (p > from && satisfies(r, e, withRhs, p - 1, p - 1)) --p;
    return p;
}

}  // namespace

std::vector<UPoly> polySolutions(const LinearRecurrence& r) { return polyKernel(opOf(r)); }

std::vector<URatFun> rationalSolutions(const LinearRecurrence& r) { return rationalKernel(opOf(r)); }

std::optional<URatFun> rationalParticular(const LinearRecurrence& r) {
    if (!r.rhs.expr.isRational()) return std::nullopt;
    return rationalParticularOp(opOf(r), r.rhs.expr.rat());
}

std::vector<HypergeometricSolution> hypergeomSolutions(const LinearRecurrence& r) {
    Op a = opOf(r);
    auto ratios = hyperRatios(a);
    if (ratios.empty()) return {};
    long n0 = r.delta();
    for (const auto& q : ratios) n0 = std::max(n0, ratioBound(q));
    long len = 2 * r.order() + 4;
    std::vector<HypergeometricSolution> out;
    Matrix<BigRational> rows;
    for (const auto& q : ratios) {
        if (static_cast<int>(out.size()) == r.order()) break;
        rows.push_back(ratioWalk(q, n0, len));
        if (matrixRank(rows, static_cast<size_t>(len)) == rows.size())
            out.push_back(hgSolution(q));
        else
            rows.pop_back();
    }
    return out;
}

SolutionBasis dalembertSolutions(const LinearRecurrence& r) {
    std::optional<Expr> rhs;
    if (!r.homogeneous()) rhs = r.rhs.expr;
    long from = std::max(r.delta(), r.rhs.validFrom);
    Partial p = solveOp(opOf(r), rhs, from);
    SolutionBasis out;
    long to = std::max(from, p.from) + kCheckWindow;
    long valid = from;
    for (const auto& e : p.basis)
        if (auto s = validityStart(r, e, false, from, to)) {
            out.homogeneous.push_back(e);
            valid = std::max(valid, *s);
        }
    if (p.particular)
        if (auto s = validityStart(r, *p.particular, true, from, to)) {
            out.particular = p.particular;
            valid = std::max(valid, *s);
        }
    out.validFrom = valid;
    out.complete = static_cast<int>(out.homogeneous.size()) == r.order();
    return out;
}

std::optional<Expr> particularSolution(const LinearRecurrence& r) {
    if (r.homogeneous()) return Expr();
    return dalembertSolutions(r).particular;
}

std::optional<Sequence> solveWithInitialValues(const LinearRecurrence& r, const std::vector<ZetaValue>& initial,
                                               std::optional<long> first) {
    int d = r.order();
    if (static_cast<int>(initial.size()) != d)
        throw std::invalid_argument("expected " + std::to_string(d) + " initial values");
    SolutionBasis basis = dalembertSolutions(r);
    if (!basis.complete || (!r.homogeneous() && !basis.particular)) return std::nullopt;
    long delta = first.value_or(r.delta());
    if (delta < r.delta()) throw std::invalid_argument("initial values below the recurrence's delta");
    if (d == 0) {
        Sequence s(basis.particular ? *basis.particular : Expr(), std::max(delta, basis.validFrom));
        for (long n = delta; n < s.validFrom; ++n) s.values[n] = r.rhs.at(n) * (BigRational(1) / r.coeffValue(0, n));
        return s;
    }
    long start = std::max(delta, basis.validFrom);
    long to = start + d + kCheckWindow;
    auto direct = r.unroll(initial, delta, to);
    auto at = [&](long n) { return direct[static_cast<size_t>(n - delta)]; };

    std::vector<std::vector<std::optional<ZetaValue>>> hv;
    for (const auto& e : basis.homogeneous) hv.push_back(evalRange(e, start, to));
    std::vector<std::optional<ZetaValue>> pv;
    if (basis.particular) pv = evalRange(*basis.particular, start, to);

    for (long m = start; m + d - 1 <= start + kCheckWindow / 2; ++m) {
        Matrix<BigRational> mat(static_cast<size_t>(d), std::vector<BigRational>(static_cast<size_t>(d)));
        bool ok = true;
        for (int i = 0; i < d && ok; ++i)
            for (int k = 0; k < d && ok; ++k) {
                const auto& v = hv[static_cast<size_t>(k)][static_cast<size_t>(m - start + i)];
                if (!v || !v->isRational()) ok = false;
                else mat[static_cast<size_t>(i)][static_cast<size_t>(k)] = v->rational();
            }
        if (!ok) continue;
        auto inv = inverse(mat);
        if (!inv) continue;
        std::vector<ZetaValue> target;
        for (int i = 0; i < d; ++i) {
            ZetaValue t = at(m + i);
            if (basis.particular) {
                const auto& v = pv[static_cast<size_t>(m - start + i)];
                if (!v) throw std::domain_error("particular solution undefined at the matching point");
                t -= *v;
            }
            target.push_back(t);
        }
        Expr e = basis.particular ? *basis.particular : Expr();
        for (int k = 0; k < d; ++k) {
            ZetaValue c;
            for (int i = 0; i < d; ++i) c += target[static_cast<size_t>(i)] * (*inv)[static_cast<size_t>(k)][static_cast<size_t>(i)];
            if (!c.isZero()) e = e + Expr::value(c) * basis.homogeneous[static_cast<size_t>(k)];
        }
        e = canonicalize(e);
        auto vals = evalRange(e, delta, to);
        auto agrees = [&](long n) {
            const auto& v = vals[static_cast<size_t>(n - delta)];
            return v && *v == at(n);
        };
        for (long n = m; n <= to; ++n)
            if (!agrees(n)) throw std::logic_error("closed form disagrees with the unrolled recurrence");
        long from = m;
        while (from > delta && agrees(from - 1)) --from;
        Sequence seq(e, from);
        for (long n = delta; n < from; ++n) seq.values[n] = at(n);
        return seq;
    }
    throw std::domain_error("singular matching system for the initial values");
}

}  // namespace epschain
