#include "epschain/canonical.hpp"

#include "epschain/gosper.hpp"

#include <algorithm>
#include <stdexcept>

namespace epschain::canon {

namespace {

template <class T>
int cmp3(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

// guards the shift normalisation against ping-pong between shifted poles
thread_local int gSyncDepth = 0;

URatFun linearPow(const BigRational& beta, long e) {
    URatFun f(UPoly::linear(1, beta));
    return f.pow(static_cast<int>(e));
}

// prod_{j=1}^{n} B(j+s) = prod_{j=1}^{n} B(j) * R(n) * C
// C is skipped (left 1) when withConstant is false
std::pair<URatFun, BigRational> shiftCorrection(const UPoly& b, long s, bool withConstant = true) {
    URatFun r(1);
    BigRational c(1);
    if (s > 0) {
        UPoly num(1);
        for (long i = 1; i <= s; ++i) {
            num *= b.shift(BigRational(i));
            if (withConstant) c /= b(BigRational(i));
        }
        r = URatFun(num);
    } else if (s < 0) {
        UPoly den(1);
        for (long i = s + 1; i <= 0; ++i) {
            den *= b.shift(BigRational(i));
            if (!withConstant) continue;
            BigRational v = b(BigRational(i));
            if (v == 0) throw std::domain_error("hypergeometric product vanishes on its range");
            c *= v;
        }
        r = URatFun(UPoly(1), den);
    }
    return {r, c};
}

void addLinear(ProdCanon& p, URatFun& coeff, const BigRational& beta, long e, bool withConstant = true) {
    BigRational s = BigRational(floorQ(beta));
    BigRational a = beta - s;
    auto [r, c] = shiftCorrection(UPoly::linear(1, a), s.get_num().get_si(), withConstant);
    coeff *= (r * URatFun(c)).pow(static_cast<int>(e));
    long& slot = p.alpha[a];
    slot += e;
    if (slot == 0) p.alpha.erase(a);
}

void addOther(ProdCanon& p, URatFun& coeff, const UPoly& q, long e, bool withConstant = true) {
    int d = q.degree();
    for (auto it = p.other.begin(); it != p.other.end(); ++it) {
        const UPoly& k = it->first;
        if (k.degree() != d) continue;
        BigRational s = (q.coeff(d - 1) - k.coeff(d - 1)) / BigRational(d);
        if (s.get_den() != 1 || !s.get_num().fits_slong_p()) continue;
        if (!(k.shift(s) == q)) continue;
        auto [r, c] = shiftCorrection(k, s.get_num().get_si(), withConstant);
        coeff *= (r * URatFun(c)).pow(static_cast<int>(e));
        it->second += e;
        if (it->second == 0) p.other.erase(it);
        return;
    }
    p.other[q] += e;
}

std::pair<URatFun, ProdCanon> mergeProd(const ProdCanon& a, const ProdCanon& b, long sign = 1) {
    ProdCanon p = a;
    URatFun coeff(1);
    p.z = sign > 0 ? BigRational(a.z * b.z) : BigRational(a.z / b.z);
    for (const auto& [al, e] : b.alpha) {
        long& slot = p.alpha[al];
        slot += sign * e;
        if (slot == 0) p.alpha.erase(al);
    }
    for (const auto& [q, e] : b.other) addOther(p, coeff, q, sign * e);
    return {coeff, p};
}

// P(k) for an integer k, nullopt where the convention gives 1/0 or 0
std::optional<BigRational> prodValue(const ProdCanon& p, long k) {
    URatFun r = p.ratio();
    BigRational v(1);
    if (k >= 0) {
        for (long j = 1; j <= k; ++j) v *= r(BigRational(j));
        return v;
    }
    for (long j = k + 1; j <= 0; ++j) {
        if (r.hasPoleAt(BigRational(j))) return std::nullopt;
        BigRational f = r(BigRational(j));
        if (f == 0) return std::nullopt;
        v *= f;
    }
    return BigRational(1) / v;
}

// P(n + m) = shiftFactor * P(n)
URatFun prodShiftFactor(const ProdCanon& p, long m) {
    if (p.trivial() || m == 0) return URatFun(1);
    URatFun r = p.ratio(), f(1);
    if (m > 0) {
        for (long t = 1; t <= m; ++t) f *= r.shift(BigRational(t));
    } else {
        for (long t = 0; t < -m; ++t) f /= r.shift(BigRational(-t));
    }
    return f;
}

ZetaValue::Monomial mergeZeta(const ZetaValue::Monomial& a, const ZetaValue::Monomial& b) {
    std::map<int, int> m;
    for (auto [w, p] : a) m[w] += p;
    for (auto [w, p] : b) m[w] += p;
    return ZetaValue::Monomial(m.begin(), m.end());
}

void addTerm(CanonExpr& acc, const Monomial& m, const URatFun& c) {
    if (c.isZero()) return;
    auto it = acc.find(m);
    if (it == acc.end()) {
        acc.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.isZero()) acc.erase(it);
}

CanonExpr single(const Monomial& m, const URatFun& c) {
    CanonExpr e;
    addTerm(e, m, c);
    return e;
}

CanonExpr constant(const BigRational& c) { return single(Monomial{}, URatFun(c)); }

CanonExpr atomExpr(const SumAtom& a) {
    Monomial m;
    m.sums.push_back(a);
    return single(m, URatFun(1));
}

CanonExpr atomBody(const SumAtom& a) { return single(a.inner, a.piece); }

Expr atomToExpr(const SumAtom& a) {
    return Expr::sum(a.lower, Expr::mul({Expr(a.piece), toExpr(a.inner)}), a.infinite);
}

// value of the atom at integer n (finite atoms only)
std::optional<ZetaValue> atomValue(const SumAtom& a, long n) {
    try {
        auto v = evalRange(atomToExpr(a), n, n);
        return v[0];
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

bool noPolesFrom(const URatFun& r, long from) {
    for (long root : integerRoots(r.den()))
        if (root >= from) return false;
    return true;
}

// scalar * piece decomposition of a rational function of j
std::vector<std::pair<BigRational, URatFun>> pieces(const URatFun& c) {
    std::vector<std::pair<BigRational, URatFun>> out;
    auto [q, r] = UPoly::divRem(c.num(), c.den());
    for (int p = 0; p <= q.degree(); ++p)
        if (q.coeff(p) != 0) out.emplace_back(q.coeff(p), URatFun(UPoly::monomial(1, p)));
    if (r.isZero()) return out;
    URatFun rest(r, c.den());
    LinearFactorization f = factorLinear(c.den());
    for (const auto& [root, mult] : f.roots) {
        // Laurent coefficients of r/d at the root
        UPoly others = UPoly::divExact(c.den(), UPoly::linear(1, -root).pow(static_cast<unsigned>(mult)));
        UPoly num = r.shift(root), den = others.shift(root);
        std::vector<BigRational> g(static_cast<size_t>(mult));
        for (int i = 0; i < mult; ++i) {
            BigRational acc = num.coeff(i);
            for (int k = 1; k <= i; ++k) acc -= den.coeff(k) * g[static_cast<size_t>(i - k)];
            g[static_cast<size_t>(i)] = acc / den.coeff(0);
        }
        for (int i = 0; i < mult; ++i) {
            if (g[static_cast<size_t>(i)] == 0) continue;
            int k = mult - i;
            URatFun piece(UPoly(1), UPoly::linear(1, -root).pow(static_cast<unsigned>(k)));
            out.emplace_back(g[static_cast<size_t>(i)], piece);
            rest -= URatFun(g[static_cast<size_t>(i)]) * piece;
        }
    }
    if (!rest.isZero()) {
        BigRational lc = rest.num().lc();
        out.emplace_back(lc, rest * URatFun(BigRational(1) / lc));
    }
    return out;
}

// sum_{j=l}^{n} c(j) P(j) in closed form
std::optional<CanonExpr> gosperClosed(long l, const URatFun& c, const ProdCanon& p) {
    if (c.isZero()) return CanonExpr{};
    URatFun rho = p.ratio();
    URatFun ratio = c.shift(1) / c * rho.shift(1);
    auto z = gosper(ratio);
    if (!z) return std::nullopt;
    URatFun zc = *z * c;
    if (!noPolesFrom(zc, l)) return std::nullopt;
    for (long j = l; j <= 0; ++j)
        if (!prodValue(p, j)) return std::nullopt;
    auto pl = prodValue(p, l);
    if (!pl) return std::nullopt;
    Monomial m;
    m.prod = p;
    CanonExpr out = single(m, zc.shift(1) * rho.shift(1));
    addTerm(out, Monomial{}, URatFun(-zc(BigRational(l)) * *pl));
    return out;
}

std::optional<std::pair<BigRational, int>> linearPiece(const URatFun& piece) {
    if (!(piece.num() == UPoly(1))) return std::nullopt;
    int m = piece.den().degree();
    if (m < 1) return std::nullopt;
    BigRational beta = piece.den().coeff(m - 1) / BigRational(m);
    if (!(UPoly::linear(1, beta).pow(static_cast<unsigned>(m)) == piece.den())) return std::nullopt;
    return std::make_pair(beta, m);
}

Monomial withoutSums(const Monomial& m) {
    Monomial r = m;
    r.sums.clear();
    return r;
}

CanonExpr shiftMonomial(const Monomial& m, long s);

// shifted copies of the atom body: sum_{t=1}^{s} body(n+t) or -sum_{t=0}^{-s-1} body(n-t)
CanonExpr boundaryTerms(const CanonExpr& body, long s) {
    CanonExpr out;
    if (s > 0) {
        for (long t = 1; t <= s; ++t) out = add(out, shift(body, t));
    } else {
        for (long t = 0; t < -s; ++t) out = add(out, scale(shift(body, -t), URatFun(-1)));
    }
    return out;
}

CanonExpr atomCanon(long l, const URatFun& piece, const Monomial& inner) {
    if (auto lin = linearPiece(piece); lin && gSyncDepth < 48) {
        auto [beta, m] = *lin;
        BigInt fl = floorQ(beta);
        if (fl != 0) {
            long a = fl.get_si();
            BigRational alpha = beta - BigRational(fl);
            URatFun p0 = linearPow(alpha, -m);
            CanonExpr body2 = scale(shiftMonomial(inner, -a), p0);
            ++gSyncDepth;
            CanonExpr out;
            try {
                out = add(sumOf(l + a, body2), boundaryTerms(body2, a));
            } catch (...) {
                --gSyncDepth;
                throw;
            }
            --gSyncDepth;
            return out;
        }
    }
    if (inner.sums.size() == 1 && inner.sums[0].lower == 1 && !inner.sums[0].infinite) {
        const SumAtom& s = inner.sums[0];
        URatFun rho = inner.prod.ratio();
        auto z = gosper(piece.shift(1) / piece * rho.shift(1));
        if (z) {
            URatFun zc = *z * piece;
            auto sl = atomValue(s, l - 1);
            auto pl = prodValue(inner.prod, l);
            bool ok = noPolesFrom(zc, l) && sl && pl;
            for (long j = l; ok && j <= 0; ++j) ok = prodValue(inner.prod, j).has_value();
            if (ok) {
                // sum h S = G(n+1) S(n) - G(l) S(l-1) - sum G(j) s(j)
                CanonExpr out = single(inner, zc.shift(1) * rho.shift(1));
                ZetaValue c = *sl * (zc(BigRational(l)) * *pl);
                if (!c.isRational()) throw std::logic_error("zeta constant inside a sum atom");
                addTerm(out, Monomial{}, URatFun(-c.rational()));
                CanonExpr g = single(withoutSums(inner), zc);
                CanonExpr rest = sumOf(l, multiply(g, atomBody(s)));
                return add(out, scale(rest, URatFun(-1)));
            }
        }
    }
    SumAtom atom{l, piece, inner, false};
    if (l != 1) {
        SumAtom norm{1, piece, inner, false};
        if (auto c = atomValue(norm, l - 1); c && c->isRational()) {
            CanonExpr out = atomExpr(norm);
            addTerm(out, Monomial{}, URatFun(-c->rational()));
            return out;
        }
    }
    return atomExpr(atom);
}

BigRational harmonicNumber(long n, int m) {
    BigRational h(0);
    for (long j = 1; j <= n; ++j) h += BigRational(1) / ratPow(BigRational(j), m);
    return h;
}

// sum_{j=l}^{infinity} c(j); nullopt when no exact value is available
std::optional<CanonExpr> infiniteRational(long l, const URatFun& c) {
    if (c.isZero()) return CanonExpr{};
    if (!noPolesFrom(c, l)) throw std::domain_error("infinite sum has a pole in its range");
    auto ps = pieces(c);
    for (const auto& [s, p] : ps)
        if (p.isPolynomial()) throw std::domain_error("infinite sum diverges");
    if (auto z = gosper(c.shift(1) / c); z) {
        URatFun zc = *z * c;
        if (noPolesFrom(zc, l)) {
            // limit of zc(n+1) minus zc(l)
            URatFun k = zc.shift(1);
            int dn = k.num().isZero() ? -1 : k.num().degree(), dd = k.den().degree();
            if (dn > dd) throw std::domain_error("infinite sum diverges");
            BigRational lim = dn == dd ? k.num().lc() / k.den().lc() : BigRational(0);
            return constant(lim - zc(BigRational(l)));
        }
    }
    CanonExpr out;
    BigRational harm(0);
    std::vector<std::pair<BigRational, long>> simple;
    for (const auto& [s, p] : ps) {
        auto lin = linearPiece(p);
        if (!lin || lin->first.get_den() != 1) return std::nullopt;
        long b = lin->first.get_num().get_si();
        int m = lin->second;
        long top = l + b - 1;  // sum_{j=l}^{inf} 1/(j+b)^m = sum_{k=l+b}^{inf} 1/k^m
        if (top < 0) throw std::domain_error("infinite sum has a pole in its range");
        if (m == 1) {
            simple.emplace_back(s, top);
            harm += s;
            continue;
        }
        Monomial zm;
        zm.zeta = {{m, 1}};
        addTerm(out, zm, URatFun(s));
        addTerm(out, Monomial{}, URatFun(-s * harmonicNumber(top, m)));
    }
    if (harm != 0) throw std::domain_error("infinite sum diverges");
    for (const auto& [s, top] : simple) addTerm(out, Monomial{}, URatFun(-s * harmonicNumber(top, 1)));
    return out;
}

BigRational normalizeScalar(const URatFun& c) { return c.num().lc(); }

CanonExpr sumOfOne(long l, const URatFun& c, const Monomial& m, bool infinite) {
    if (infinite) {
        if (m.sums.empty() && m.prod.trivial())
            if (auto v = infiniteRational(l, c)) return *v;
        BigRational s = normalizeScalar(c);
        SumAtom atom{l, c * URatFun(BigRational(1) / s), m, true};
        return scale(atomExpr(atom), URatFun(s));
    }
    if (m.sums.empty())
        if (auto closed = gosperClosed(l, c, m.prod)) return *closed;
    CanonExpr out;
    for (const auto& [s, p] : pieces(c)) {
        if (m.sums.empty()) {
            if (auto closed = gosperClosed(l, p, m.prod)) {
                out = add(out, scale(*closed, URatFun(s)));
                continue;
            }
        }
        out = add(out, scale(atomCanon(l, p, m), URatFun(s)));
    }
    return out;
}

// monomial with sorted sums, expanding products of sums over a common range
CanonExpr expandSums(Monomial m) {
    std::sort(m.sums.begin(), m.sums.end(), [](const SumAtom& a, const SumAtom& b) { return compare(a, b) < 0; });
    for (size_t i = 0; i < m.sums.size(); ++i) {
        if (m.sums[i].infinite) continue;
        for (size_t k = i + 1; k < m.sums.size(); ++k) {
            if (m.sums[k].infinite || m.sums[k].lower != m.sums[i].lower) continue;
            SumAtom a = m.sums[i], b = m.sums[k];
            Monomial rest = m;
            rest.sums.erase(rest.sums.begin() + static_cast<long>(k));
            rest.sums.erase(rest.sums.begin() + static_cast<long>(i));
            CanonExpr ab = multiply(atomBody(a), atomBody(b));
            CanonExpr body = add(add(multiply(atomBody(a), atomExpr(b)), multiply(atomBody(b), atomExpr(a))),
                                 scale(ab, URatFun(-1)));
            return multiply(single(rest, URatFun(1)), sumOf(a.lower, body));
        }
    }
    return single(m, URatFun(1));
}

CanonExpr multiplyMonomials(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.zeta = mergeZeta(a.zeta, b.zeta);
    auto [coeff, p] = mergeProd(a.prod, b.prod);
    m.prod = p;
    m.sums = a.sums;
    m.sums.insert(m.sums.end(), b.sums.begin(), b.sums.end());
    if (a.sums.empty() || b.sums.empty()) {
        std::sort(m.sums.begin(), m.sums.end(),
                  [](const SumAtom& x, const SumAtom& y) { return compare(x, y) < 0; });
        return single(m, coeff);
    }
    return scale(expandSums(m), coeff);
}

CanonExpr shiftAtom(const SumAtom& a, long s) {
    CanonExpr out = atomExpr(a);
    if (a.infinite || s == 0) return out;
    return add(out, boundaryTerms(atomBody(a), s));
}

CanonExpr shiftMonomial(const Monomial& m, long s) {
    Monomial base;
    base.zeta = m.zeta;
    base.prod = m.prod;
    CanonExpr out = single(base, prodShiftFactor(m.prod, s));
    for (const auto& a : m.sums) out = multiply(out, shiftAtom(a, s));
    return out;
}

}  // namespace

URatFun ProdCanon::ratio() const {
    URatFun r(z);
    for (const auto& [a, e] : alpha) r *= linearPow(a, e);
    for (const auto& [q, e] : other) r *= URatFun(q).pow(static_cast<int>(e));
    return r;
}

int compare(const ProdCanon& a, const ProdCanon& b) {
    if (int c = cmp3(a.z, b.z)) return c;
    if (int c = cmp3(a.alpha, b.alpha)) return c;
    return cmp3(a.other, b.other);
}

int sumDepth(const Monomial& m) {
    int d = 0;
    for (const auto& s : m.sums) d = std::max(d, 1 + sumDepth(s.inner));
    return d;
}

int compare(const SumAtom& a, const SumAtom& b) {
    if (a.infinite != b.infinite) return a.infinite ? 1 : -1;
    int da = sumDepth(a.inner), db = sumDepth(b.inner);
    if (da != db) return da < db ? -1 : 1;
    if (a.lower != b.lower) return a.lower < b.lower ? -1 : 1;
    if (int c = URatFun::compare(a.piece, b.piece)) return c;
    return compare(a.inner, b.inner);
}

int compare(const Monomial& a, const Monomial& b) {
    if (a.sums.size() != b.sums.size()) return a.sums.size() < b.sums.size() ? -1 : 1;
    for (size_t i = 0; i < a.sums.size(); ++i)
        if (int c = compare(a.sums[i], b.sums[i])) return c;
    if (a.prod.trivial() != b.prod.trivial()) return a.prod.trivial() ? 1 : -1;
    if (int c = cmp3(a.zeta, b.zeta)) return c;
    return compare(a.prod, b.prod);
}

std::pair<URatFun, ProdCanon> canonProduct(long lower, const URatFun& ratio) {
    if (ratio.isZero()) throw std::domain_error("hypergeometric product with zero ratio");
    ProdCanon p;
    URatFun coeff(1);
    LinearFactorization fn = factorLinear(ratio.num()), fd = factorLinear(ratio.den());
    p.z = fn.unit / fd.unit;
    for (const auto& [r, m] : fn.roots) addLinear(p, coeff, -r, m, false);
    for (const auto& [r, m] : fd.roots) addLinear(p, coeff, -r, -m, false);
    for (const auto& [q, m] : fn.rest) addOther(p, coeff, q, m, false);
    for (const auto& [q, m] : fd.rest) addOther(p, coeff, q, -m, false);
    {
        // match prod_{j=lower}^{m} ratio(j) = coeff(m) P(m) / (coeff(lower-1) P(lower-1)) at the
        // first m >= lower - 1 where coeff(m) P(m) is finite and nonzero
        URatFun pr = p.ratio();
        auto pAt = [&](long m) -> std::optional<BigRational> {
            BigRational v = 1;
            for (long j = 1; j <= m; ++j) v *= pr(BigRational(j));
            for (long j = m + 1; j <= 0; ++j) {
                if (pr.hasPoleAt(j)) return std::nullopt;
                BigRational q = pr(BigRational(j));
                if (q == 0) return std::nullopt;
                v /= q;
            }
            return v;
        };
        BigRational acc = 1;
        bool done = false;
        for (long m = lower - 1; m < lower + 64 && !done; ++m) {
            if (m >= lower) {
                if (ratio.hasPoleAt(m) || ratio(BigRational(m)) == 0)
                    throw std::domain_error("hypergeometric product degenerate on its range");
                acc *= ratio(BigRational(m));
            }
            if (coeff.hasPoleAt(m)) continue;
            BigRational c = coeff(BigRational(m));
            auto pm = pAt(m);
            if (c == 0 || !pm) continue;
            coeff *= URatFun(acc / (c * *pm));
            done = true;
        }
        if (!done) throw std::domain_error("hypergeometric product degenerate at its lower bound");
    }
    return {coeff, p};
}

CanonExpr add(const CanonExpr& a, const CanonExpr& b) {
    CanonExpr out = a;
    for (const auto& [m, c] : b) addTerm(out, m, c);
    return out;
}

CanonExpr scale(const CanonExpr& a, const URatFun& c) {
    if (c.isZero()) return {};
    CanonExpr out;
    for (const auto& [m, x] : a) out.emplace(m, x * c);
    return out;
}

CanonExpr multiply(const CanonExpr& a, const CanonExpr& b) {
    CanonExpr out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            URatFun c = ca * cb;
            for (const auto& [m, x] : multiplyMonomials(ma, mb)) addTerm(out, m, x * c);
        }
    return out;
}

CanonExpr shift(const CanonExpr& a, long s) {
    if (s == 0) return a;
    CanonExpr out;
    for (const auto& [m, c] : a) out = add(out, scale(shiftMonomial(m, s), c.shift(BigRational(s))));
    return out;
}

CanonExpr sumOf(long lower, const CanonExpr& body, bool infinite) {
    CanonExpr out;
    for (const auto& [m, c] : body) {
        Monomial rest = m;
        rest.zeta.clear();
        CanonExpr part = sumOfOne(lower, c, rest, infinite);
        if (m.zeta.empty()) {
            out = add(out, part);
        } else {
            Monomial zm;
            zm.zeta = m.zeta;
            out = add(out, multiply(single(zm, URatFun(1)), part));
        }
    }
    return out;
}

CanonExpr fromExpr(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Rat: return single(Monomial{}, e.rat());
        case Expr::Kind::Zeta: {
            Monomial m;
            m.zeta = {{e.zetaWeight(), 1}};
            return single(m, URatFun(1));
        }
        case Expr::Kind::Prod: {
            auto [coeff, p] = canonProduct(e.prod().lower, e.prod().ratio);
            Monomial m;
            m.prod = p;
            return single(m, coeff);
        }
        case Expr::Kind::Add: {
            CanonExpr out;
            for (const auto& c : e.children()) out = add(out, fromExpr(c));
            return out;
        }
        case Expr::Kind::Mul: {
            CanonExpr out = single(Monomial{}, URatFun(1));
            for (const auto& c : e.children()) out = multiply(out, fromExpr(c));
            return out;
        }
        case Expr::Kind::Sum: return sumOf(e.sumLower(), fromExpr(e.sumBody()), e.sumInfinite());
    }
    return {};
}

Expr toExpr(const Monomial& m) {
    std::vector<Expr> f;
    for (auto [w, p] : m.zeta)
        for (int i = 0; i < p; ++i) f.push_back(Expr::zeta(w));
    if (m.prod.z != 1) f.push_back(Expr::power(m.prod.z));
    for (const auto& [a, e] : m.prod.alpha) f.push_back(Expr::product(HGProduct{1, linearPow(a, e), std::nullopt}));
    for (const auto& [q, e] : m.prod.other)
        f.push_back(Expr::product(HGProduct{1, URatFun(q).pow(static_cast<int>(e)), std::nullopt}));
    for (const auto& s : m.sums) f.push_back(atomToExpr(s));
    return Expr::mul(f);
}

Expr toExpr(const CanonExpr& c) {
    std::vector<Expr> terms;
    for (const auto& [m, x] : c) terms.push_back(Expr::mul({Expr(x), toExpr(m)}));
    return Expr::add(terms);
}

}  // namespace epschain::canon

namespace epschain {

Expr canonicalize(const Expr& e) { return canon::toExpr(canon::fromExpr(e)); }

Expr shift(const Expr& e, long m) { return canon::toExpr(canon::shift(canon::fromExpr(e), m)); }

Expr wrapIndefinite(const Expr& e, long lower) {
    return canon::toExpr(canon::sumOf(lower, canon::fromExpr(e), false));
}

bool equalCanonical(const Expr& a, const Expr& b) { return canon::fromExpr(a - b).empty(); }

bool isZeroCanonical(const Expr& e) { return canon::fromExpr(e).empty(); }

}  // namespace epschain
