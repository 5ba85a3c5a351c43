#include "epschain/nested_sums.hpp"

#include <algorithm>
#include <stdexcept>

namespace epschain {

namespace {

std::shared_ptr<Expr::Node> makeNode(Expr::Kind k) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    return n;
}

const std::vector<Expr> kNoChildren;

}  // namespace

Expr::Expr() : Expr(URatFun()) {}

Expr::Expr(const BigRational& c) : Expr(URatFun(c)) {}

Expr::Expr(const URatFun& r) {
    auto n = makeNode(Kind::Rat);
    n->rat = r;
    n_ = n;
}

Expr Expr::var() { return Expr(URatFun::x()); }

Expr Expr::product(HGProduct p) {
    if (p.ratio.isZero()) throw std::invalid_argument("hypergeometric product with zero ratio");
    if (p.ratio == URatFun(1)) return Expr(1);
    auto n = makeNode(Kind::Prod);
    n->prod = std::move(p);
    return Expr(std::shared_ptr<const Node>(n));
}

Expr Expr::power(const BigRational& base) {
    if (base == 1) return Expr(1);
    return product(HGProduct{1, URatFun(base), std::nullopt});
}

Expr Expr::zeta(int weight) {
    if (weight < 2) throw std::invalid_argument("zeta(" + std::to_string(weight) + ") diverges");
    auto n = makeNode(Kind::Zeta);
    n->weight = weight;
    return Expr(std::shared_ptr<const Node>(n));
}

Expr Expr::value(const ZetaValue& v) {
    std::vector<Expr> terms;
    if (v.rational() != 0) terms.emplace_back(v.rational());
    for (const auto& [m, c] : v.zetaTerms()) {
        std::vector<Expr> f{Expr(c)};
        for (auto [w, p] : m)
            for (int i = 0; i < p; ++i) f.push_back(zeta(w));
        terms.push_back(mul(f));
    }
    return add(terms);
}

Expr Expr::sum(long lower, const Expr& body, bool infinite) {
    if (body.isZero() && !infinite) return Expr();
    auto n = makeNode(Kind::Sum);
    n->lower = lower;
    n->children = {body};
    n->infinite = infinite;
    return Expr(std::shared_ptr<const Node>(n));
}

Expr Expr::harmonic(const std::vector<int>& index) {
    Expr inner(1);
    for (size_t i = index.size(); i-- > 0;) {
        int a = index[i];
        if (a == 0) throw std::invalid_argument("harmonic sum index 0");
        int m = std::abs(a);
        Expr body = mul({Expr(URatFun(UPoly(1), UPoly::monomial(1, m))), a < 0 ? power(-1) : Expr(1), inner});
        inner = sum(1, body);
    }
    return inner;
}

Expr Expr::add(std::vector<Expr> terms) {
    // rational terms merge into one, kept at the position of the first
    std::vector<Expr> flat;
    URatFun r;
    long ratPos = -1;
    auto take = [&](const Expr& c) {
        if (c.kind() == Kind::Rat) {
            if (ratPos < 0) ratPos = static_cast<long>(flat.size());
            r += c.rat();
        } else {
            flat.push_back(c);
        }
    };
    for (auto& t : terms) {
        if (t.kind() == Kind::Add)
            for (const auto& c : t.children()) take(c);
        else
            take(t);
    }
    if (!r.isZero()) flat.insert(flat.begin() + ratPos, Expr(r));
    if (flat.empty()) return Expr();
    if (flat.size() == 1) return flat[0];
    auto n = makeNode(Kind::Add);
    n->children = std::move(flat);
    return Expr(std::shared_ptr<const Node>(n));
}

Expr Expr::mul(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    URatFun r(1);
    for (auto& t : factors) {
        if (t.kind() == Kind::Mul) {
            for (const auto& c : t.children()) {
                if (c.kind() == Kind::Rat)
                    r *= c.rat();
                else
                    flat.push_back(c);
            }
        } else if (t.kind() == Kind::Rat) {
            r *= t.rat();
        } else {
            flat.push_back(t);
        }
    }
    if (r.isZero()) return Expr();
    if (!(r == URatFun(1))) flat.insert(flat.begin(), Expr(r));
    if (flat.empty()) return Expr(1);
    if (flat.size() == 1) return flat[0];
    auto n = makeNode(Kind::Mul);
    n->children = std::move(flat);
    return Expr(std::shared_ptr<const Node>(n));
}

Expr::Kind Expr::kind() const { return n_->kind; }
const URatFun& Expr::rat() const { return n_->rat; }
const HGProduct& Expr::prod() const { return n_->prod; }
int Expr::zetaWeight() const { return n_->weight; }
const std::vector<Expr>& Expr::children() const {
    return (n_->kind == Kind::Add || n_->kind == Kind::Mul) ? n_->children : kNoChildren;
}
long Expr::sumLower() const { return n_->lower; }
const Expr& Expr::sumBody() const { return n_->children.at(0); }
bool Expr::sumInfinite() const { return n_->infinite; }

bool Expr::isZero() const { return n_->kind == Kind::Rat && n_->rat.isZero(); }

Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::add({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }
Expr Expr::operator-() const { return mul({Expr(-1), *this}); }

int Expr::compare(const Expr& a, const Expr& b) {
    if (a.n_ == b.n_) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case Kind::Rat: return URatFun::compare(a.rat(), b.rat());
        case Kind::Zeta: return a.zetaWeight() == b.zetaWeight() ? 0 : (a.zetaWeight() < b.zetaWeight() ? -1 : 1);
        case Kind::Prod: {
            if (a.prod().lower != b.prod().lower) return a.prod().lower < b.prod().lower ? -1 : 1;
            return URatFun::compare(a.prod().ratio, b.prod().ratio);
        }
        case Kind::Sum:
            if (a.sumLower() != b.sumLower()) return a.sumLower() < b.sumLower() ? -1 : 1;
            if (a.sumInfinite() != b.sumInfinite()) return a.sumInfinite() ? 1 : -1;
            return compare(a.sumBody(), b.sumBody());
        case Kind::Add:
        case Kind::Mul: {
            const auto& ca = a.children();
            const auto& cb = b.children();
            if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
            for (size_t i = 0; i < ca.size(); ++i) {
                int c = compare(ca[i], cb[i]);
                if (c != 0) return c;
            }
            return 0;
        }
    }
    return 0;
}

bool Expr::structurallyEqual(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

size_t Expr::nodeCount() const {
    size_t c = 1;
    if (kind() == Kind::Sum) return 1 + sumBody().nodeCount();
    for (const auto& ch : children()) c += ch.nodeCount();
    return c;
}

int Expr::depth() const {
    if (kind() == Kind::Sum) return 1 + sumBody().depth();
    int d = 0;
    for (const auto& ch : children()) d = std::max(d, ch.depth());
    return d;
}

// ---------------------------------------------------------------- evaluation

namespace {

using Vals = std::vector<std::optional<ZetaValue>>;

Vals evalImpl(const Expr& e, long lo, long hi) {
    size_t len = static_cast<size_t>(hi - lo + 1);
    Vals out(len);
    switch (e.kind()) {
        case Expr::Kind::Rat: {
            const URatFun& r = e.rat();
            if (r.isConstant()) {
                ZetaValue v(r.constantValue());
                for (auto& o : out) o = v;
                return out;
            }
            for (long n = lo; n <= hi; ++n) {
                BigRational d = r.den()(n);
                if (d != 0) out[static_cast<size_t>(n - lo)] = ZetaValue(r.num()(n) / d);
            }
            return out;
        }
        case Expr::Kind::Zeta: {
            ZetaValue v = ZetaValue::zeta(e.zetaWeight());
            for (auto& o : out) o = v;
            return out;
        }
        case Expr::Kind::Add:
        case Expr::Kind::Mul: {
            bool isAdd = e.kind() == Expr::Kind::Add;
            bool first = true;
            for (const auto& c : e.children()) {
                Vals cv = evalImpl(c, lo, hi);
                for (size_t i = 0; i < len; ++i) {
                    if (first) {
                        out[i] = std::move(cv[i]);
                    } else if (out[i] && cv[i]) {
                        if (isAdd)
                            *out[i] += *cv[i];
                        else
                            *out[i] *= *cv[i];
                    } else {
                        out[i].reset();
                    }
                }
                first = false;
            }
            return out;
        }
        case Expr::Kind::Prod: {
            const HGProduct& p = e.prod();
            long l = p.lower;
            long a = std::min(l, lo + 1), b = std::max(hi, l - 1);
            // prefix data over j in [a, t], index t - (a - 1)
            size_t m = static_cast<size_t>(b - a + 2);
            std::vector<BigRational> pz(m);
            std::vector<long> zeros(m, 0), poles(m, 0);
            pz[0] = 1;
            for (long j = a; j <= b; ++j) {
                size_t t = static_cast<size_t>(j - a + 1);
                BigRational d = p.ratio.den()(j), nu = p.ratio.num()(j);
                pz[t] = pz[t - 1];
                zeros[t] = zeros[t - 1];
                poles[t] = poles[t - 1];
                if (d == 0)
                    ++poles[t];
                else if (nu == 0)
                    ++zeros[t];
                else
                    pz[t] *= nu / d;
            }
            size_t base = static_cast<size_t>(l - 1 - (a - 1));
            for (long n = lo; n <= hi; ++n) {
                size_t t = static_cast<size_t>(n - (a - 1));
                long z = zeros[t] - zeros[base], pl = poles[t] - poles[base];
                auto& o = out[static_cast<size_t>(n - lo)];
                if (n >= l - 1) {
                    if (pl != 0) continue;
                    o = z != 0 ? ZetaValue(0) : ZetaValue(pz[t] / pz[base]);
                } else {
                    if (z != 0 || pl != 0) continue;
                    o = ZetaValue(pz[t] / pz[base]);
                }
            }
            return out;
        }
        case Expr::Kind::Sum: {
            if (e.sumInfinite()) throw std::domain_error("cannot evaluate an infinite sum exactly");
            long l = e.sumLower();
            long a = std::min(l, lo + 1), b = std::max(hi, l - 1);
            size_t m = static_cast<size_t>(b - a + 2);
            std::vector<ZetaValue> pre(m);
            std::vector<long> bad(m, 0);
            if (b >= a) {
                Vals body = evalImpl(e.sumBody(), a, b);
                for (long j = a; j <= b; ++j) {
                    size_t t = static_cast<size_t>(j - a + 1);
                    pre[t] = pre[t - 1];
                    bad[t] = bad[t - 1];
                    const auto& v = body[static_cast<size_t>(j - a)];
                    if (v)
                        pre[t] += *v;
                    else
                        ++bad[t];
                }
            }
            size_t base = static_cast<size_t>(l - 1 - (a - 1));
            for (long n = lo; n <= hi; ++n) {
                size_t t = static_cast<size_t>(n - (a - 1));
                if (bad[t] != bad[base]) continue;
                out[static_cast<size_t>(n - lo)] = pre[t] - pre[base];
            }
            return out;
        }
    }
    return out;
}

}  // namespace

std::vector<std::optional<ZetaValue>> evalRange(const Expr& e, long lo, long hi) {
    if (hi < lo) return {};
    return evalImpl(e, lo, hi);
}

ZetaValue eval(const Expr& e, long n) {
    auto v = evalImpl(e, n, n);
    if (!v[0]) throw std::domain_error("expression undefined at n = " + std::to_string(n));
    return *v[0];
}

// ---------------------------------------------------------------- harmonic sums

bool HarmonicIndexLess::operator()(const HarmonicIndex& a, const HarmonicIndex& b) const {
    auto weight = [](const HarmonicIndex& x) {
        int w = 0;
        for (int i : x) w += std::abs(i);
        return w;
    };
    int wa = weight(a), wb = weight(b);
    if (wa != wb) return wa < wb;
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

HarmonicCombination quasiShuffle(const HarmonicIndex& a, const HarmonicIndex& b) {
    HarmonicCombination out;
    if (a.empty()) {
        out[b] = 1;
        return out;
    }
    if (b.empty()) {
        out[a] = 1;
        return out;
    }
    HarmonicIndex ra(a.begin() + 1, a.end()), rb(b.begin() + 1, b.end());
    auto prepend = [&](int head, const HarmonicCombination& comb, int sign) {
        for (const auto& [idx, c] : comb) {
            HarmonicIndex k{head};
            k.insert(k.end(), idx.begin(), idx.end());
            out[k] += sign * c;
        }
    };
    prepend(a[0], quasiShuffle(ra, b), 1);
    prepend(b[0], quasiShuffle(a, rb), 1);
    int s = ((a[0] < 0) != (b[0] < 0)) ? -1 : 1;
    prepend(s * (std::abs(a[0]) + std::abs(b[0])), quasiShuffle(ra, rb), -1);
    for (auto it = out.begin(); it != out.end();) {
        if (it->second == 0)
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

std::vector<BigRational> harmonicValues(const HarmonicIndex& index, long N) {
    std::vector<BigRational> inner(static_cast<size_t>(N) + 1, BigRational(1));
    for (size_t d = index.size(); d-- > 0;) {
        int a = index[d];
        std::vector<BigRational> cur(static_cast<size_t>(N) + 1, BigRational(0));
        for (long j = 1; j <= N; ++j) {
            BigRational term = inner[static_cast<size_t>(j)] / ratPow(BigRational(j), std::abs(a));
            if (a < 0 && j % 2 == 1) term = -term;
            cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + term;
        }
        inner = std::move(cur);
    }
    return inner;
}

// ---------------------------------------------------------------- sequences

ZetaValue Sequence::at(long n) const {
    if (n < validFrom) {
        auto it = values.find(n);
        if (it == values.end()) throw std::domain_error("sequence value at " + std::to_string(n) + " unavailable");
        return it->second;
    }
    return eval(expr, n);
}

std::vector<ZetaValue> Sequence::range(long lo, long hi) const {
    std::vector<ZetaValue> out;
    for (long n = lo; n <= std::min(hi, validFrom - 1); ++n) out.push_back(at(n));
    long s = std::max(lo, validFrom);
    if (s <= hi) {
        auto v = evalRange(expr, s, hi);
        for (long n = s; n <= hi; ++n) {
            auto& x = v[static_cast<size_t>(n - s)];
            if (!x) throw std::domain_error("sequence undefined at " + std::to_string(n));
            out.push_back(std::move(*x));
        }
    }
    return out;
}

}  // namespace epschain
