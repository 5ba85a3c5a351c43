#include "epschain/multipoly.hpp"

#include <algorithm>
#include <climits>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>

namespace epschain {

namespace {

int variableRank(const std::string& v) {
    static const std::map<std::string, int> table = {
        {"n", 0}, {"k", 1}, {"j", 2}, {"i", 3}, {"x", 4}, {"y", 5}, {"z", 6},
        {"u", 7}, {"v", 8}, {"w", 9}, {"t", 10}, {"eps", 100}};
    auto it = table.find(v);
    return it == table.end() ? 50 : it->second;
}

const BigRational kZero(0);

}  // namespace

bool variableLess(const std::string& a, const std::string& b) {
    int ra = variableRank(a), rb = variableRank(b);
    if (ra != rb) return ra < rb;
    return a < b;
}

std::vector<std::string> unionVars(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), variableLess);
    return out;
}

MultiPoly::MultiPoly(const BigRational& c) {
    if (c != 0) terms_.emplace(Exponent{}, c);
}

MultiPoly::MultiPoly(std::vector<std::string> vars, TermMap terms) {
    std::vector<size_t> perm(vars.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](size_t a, size_t b) { return variableLess(vars[a], vars[b]); });
    bool sorted = true;
    for (size_t i = 0; i < perm.size(); ++i) sorted = sorted && perm[i] == i;
    if (sorted) {
        vars_ = std::move(vars);
        terms_ = std::move(terms);
    } else {
        for (size_t i : perm) vars_.push_back(vars[i]);
        for (auto& [e, c] : terms) {
            Exponent ne(e.size());
            for (size_t i = 0; i < perm.size(); ++i) ne[i] = e[perm[i]];
            terms_[ne] += c;
        }
    }
    normalize();
}

MultiPoly MultiPoly::variable(const std::string& name) {
    MultiPoly p;
    p.vars_ = {name};
    p.terms_.emplace(Exponent{1}, BigRational(1));
    return p;
}

MultiPoly MultiPoly::fromUPoly(const UPoly& p, const std::string& var) {
    MultiPoly r;
    r.vars_ = {var};
    for (int i = 0; i <= p.degree(); ++i)
        if (p.coeff(i) != 0) r.terms_.emplace(Exponent{i}, p.coeff(i));
    r.normalize();
    return r;
}

MultiPoly MultiPoly::fromCoefficients(const std::string& var, const std::vector<MultiPoly>& coeffs) {
    MultiPoly r;
    MultiPoly x = variable(var);
    for (size_t i = coeffs.size(); i-- > 0;) r = r * x + coeffs[i];
    return r;
}

void MultiPoly::normalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [e, c] : terms_)
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) used[i] = true;
    bool all = std::all_of(used.begin(), used.end(), [](bool b) { return b; });
    if (all) return;
    std::vector<std::string> nv;
    std::vector<size_t> keep;
    for (size_t i = 0; i < vars_.size(); ++i)
        if (used[i]) {
            nv.push_back(vars_[i]);
            keep.push_back(i);
        }
    TermMap nt;
    for (auto& [e, c] : terms_) {
        Exponent ne;
        ne.reserve(keep.size());
        for (size_t i : keep) ne.push_back(e[i]);
        nt.emplace(std::move(ne), c);
    }
    vars_ = std::move(nv);
    terms_ = std::move(nt);
}

MultiPoly MultiPoly::alignedTo(const std::vector<std::string>& vars) const {
    if (vars == vars_) return *this;
    std::vector<size_t> pos(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find(vars.begin(), vars.end(), vars_[i]);
        if (it == vars.end()) throw std::logic_error("alignedTo: missing variable");
        pos[i] = static_cast<size_t>(it - vars.begin());
    }
    MultiPoly r;
    r.vars_ = vars;
    for (const auto& [e, c] : terms_) {
        Exponent ne(vars.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) ne[pos[i]] = e[i];
        r.terms_.emplace(std::move(ne), c);
    }
    return r;
}

BigRational MultiPoly::constantValue() const {
    if (!isConstant()) throw std::logic_error("constantValue of a non-constant polynomial");
    return terms_.empty() ? BigRational(0) : terms_.begin()->second;
}

bool MultiPoly::hasVar(const std::string& v) const {
    return std::find(vars_.begin(), vars_.end(), v) != vars_.end();
}

int MultiPoly::degree(const std::string& v) const {
    auto it = std::find(vars_.begin(), vars_.end(), v);
    if (terms_.empty()) return -1;
    if (it == vars_.end()) return 0;
    size_t i = static_cast<size_t>(it - vars_.begin());
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
    return d;
}

int MultiPoly::minDegree(const std::string& v) const {
    if (terms_.empty()) return -1;
    auto it = std::find(vars_.begin(), vars_.end(), v);
    if (it == vars_.end()) return 0;
    size_t i = static_cast<size_t>(it - vars_.begin());
    int d = terms_.begin()->first[i];
    for (const auto& [e, c] : terms_) d = std::min(d, e[i]);
    return d;
}

int MultiPoly::totalDegree() const {
    if (terms_.empty()) return -1;
    int d = 0;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

const BigRational& MultiPoly::leadingCoefficient() const {
    return terms_.empty() ? kZero : terms_.rbegin()->second;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    if (o.terms_.empty()) return *this;
    if (vars_ != o.vars_) {
        auto u = unionVars(vars_, o.vars_);
        *this = alignedTo(u);
        MultiPoly b = o.alignedTo(u);
        for (const auto& [e, c] : b.terms_) terms_[e] += c;
    } else {
        for (const auto& [e, c] : o.terms_) terms_[e] += c;
    }
    normalize();
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    if (o.terms_.empty()) return *this;
    if (vars_ != o.vars_) {
        auto u = unionVars(vars_, o.vars_);
        *this = alignedTo(u);
        MultiPoly b = o.alignedTo(u);
        for (const auto& [e, c] : b.terms_) terms_[e] -= c;
    } else {
        for (const auto& [e, c] : o.terms_) terms_[e] -= c;
    }
    normalize();
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.terms_.empty() || b.terms_.empty()) return MultiPoly();
    if (a.isConstant()) return b * a.constantValue();
    if (b.isConstant()) return a * b.constantValue();
    const MultiPoly* pa = &a;
    const MultiPoly* pb = &b;
    MultiPoly ta, tb;
    if (a.vars_ != b.vars_) {
        auto u = unionVars(a.vars_, b.vars_);
        ta = a.alignedTo(u);
        tb = b.alignedTo(u);
        pa = &ta;
        pb = &tb;
    }
    MultiPoly r;
    r.vars_ = pa->vars_;
    size_t nv = r.vars_.size();
    MultiPoly::Exponent e(nv);
    BigRational t;
    for (const auto& [ea, ca] : pa->terms_)
        for (const auto& [eb, cb] : pb->terms_) {
            for (size_t i = 0; i < nv; ++i) e[i] = ea[i] + eb[i];
            t = ca * cb;
            auto [it, inserted] = r.terms_.try_emplace(e, t);
            if (!inserted) it->second += t;
        }
    r.normalize();
    return r;
}

MultiPoly& MultiPoly::operator*=(const BigRational& s) {
    if (s == 0) {
        *this = MultiPoly();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly r(1), b = *this;
    while (e > 0) {
        if (e & 1u) r = r * b;
        e >>= 1u;
        if (e) b = b * b;
    }
    return r;
}

MultiPoly MultiPoly::coefficient(const std::string& v, int power) const {
    auto it = std::find(vars_.begin(), vars_.end(), v);
    if (it == vars_.end()) return power == 0 ? *this : MultiPoly();
    size_t i = static_cast<size_t>(it - vars_.begin());
    MultiPoly r;
    r.vars_ = vars_;
    for (const auto& [e, c] : terms_)
        if (e[i] == power) {
            Exponent ne = e;
            ne[i] = 0;
            r.terms_.emplace(std::move(ne), c);
        }
    r.normalize();
    return r;
}

std::vector<MultiPoly> MultiPoly::coefficientsIn(const std::string& v) const {
    int d = degree(v);
    if (d < 0) return {};
    auto it = std::find(vars_.begin(), vars_.end(), v);
    if (it == vars_.end()) return {*this};
    size_t i = static_cast<size_t>(it - vars_.begin());
    std::vector<MultiPoly> out(static_cast<size_t>(d) + 1);
    for (auto& p : out) p.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
        Exponent ne = e;
        ne[i] = 0;
        out[static_cast<size_t>(e[i])].terms_.emplace(std::move(ne), c);
    }
    for (auto& p : out) p.normalize();
    return out;
}

MultiPoly MultiPoly::evaluate(const std::string& v, const BigRational& value) const {
    auto it = std::find(vars_.begin(), vars_.end(), v);
    if (it == vars_.end()) return *this;
    size_t i = static_cast<size_t>(it - vars_.begin());
    MultiPoly r;
    r.vars_ = vars_;
    std::map<int, BigRational> powers;
    for (const auto& [e, c] : terms_) {
        auto pit = powers.find(e[i]);
        if (pit == powers.end()) pit = powers.emplace(e[i], ratPow(value, e[i])).first;
        Exponent ne = e;
        ne[i] = 0;
        r.terms_[ne] += c * pit->second;
    }
    r.normalize();
    return r;
}

BigRational MultiPoly::evaluateAll(const std::map<std::string, BigRational>& values) const {
    std::vector<const BigRational*> vals;
    for (const auto& v : vars_) {
        auto it = values.find(v);
        if (it == values.end()) throw std::invalid_argument("evaluateAll: no value for variable " + v);
        vals.push_back(&it->second);
    }
    BigRational r = 0, t;
    for (const auto& [e, c] : terms_) {
        t = c;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t *= ratPow(*vals[i], e[i]);
        r += t;
    }
    return r;
}

MultiPoly MultiPoly::substitute(const std::string& v, const MultiPoly& s) const {
    if (!hasVar(v)) return *this;
    auto cs = coefficientsIn(v);
    MultiPoly r;
    for (size_t i = cs.size(); i-- > 0;) r = r * s + cs[i];
    return r;
}

MultiPoly MultiPoly::shift(const std::string& v, const BigRational& c) const {
    if (c == 0 || !hasVar(v)) return *this;
    return substitute(v, variable(v) + MultiPoly(c));
}

MultiPoly MultiPoly::derivative(const std::string& v) const {
    auto it = std::find(vars_.begin(), vars_.end(), v);
    if (it == vars_.end()) return MultiPoly();
    size_t i = static_cast<size_t>(it - vars_.begin());
    MultiPoly r;
    r.vars_ = vars_;
    for (const auto& [e, c] : terms_)
        if (e[i] > 0) {
            Exponent ne = e;
            ne[i] -= 1;
            r.terms_[ne] += c * e[i];
        }
    r.normalize();
    return r;
}

UPoly MultiPoly::toUPoly(const std::string& v) const {
    if (isConstant()) return UPoly(constantValue());
    if (vars_.size() != 1 || vars_[0] != v)
        throw std::invalid_argument("toUPoly: polynomial " + toString() + " is not univariate in " + v);
    std::vector<BigRational> c(static_cast<size_t>(degree(v)) + 1);
    for (const auto& [e, k] : terms_) c[static_cast<size_t>(e[0])] = k;
    return UPoly(std::move(c));
}

std::optional<MultiPoly> MultiPoly::divideExact(const MultiPoly& b) const {
    if (b.isZero()) throw std::domain_error("division by the zero polynomial");
    if (isZero()) return MultiPoly();
    if (b.isConstant()) return *this * (1 / b.constantValue());
    auto u = unionVars(vars_, b.vars_);
    MultiPoly r = alignedTo(u), bb = b.alignedTo(u);
    MultiPoly q;
    q.vars_ = u;
    const auto& [eb, cb] = *bb.terms_.rbegin();
    size_t nv = u.size();
    while (!r.terms_.empty()) {
        const auto& [er, cr] = *r.terms_.rbegin();
        Exponent et(nv);
        for (size_t i = 0; i < nv; ++i) {
            et[i] = er[i] - eb[i];
            if (et[i] < 0) return std::nullopt;
        }
        BigRational ct = cr / cb;
        q.terms_.emplace(et, ct);
        for (const auto& [e, c] : bb.terms_) {
            Exponent ne(nv);
            for (size_t i = 0; i < nv; ++i) ne[i] = e[i] + et[i];
            auto it = r.terms_.find(ne);
            if (it == r.terms_.end())
                r.terms_.emplace(std::move(ne), -c * ct);
            else {
                it->second -= c * ct;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
    }
    q.normalize();
    return q;
}

BigRational MultiPoly::content() const {
    if (isZero()) return 0;
    BigInt g = 0, l = 1;
    for (const auto& [e, c] : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    }
    BigRational r(g, l);
    r.canonicalize();
    if (leadingCoefficient() < 0) r = -r;
    return r;
}

MultiPoly MultiPoly::primitive() const {
    if (isZero()) return *this;
    BigRational c = content();
    if (c == 1) return *this;
    return *this * (1 / c);
}

std::string MultiPoly::toString() const {
    if (isZero()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        BigRational a = abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        bool constant = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
        std::string mono;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars_[i];
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (constant)
            out += a.get_str();
        else if (a == 1)
            out += mono;
        else
            out += a.get_str() + "*" + mono;
    }
    return out;
}

int MultiPoly::compare(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_) return a.vars_ < b.vars_ ? -1 : 1;
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
    auto ia = a.terms_.rbegin();
    auto ib = b.terms_.rbegin();
    for (; ia != a.terms_.rend(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        int s = cmp(ia->second, ib->second);
        if (s != 0) return s < 0 ? -1 : 1;
    }
    return 0;
}

// ---------------------------------------------------------------- gcd

namespace {

using Coeffs = std::vector<MultiPoly>;

void trimCoeffs(Coeffs& c) {
    while (!c.empty() && c.back().isZero()) c.pop_back();
}

MultiPoly gcdImpl(const MultiPoly& a, const MultiPoly& b);

MultiPoly gcdList(const Coeffs& cs) {
    MultiPoly g;
    for (const auto& c : cs) {
        if (c.isZero()) continue;
        g = g.isZero() ? c.primitive() : gcdImpl(g, c);
        if (g.isConstant()) return MultiPoly(1);
    }
    return g;
}

Coeffs divideList(const Coeffs& cs, const MultiPoly& d) {
    Coeffs out;
    out.reserve(cs.size());
    for (const auto& c : cs) {
        auto q = c.divideExact(d);
        if (!q) throw std::logic_error("gcd: inexact content division");
        out.push_back(std::move(*q));
    }
    return out;
}

Coeffs primitiveList(const Coeffs& cs) {
    MultiPoly g = gcdList(cs);
    if (g.isConstant()) {
        // normalize the rational content too
        BigInt num = 0, den = 1;
        for (const auto& c : cs)
            for (const auto& [e, q] : c.terms()) {
                mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), q.get_num_mpz_t());
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
            }
        BigRational f(den, num);
        f.canonicalize();
        Coeffs out = cs;
        for (auto& c : out) c *= f;
        return out;
    }
    return divideList(cs, g);
}

// lc(b)^k a mod b in the main variable
Coeffs prem(Coeffs a, const Coeffs& b) {
    const MultiPoly& lb = b.back();
    size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        MultiPoly la = a.back();
        size_t off = a.size() - b.size();
        for (auto& c : a) c = c * lb;
        for (size_t i = 0; i <= db; ++i) a[off + i] -= la * b[i];
        a.pop_back();
        trimCoeffs(a);
    }
    return a;
}

// Newton interpolation through (xs[i], ys[i])
UPoly interpolate(const std::vector<BigRational>& xs, std::vector<BigRational> ys) {
    size_t n = xs.size();
    for (size_t j = 1; j < n; ++j)
        for (size_t i = n - 1; i >= j; --i) ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - j]);
    UPoly p(ys[n - 1]);
    for (size_t i = n - 1; i-- > 0;) p = p * UPoly::linear(1, -xs[i]) + UPoly(ys[i]);
    return p;
}

// gcd in Q[w][v] from images at w = t, checked by division
std::optional<MultiPoly> bivariateGcd(const MultiPoly& a, const MultiPoly& b, const std::string& v,
                                      const std::string& w) {
    auto split = [&](const MultiPoly& p) {
        std::vector<UPoly> c;
        for (const auto& q : p.coefficientsIn(v)) c.push_back(q.isZero() ? UPoly() : q.toUPoly(w));
        while (!c.empty() && c.back().isZero()) c.pop_back();
        return c;
    };
    auto content = [](const std::vector<UPoly>& c) {
        UPoly g;
        for (const auto& q : c)
            if (!q.isZero()) g = gcd(g, q);
        return g;
    };
    auto evalAt = [](const std::vector<UPoly>& c, const BigRational& t) {
        std::vector<BigRational> v;
        for (const auto& q : c) v.push_back(q.isZero() ? BigRational(0) : q(t));
        return UPoly(v);
    };
    std::vector<UPoly> A = split(a), B = split(b);
    UPoly ca = content(A), cb = content(B);
    for (auto& q : A)
        if (!q.isZero()) q = UPoly::divExact(q, ca);
    for (auto& q : B)
        if (!q.isZero()) q = UPoly::divExact(q, cb);
    MultiPoly cg = MultiPoly::fromUPoly(gcd(ca, cb), w);
    UPoly gam = gcd(A.back(), B.back());
    int da = 0, db = 0;
    for (const auto& q : A) da = std::max(da, q.degree());
    for (const auto& q : B) db = std::max(db, q.degree());
    size_t need = static_cast<size_t>(std::min(da, db) + gam.degree() + 1);
    std::vector<BigRational> pts;
    std::vector<UPoly> imgs;
    int degv = INT_MAX;
    for (long i = 1; i < static_cast<long>(4 * need) + 64; ++i) {
        BigRational t(i % 2 ? (i + 1) / 2 : -(i / 2));
        if (A.back()(t) == 0 || B.back()(t) == 0) continue;
        UPoly g = gcd(evalAt(A, t), evalAt(B, t));
        if (g.degree() > degv) continue;
        if (g.degree() == 0) return cg.primitive();
        if (g.degree() < degv) {
            degv = g.degree();
            pts.clear();
            imgs.clear();
        }
        pts.push_back(t);
        imgs.push_back(g * gam(t));
        if (pts.size() < need) continue;
        std::vector<UPoly> cs;
        for (int k = 0; k <= degv; ++k) {
            std::vector<BigRational> ys;
            for (const auto& im : imgs) ys.push_back(k <= im.degree() ? im.coeff(k) : BigRational(0));
            cs.push_back(interpolate(pts, ys));
        }
        UPoly cc = content(cs);
        std::vector<MultiPoly> mc;
        for (const auto& q : cs) mc.push_back(q.isZero() ? MultiPoly() : MultiPoly::fromUPoly(UPoly::divExact(q, cc), w));
        MultiPoly G = MultiPoly::fromCoefficients(v, mc);
        if (a.divideExact(G) && b.divideExact(G)) return (cg * G).primitive();
    }
    return std::nullopt;
}

MultiPoly gcdImpl(const MultiPoly& a, const MultiPoly& b) {
    if (a.isZero()) return b.primitive();
    if (b.isZero()) return a.primitive();
    if (a.isConstant() || b.isConstant()) return MultiPoly(1);
    auto u = unionVars(a.vars(), b.vars());
    if (u.size() == 1) {
        UPoly g = gcd(a.toUPoly(u[0]), b.toUPoly(u[0]));
        return MultiPoly::fromUPoly(g, u[0]).primitive();
    }
    const std::string& v = u[0];
    if (!a.hasVar(v)) return gcdImpl(a, gcdList(b.coefficientsIn(v)));
    if (!b.hasVar(v)) return gcdImpl(gcdList(a.coefficientsIn(v)), b);
    if (a == b) return a.primitive();
    if (u.size() == 2)
        if (auto g = bivariateGcd(a, b, u[1], u[0])) return *g;
    Coeffs A = a.coefficientsIn(v), B = b.coefficientsIn(v);
    MultiPoly ca = gcdList(A), cb = gcdList(B);
    MultiPoly g = gcdImpl(ca, cb);
    A = divideList(A, ca);
    B = divideList(B, cb);
    if (A.size() < B.size()) std::swap(A, B);
    while (true) {
        Coeffs r = prem(A, B);
        if (r.empty()) break;
        if (r.size() == 1) {
            B = {MultiPoly(1)};
            break;
        }
        A = std::move(B);
        B = primitiveList(r);
    }
    MultiPoly res = g * MultiPoly::fromCoefficients(v, primitiveList(B));
    return res.primitive();
}

}  // namespace

MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) { return gcdImpl(a, b); }

std::vector<long> shiftSet(const MultiPoly& p, const MultiPoly& q, const std::string& var) {
    std::vector<long> out;
    if (p.degree(var) <= 0 || q.degree(var) <= 0) return out;
    auto u = unionVars(p.vars(), q.vars());
    std::vector<std::string> params;
    for (const auto& v : u)
        if (v != var) params.push_back(v);
    if (params.empty()) return shiftSet(p.toUPoly(var), q.toUPoly(var));

    std::mt19937_64 rng(0x5eed1234ULL);
    std::uniform_int_distribution<long> dist(-997, 997);
    std::optional<std::set<long>> cand;
    for (int trial = 0; trial < 3; ++trial) {
        for (int attempt = 0; attempt < 50; ++attempt) {
            MultiPoly ps = p, qs = q;
            for (const auto& v : params) {
                long val = dist(rng);
                if (val == 0) val = 1009;
                ps = ps.evaluate(v, val);
                qs = qs.evaluate(v, val);
            }
            if (ps.degree(var) != p.degree(var) || qs.degree(var) != q.degree(var)) continue;
            auto s = shiftSet(ps.toUPoly(var), qs.toUPoly(var));
            std::set<long> ss(s.begin(), s.end());
            if (!cand) {
                cand = ss;
            } else {
                std::set<long> inter;
                std::set_intersection(cand->begin(), cand->end(), ss.begin(), ss.end(),
                                      std::inserter(inter, inter.begin()));
                cand = inter;
            }
            break;
        }
    }
    if (!cand) throw std::runtime_error("shiftSet: no admissible specialization");
    for (long h : *cand)
        if (gcd(p, q.shift(var, h)).degree(var) > 0) out.push_back(h);
    return out;
}

std::optional<long> dispersion(const MultiPoly& p, const MultiPoly& q, const std::string& var) {
    auto s = shiftSet(p, q, var);
    if (s.empty()) return std::nullopt;
    return s.back();
}

}  // namespace epschain
