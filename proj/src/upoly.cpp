#include "epschain/upoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace epschain {

namespace {
const BigRational kZero(0);

using ModPoly = std::vector<long long>;

long long modp(const BigInt& v, long long p) {
    return static_cast<long long>(mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p)));
}

long long powmod(long long b, long long e, long long p) {
    long long r = 1;
    b %= p;
    while (e > 0) {
        if (e & 1) r = static_cast<long long>((__int128)r * b % p);
        b = static_cast<long long>((__int128)b * b % p);
        e >>= 1;
    }
    return r;
}

void trimMod(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ModPoly remMod(ModPoly a, const ModPoly& b, long long p) {
    long long inv = powmod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
        long long f = static_cast<long long>((__int128)a.back() * inv % p);
        size_t off = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) {
            a[off + i] = (a[off + i] - static_cast<long long>((__int128)f * b[i] % p)) % p;
            if (a[off + i] < 0) a[off + i] += p;
        }
        trimMod(a);
    }
    return a;
}

int gcdDegreeMod(ModPoly a, ModPoly b, long long p) {
    trimMod(a);
    trimMod(b);
    while (!b.empty()) {
        ModPoly r = remMod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return static_cast<int>(a.size()) - 1;
}

BigInt evalInt(const std::vector<BigInt>& f, const BigInt& x) {
    BigInt r = 0;
    for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
    return r;
}

// integer coefficients of a primitive multiple
std::vector<BigInt> integerCoeffs(const UPoly& p) {
    UPoly q = p.primitive();
    std::vector<BigInt> out;
    for (const auto& c : q.coeffs()) out.push_back(c.get_num());
    return out;
}

// integer zeros of a square-free integer polynomial with f(0) != 0
std::vector<BigInt> integerRootsSquarefree(const std::vector<BigInt>& f) {
    std::vector<BigInt> out;
    int n = static_cast<int>(f.size()) - 1;
    if (n <= 0) return out;
    if (n == 1) {
        if (f[0] % f[1] == 0) out.push_back(-f[0] / f[1]);
        return out;
    }
    BigInt bound = abs(f[0]);
    BigInt cauchy = 0;
    for (int i = 0; i < n; ++i) {
        BigInt q = abs(f[i]) / abs(f[n]) + 1;
        if (q > cauchy) cauchy = q;
    }
    cauchy += 1;
    if (cauchy < bound) bound = cauchy;

    if (bound <= 64) {
        for (BigInt r = -bound; r <= bound; ++r)
            if (evalInt(f, r) == 0) out.push_back(r);
        return out;
    }

    std::vector<BigInt> df;
    for (int i = 1; i <= n; ++i) df.push_back(f[i] * i);

    BigInt prime = 1009;
    long long p = 0;
    for (int attempt = 0; attempt < 200; ++attempt) {
        long long cand = prime.get_si();
        ModPoly fm(f.size()), dm(df.size());
        for (size_t i = 0; i < f.size(); ++i) fm[i] = modp(f[i], cand);
        for (size_t i = 0; i < df.size(); ++i) dm[i] = modp(df[i], cand);
        if (fm.back() != 0 && gcdDegreeMod(fm, dm, cand) == 0) {
            p = cand;
            break;
        }
        mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
    }
    if (p == 0) throw std::runtime_error("integerRoots: no suitable prime");

    std::vector<long long> fm(f.size());
    for (size_t i = 0; i < f.size(); ++i) fm[i] = modp(f[i], p);
    std::vector<long long> modRoots;
    for (long long r = 0; r < p; ++r) {
        long long v = 0;
        for (size_t i = fm.size(); i-- > 0;) v = static_cast<long long>(((__int128)v * r + fm[i]) % p);
        if (v == 0) modRoots.push_back(r);
    }
    BigInt limit = 2 * bound + 1;
    for (long long r0 : modRoots) {
        BigInt r = static_cast<long>(r0), m = static_cast<long>(p);
        while (m <= limit) {
            BigInt m2 = m * m;
            BigInt fv = evalInt(f, r), dv = evalInt(df, r);
            BigInt inv;
            dv %= m2;
            if (dv < 0) dv += m2;
            if (mpz_invert(inv.get_mpz_t(), dv.get_mpz_t(), m2.get_mpz_t()) == 0) break;
            r = (r - fv * inv) % m2;
            if (r < 0) r += m2;
            m = m2;
        }
        BigInt c = r;
        if (c > m / 2) c -= m;
        if (abs(c) <= bound && evalInt(f, c) == 0) out.push_back(c);
    }
    return out;
}

}  // namespace

UPoly::UPoly(std::vector<BigRational> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly::UPoly(const BigRational& c) {
    if (c != 0) c_.push_back(c);
}

UPoly UPoly::x() { return UPoly(std::vector<BigRational>{0, 1}); }

UPoly UPoly::monomial(const BigRational& c, int deg) {
    if (c == 0) return UPoly();
    std::vector<BigRational> v(static_cast<size_t>(deg) + 1);
    v[static_cast<size_t>(deg)] = c;
    return UPoly(std::move(v));
}

UPoly UPoly::linear(const BigRational& a, const BigRational& b) {
    return UPoly(std::vector<BigRational>{b, a});
}

void UPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const BigRational& UPoly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return kZero;
    return c_[static_cast<size_t>(i)];
}

const BigRational& UPoly::lc() const { return c_.empty() ? kZero : c_.back(); }

int UPoly::valuation() const {
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) return static_cast<int>(i);
    return -1;
}

BigRational UPoly::operator()(const BigRational& v) const {
    BigRational r = 0;
    for (size_t i = c_.size(); i-- > 0;) r = r * v + c_[i];
    return r;
}

UPoly& UPoly::operator+=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.isZero() || b.isZero()) return UPoly();
    std::vector<BigRational> r(a.c_.size() + b.c_.size() - 1);
    BigRational t;
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) {
            t = a.c_[i] * b.c_[j];
            r[i + j] += t;
        }
    }
    return UPoly(std::move(r));
}

UPoly& UPoly::operator*=(const UPoly& o) {
    *this = *this * o;
    return *this;
}

UPoly& UPoly::operator*=(const BigRational& s) {
    if (s == 0) {
        c_.clear();
        return *this;
    }
    for (auto& c : c_) c *= s;
    return *this;
}

UPoly UPoly::operator-() const {
    UPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

UPoly UPoly::pow(unsigned e) const {
    UPoly r(1), b = *this;
    while (e > 0) {
        if (e & 1u) r *= b;
        e >>= 1u;
        if (e) b = b * b;
    }
    return r;
}

UPoly UPoly::derivative() const {
    if (c_.size() <= 1) return UPoly();
    std::vector<BigRational> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
    return UPoly(std::move(r));
}

UPoly UPoly::shift(const BigRational& a) const {
    if (a == 0 || c_.size() <= 1) return *this;
    // Horner-style Taylor shift
    std::vector<BigRational> r = c_;
    size_t n = r.size();
    for (size_t i = 0; i + 1 < n; ++i)
        for (size_t j = n - 1; j > i; --j) r[j - 1] += a * r[j];
    return UPoly(std::move(r));
}

UPoly UPoly::scaleArg(const BigRational& s) const {
    std::vector<BigRational> r = c_;
    BigRational f = 1;
    for (auto& c : r) {
        c *= f;
        f *= s;
    }
    return UPoly(std::move(r));
}

UPoly UPoly::compose(const UPoly& q) const {
    UPoly r;
    for (size_t i = c_.size(); i-- > 0;) r = r * q + UPoly(c_[i]);
    return r;
}

UPoly UPoly::monic() const {
    if (isZero()) return *this;
    UPoly r = *this;
    BigRational inv = 1 / lc();
    r *= inv;
    return r;
}

BigRational UPoly::content() const {
    if (isZero()) return 0;
    BigInt g = 0, l = 1;
    for (const auto& c : c_) {
        if (c == 0) continue;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    }
    BigRational r(g, l);
    r.canonicalize();
    if (lc() < 0) r = -r;
    return r;
}

UPoly UPoly::primitive() const {
    if (isZero()) return *this;
    UPoly r = *this;
    BigRational inv = 1 / content();
    r *= inv;
    return r;
}

std::pair<UPoly, UPoly> UPoly::divRem(const UPoly& a, const UPoly& b) {
    if (b.isZero()) throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree()) return {UPoly(), a};
    std::vector<BigRational> r = a.c_;
    std::vector<BigRational> q(a.c_.size() - b.c_.size() + 1);
    BigRational inv = 1 / b.lc();
    size_t db = b.c_.size() - 1;
    for (size_t i = r.size(); i-- > db;) {
        if (r[i] == 0) continue;
        BigRational f = r[i] * inv;
        q[i - db] = f;
        for (size_t j = 0; j <= db; ++j) r[i - db + j] -= f * b.c_[j];
    }
    r.resize(db);
    return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly UPoly::divExact(const UPoly& a, const UPoly& b) {
    auto [q, r] = divRem(a, b);
    if (!r.isZero()) throw std::domain_error("inexact polynomial division");
    return q;
}

std::string UPoly::toString(std::string_view var) const {
    if (isZero()) return "0";
    std::string out;
    for (size_t i = c_.size(); i-- > 0;) {
        const auto& c = c_[i];
        if (c == 0) continue;
        BigRational a = abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        bool unit = (a == 1);
        if (!unit || i == 0) out += a.get_str();
        if (i > 0) {
            if (!unit) out += "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

int UPoly::compare(const UPoly& a, const UPoly& b) {
    if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size() ? -1 : 1;
    for (size_t i = a.c_.size(); i-- > 0;) {
        int s = cmp(a.c_[i], b.c_[i]);
        if (s != 0) return s < 0 ? -1 : 1;
    }
    return 0;
}

UPoly gcd(const UPoly& a, const UPoly& b) {
    UPoly x = a, y = b;
    while (!y.isZero()) {
        UPoly r = UPoly::divRem(x, y).second;
        x = std::move(y);
        y = r.isZero() ? r : r.monic();
    }
    return x.monic();
}

UPoly lcm(const UPoly& a, const UPoly& b) {
    if (a.isZero() || b.isZero()) return UPoly();
    return UPoly::divExact(a * b, gcd(a, b)).monic();
}

std::vector<std::pair<UPoly, int>> squarefreeDecomposition(const UPoly& p) {
    // Yun's algorithm
    std::vector<std::pair<UPoly, int>> out;
    if (p.degree() <= 0) return out;
    UPoly f = p.monic();
    UPoly df = f.derivative();
    UPoly a = gcd(f, df);
    UPoly b = UPoly::divExact(f, a);
    UPoly c = UPoly::divExact(df, a);
    UPoly d = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        a = gcd(b, d);
        if (a.degree() > 0) out.emplace_back(a, i);
        b = UPoly::divExact(b, a);
        c = UPoly::divExact(d, a);
        d = c - b.derivative();
        ++i;
    }
    return out;
}

std::vector<long> integerRoots(const UPoly& p) {
    if (p.isZero()) throw std::domain_error("integerRoots of the zero polynomial");
    std::vector<long> out;
    if (p.degree() <= 0) return out;
    int v = p.valuation();
    std::vector<BigRational> rest(p.coeffs().begin() + v, p.coeffs().end());
    UPoly q(std::move(rest));
    if (v > 0) out.push_back(0);
    if (q.degree() > 0) {
        UPoly sf = UPoly::divExact(q, gcd(q, q.derivative()));
        for (const auto& r : integerRootsSquarefree(integerCoeffs(sf))) {
            if (!r.fits_slong_p()) continue;
            out.push_back(r.get_si());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<BigRational> rationalRoots(const UPoly& p) {
    if (p.isZero()) throw std::domain_error("rationalRoots of the zero polynomial");
    std::vector<BigRational> out;
    if (p.degree() <= 0) return out;
    int v = p.valuation();
    std::vector<BigRational> rest(p.coeffs().begin() + v, p.coeffs().end());
    UPoly q(std::move(rest));
    if (v > 0) out.emplace_back(0);
    if (q.degree() > 0) {
        UPoly sf = UPoly::divExact(q, gcd(q, q.derivative()));
        std::vector<BigInt> f = integerCoeffs(sf);
        int n = static_cast<int>(f.size()) - 1;
        BigInt an = f[static_cast<size_t>(n)];
        // g(y) = an^(n-1) f(y/an) is monic with integer coefficients
        std::vector<BigInt> g(f.size());
        BigInt pw = 1;
        for (int i = n; i >= 0; --i) {
            g[static_cast<size_t>(i)] = (i == n) ? BigInt(1) : f[static_cast<size_t>(i)] * pw;
            if (i < n) pw *= an;
        }
        for (const auto& y : integerRootsSquarefree(g)) {
            BigRational r(y, an);
            r.canonicalize();
            out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

BigRational resultant(const UPoly& a, const UPoly& b) {
    if (a.isZero() || b.isZero()) return 0;
    int m = a.degree(), n = b.degree();
    if (n == 0) return ratPow(b.lc(), m);
    if (m == 0) return ratPow(a.lc(), n);
    UPoly r = UPoly::divRem(a, b).second;
    if (r.isZero()) return 0;
    BigRational s = ((static_cast<long>(m) * n) % 2 == 1) ? -1 : 1;
    return s * ratPow(b.lc(), m - r.degree()) * resultant(b, r);
}

UPoly interpolate(const std::vector<BigRational>& xs, const std::vector<BigRational>& ys) {
    size_t n = xs.size();
    std::vector<BigRational> dd = ys;
    for (size_t j = 1; j < n; ++j)
        for (size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
            if (i == j) break;
        }
    UPoly r;
    for (size_t i = n; i-- > 0;) r = r * UPoly::linear(1, -xs[i]) + UPoly(dd[i]);
    return r;
}

std::vector<long> shiftSet(const UPoly& p, const UPoly& q) {
    std::vector<long> out;
    if (p.degree() <= 0 || q.degree() <= 0) return out;
    int D = p.degree() * q.degree();
    std::vector<BigRational> xs, ys;
    for (int h = 0; h <= D; ++h) {
        xs.emplace_back(h);
        ys.push_back(resultant(p, q.shift(h)));
    }
    UPoly R = interpolate(xs, ys);
    if (R.isZero()) throw std::logic_error("shiftSet: vanishing resultant");
    for (long h : integerRoots(R))
        if (h >= 0 && gcd(p, q.shift(h)).degree() > 0) out.push_back(h);
    return out;
}

std::optional<long> dispersion(const UPoly& p, const UPoly& q) {
    auto s = shiftSet(p, q);
    if (s.empty()) return std::nullopt;
    return s.back();
}

LinearFactorization factorLinear(const UPoly& p) {
    LinearFactorization out;
    out.unit = p.lc();
    for (auto& [f, mult] : squarefreeDecomposition(p)) {
        UPoly rest = f;
        for (const auto& r : rationalRoots(f)) {
            out.roots.emplace_back(r, mult);
            rest = UPoly::divExact(rest, UPoly::linear(1, -r));
        }
        if (rest.degree() > 0) out.rest.emplace_back(rest.monic(), mult);
    }
    std::sort(out.roots.begin(), out.roots.end());
    std::sort(out.rest.begin(), out.rest.end());
    return out;
}

}  // namespace epschain
