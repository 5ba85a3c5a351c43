#include "epschain/telescope.hpp"

#include "epschain/guess.hpp"
#include "epschain/linalg.hpp"

#include <algorithm>
#include <cctype>

namespace epschain {

using RF = RationalFunction;

namespace {

long integerConstant(const MultiPoly& p, const std::string& what) {
    if (!p.isConstant() || p.constantValue().get_den() != 1 || !p.constantValue().get_num().fits_slong_p())
        throw NotHyperexponentialError("nonrational ratio: " + what + " shifts by " + p.toString());
    return p.constantValue().get_num().get_si();
}

// (x + d)! / x!
RF factorialRatio(const MultiPoly& x, long d) {
    RF r(1);
    for (long i = 1; i <= d; ++i) r *= RF(x + MultiPoly(i));
    for (long i = 0; i < -d; ++i) r /= RF(x - MultiPoly(i));
    return r;
}

RF factorShiftRatio(const TermFactor& f, const std::string& v) {
    RF r(1);
    switch (f.kind) {
        case TermFactor::Kind::Rational:
            if (f.value.isZero()) throw std::invalid_argument("zero factor in a hypergeometric term");
            r = f.value.shift(v, 1) / f.value;
            break;
        case TermFactor::Kind::Binomial: {
            long da = integerConstant(f.a.shift(v, 1) - f.a, "binomial argument");
            long db = integerConstant(f.b.shift(v, 1) - f.b, "binomial argument");
            r = factorialRatio(f.a, da) / (factorialRatio(f.b, db) * factorialRatio(f.a - f.b, da - db));
            break;
        }
        case TermFactor::Kind::Factorial:
            r = factorialRatio(f.a, integerConstant(f.a.shift(v, 1) - f.a, "factorial argument"));
            break;
        case TermFactor::Kind::Power:
            if (f.value.hasVar(v))
                throw NotHyperexponentialError("power with base and exponent depending on " + v);
            r = f.value.pow(static_cast<int>(integerConstant(f.a.shift(v, 1) - f.a, "exponent")));
            break;
    }
    return r.pow(f.exponent);
}

RF factorDerivativeRatio(const TermFactor& f, const std::string& x) {
    switch (f.kind) {
        case TermFactor::Kind::Rational:
            if (f.value.isZero()) throw std::invalid_argument("zero factor in a hyperexponential term");
            return f.value.derivative(x) / f.value * RF(f.exponent);
        case TermFactor::Kind::Binomial:
        case TermFactor::Kind::Factorial:
            if (f.a.hasVar(x) || f.b.hasVar(x))
                throw NotHyperexponentialError("binomial or factorial of the continuous variable " + x);
            return RF(0);
        case TermFactor::Kind::Power:
            if (f.a.hasVar(x)) throw NotHyperexponentialError("exponent depends on " + x);
            return RF(f.a) * f.value.derivative(x) / f.value * RF(f.exponent);
    }
    return RF(0);
}

bool factorHasVar(const TermFactor& f, const std::string& v) {
    return f.value.hasVar(v) || f.a.hasVar(v) || f.b.hasVar(v);
}

std::optional<long> integerAt(const MultiPoly& p, const std::map<std::string, BigRational>& pt) {
    BigRational v = p.evaluateAll(pt);
    if (v.get_den() != 1 || !v.get_num().fits_slong_p()) return std::nullopt;
    return v.get_num().get_si();
}

// ---------------------------------------------------------------- parsing

std::string trim(std::string_view s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::string stripParens(std::string s) {
    s = trim(s);
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        int depth = 0;
        bool outer = true;
        for (size_t i = 0; i + 1 < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')') --depth;
            if (depth == 0) {
                outer = false;
                break;
            }
        }
        if (!outer) break;
        s = trim(s.substr(1, s.size() - 2));
    }
    return s;
}

std::vector<std::string> splitTopLevel(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    size_t start = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == sep && depth == 0) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    out.push_back(s.substr(start));
    return out;
}

bool hasBinaryAddition(const std::string& s) {
    int depth = 0;
    char prev = 0;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && (c == '+' || c == '-') && prev &&
            (std::isalnum(static_cast<unsigned char>(prev)) || prev == ')' || prev == '!'))
            return true;
        prev = c;
    }
    return false;
}

TermFactor parseBase(const std::string& text) {
    std::string b = trim(text);
    TermFactor f;
    if (!b.empty() && b.back() == '!') {
        f.kind = TermFactor::Kind::Factorial;
        f.a = parsePolynomial(stripParens(b.substr(0, b.size() - 1)));
        return f;
    }
    auto call = [&](const std::string& name) {
        return b.rfind(name + "(", 0) == 0 && b.back() == ')' &&
               stripParens(b.substr(name.size())) == trim(b.substr(name.size() + 1, b.size() - name.size() - 2));
    };
    if (call("binom")) {
        auto args = splitTopLevel(b.substr(6, b.size() - 7), ',');
        if (args.size() != 2) throw std::invalid_argument("binom expects two arguments: " + b);
        f.kind = TermFactor::Kind::Binomial;
        f.a = parsePolynomial(args[0]);
        f.b = parsePolynomial(args[1]);
        return f;
    }
    if (call("fact")) {
        f.kind = TermFactor::Kind::Factorial;
        f.a = parsePolynomial(b.substr(5, b.size() - 6));
        return f;
    }
    f.value = parseRationalFunction(b);
    return f;
}

std::vector<TermFactor> parseFactors(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty term");
    std::vector<TermFactor> out;
    bool closedForm = s.find("binom") != std::string::npos || s.find("fact") != std::string::npos ||
                      s.find('!') != std::string::npos;
    if (!closedForm && hasBinaryAddition(s)) {
        TermFactor f;
        f.value = parseRationalFunction(s);
        out.push_back(f);
        return out;
    }
    if (s.front() == '-') {
        TermFactor f;
        f.value = RF(-1);
        out.push_back(f);
        s = trim(s.substr(1));
    }
    // split on top-level * and /
    int depth = 0;
    size_t start = 0;
    bool divide = false;
    auto flush = [&](size_t end, bool nextDivide) {
        std::string chunk = trim(s.substr(start, end - start));
        if (chunk.empty()) throw std::invalid_argument("malformed term: " + text);
        int sign = divide ? -1 : 1;
        // exponent at the last top-level '^'
        int d = 0;
        size_t caret = std::string::npos;
        for (size_t i = 0; i < chunk.size(); ++i) {
            if (chunk[i] == '(') ++d;
            if (chunk[i] == ')') --d;
            if (chunk[i] == '^' && d == 0) caret = i;
        }
        TermFactor f = parseBase(caret == std::string::npos ? chunk : chunk.substr(0, caret));
        f.exponent = sign;
        if (caret != std::string::npos) {
            MultiPoly e = parsePolynomial(stripParens(chunk.substr(caret + 1)));
            if (e.isConstant() && e.constantValue().get_den() == 1) {
                f.exponent = sign * static_cast<int>(e.constantValue().get_num().get_si());
            } else {
                if (f.kind != TermFactor::Kind::Rational)
                    throw std::invalid_argument("symbolic exponent on a binomial or factorial: " + chunk);
                f.kind = TermFactor::Kind::Power;
                f.a = e * BigRational(sign);
                f.exponent = 1;
            }
        }
        out.push_back(f);
        start = end + 1;
        divide = nextDivide;
    };
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (depth == 0 && (s[i] == '*' || s[i] == '/')) flush(i, s[i] == '/');
    }
    flush(s.size(), false);
    return out;
}

// ------------------------------------------------------- Gosper machinery

struct GForm {
    MultiPoly a, b, c;
};

GForm gosperFormMulti(const RF& r, const std::string& k) {
    GForm f{r.num(), r.den(), MultiPoly(1)};
    for (long h : shiftSet(f.a, f.b, k)) {
        if (h == 0) continue;
        MultiPoly g = gcd(f.a, f.b.shift(k, h));
        if (g.degree(k) < 1) continue;
        f.a = *f.a.divideExact(g);
        f.b = *f.b.divideExact(g.shift(k, -h));
        for (long i = 1; i <= h; ++i) f.c *= g.shift(k, -i);
    }
    return f;
}

int degIn(const MultiPoly& p, const std::string& v) { return p.isZero() ? -1 : p.degree(v); }

long degreeBound(const MultiPoly& a, const MultiPoly& bs, long rhsDeg, const std::string& k) {
    MultiPoly minus = a - bs, plus = a + bs;
    int dm = degIn(minus, k), dp = degIn(plus, k);
    if (dm >= dp) return rhsDeg - dm;
    long d = rhsDeg - dp + 1;
    if (dp >= 1) {
        RF cand = RF(minus.coefficient(k, dp - 1) * BigRational(-2)) / RF(plus.coefficient(k, dp));
        if (cand.isConstant()) {
            BigRational c = cand.constantValue();
            if (c.get_den() == 1 && c >= 0 && c.get_num().fits_slong_p()) d = std::max(d, c.get_num().get_si());
        }
    }
    return d;
}

// polynomial columns -> matrix of k-coefficients
Matrix<RF> coefficientMatrix(const std::vector<MultiPoly>& cols, const std::string& k) {
    int rows = 0;
    std::vector<std::vector<MultiPoly>> cs;
    for (const auto& c : cols) {
        cs.push_back(c.isZero() ? std::vector<MultiPoly>{} : c.coefficientsIn(k));
        rows = std::max(rows, static_cast<int>(cs.back().size()));
    }
    Matrix<RF> m(static_cast<size_t>(rows), std::vector<RF>(cols.size(), RF(0)));
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t r = 0; r < cs[j].size(); ++r) m[r][j] = RF(cs[j][r]);
    return m;
}

MultiPoly lcmPoly(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly g = gcd(a, b);
    return *(a * b).divideExact(g);
}

// scale a solution so that the entries at [from, to) are content-free
// polynomials; returns the scaling factor
RF clearToPolynomials(std::vector<RF>& v, size_t from, size_t to) {
    MultiPoly den(1);
    for (size_t i = from; i < to; ++i) den = lcmPoly(den, v[i].den());
    MultiPoly g;
    for (size_t i = from; i < to; ++i) g = gcd(g, *(v[i].num() * den).divideExact(v[i].den()));
    RF s = RF(den) / RF(g);
    for (auto& e : v) e *= s;
    // sign: leading coefficient of the last nonzero entry positive
    for (size_t i = to; i-- > from;) {
        if (v[i].isZero()) continue;
        if (v[i].num().leadingCoefficient() < 0) {
            for (auto& e : v) e = -e;
            s = -s;
        }
        break;
    }
    return s;
}

// rho_i = f(n+i)/f(n) = P_i / Q
void shiftQuotients(const RF& rn, int d, const std::string& n, std::vector<MultiPoly>& P, MultiPoly& Q) {
    std::vector<RF> rho{RF(1)};
    for (int i = 1; i <= d; ++i) rho.push_back(rho.back() * rn.shift(n, i - 1));
    Q = MultiPoly(1);
    for (const auto& r : rho) Q = lcmPoly(Q, r.den());
    P.clear();
    for (const auto& r : rho) P.push_back(*(r.num() * Q).divideExact(r.den()));
}

// substitute a polynomial for v in a rational function; nullopt if the
// numerator or denominator vanishes identically
std::optional<RF> substituteRegular(const RF& r, const std::string& v, const MultiPoly& s) {
    MultiPoly num = r.num().substitute(v, s), den = r.den().substitute(v, s);
    if (num.isZero() || den.isZero()) return std::nullopt;
    return RF(num, den);
}

std::map<std::string, BigRational> point2(const std::string& n, long nv, const std::string& k, long kv) {
    return {{n, BigRational(nv)}, {k, BigRational(kv)}};
}

std::optional<BigRational> evalRF(const RF& r, const std::map<std::string, BigRational>& pt) {
    if (r.den().evaluateAll(pt) == 0) return std::nullopt;
    return r.evaluateAll(pt);
}

}  // namespace

// ------------------------------------------------------------------ terms

HypergeometricTerm HypergeometricTerm::fromFactors(std::vector<TermFactor> factors,
                                                   const std::vector<std::string>& discrete,
                                                   const std::vector<std::string>& continuous) {
    HypergeometricTerm t;
    for (const auto& v : discrete) {
        RF r(1);
        for (const auto& f : factors) r *= factorShiftRatio(f, v);
        t.shiftRatios[v] = r;
        t.basePoint[v] = 0;
    }
    for (const auto& x : continuous) {
        RF w(0);
        for (const auto& f : factors) w += factorDerivativeRatio(f, x);
        t.derivativeRatios[x] = w;
    }
    t.factors = std::move(factors);
    if (continuous.empty()) {
        try {
            std::map<std::string, long> origin;
            for (const auto& v : discrete) origin[v] = 0;
            if (auto v = t.value(origin)) t.baseValue = *v;
        } catch (const std::exception&) {
            // symbolic parameters: no numeric base value
        }
    }
    return t;
}

HypergeometricTerm HypergeometricTerm::parse(std::string_view text, const std::vector<std::string>& discrete,
                                             const std::vector<std::string>& continuous) {
    return fromFactors(parseFactors(std::string(text)), discrete, continuous);
}

const RationalFunction& HypergeometricTerm::ratio(const std::string& v) const {
    auto it = shiftRatios.find(v);
    if (it == shiftRatios.end()) throw std::invalid_argument("term has no shift ratio in " + v);
    return it->second;
}

std::optional<BigRational> HypergeometricTerm::value(const std::map<std::string, long>& point) const {
    std::map<std::string, BigRational> pt;
    for (const auto& [v, x] : point) pt[v] = x;
    auto requireNumeric = [&](const std::vector<std::string>& vars) {
        for (const auto& v : vars)
            if (!pt.count(v)) throw std::invalid_argument("term value needs a value for " + v);
    };
    if (!factors.empty()) {
        BigRational acc = 1;
        long poles = 0;  // order of the pole (negative: zero)
        for (const auto& f : factors) {
            switch (f.kind) {
                case TermFactor::Kind::Rational: {
                    requireNumeric(f.value.vars());
                    BigRational num = f.value.num().evaluateAll(pt), den = f.value.den().evaluateAll(pt);
                    if (num == 0) {
                        poles -= f.exponent;
                    } else if (den == 0) {
                        poles += f.exponent;
                    } else {
                        acc *= ratPow(num / den, f.exponent);
                    }
                    break;
                }
                case TermFactor::Kind::Binomial: {
                    requireNumeric(unionVars(f.a.vars(), f.b.vars()));
                    auto a = integerAt(f.a, pt), b = integerAt(f.b, pt);
                    if (!a || !b) throw std::domain_error("binomial at a non-integer point");
                    BigRational v(binomial(*a, *b));
                    if (v == 0)
                        poles -= f.exponent;
                    else
                        acc *= ratPow(v, f.exponent);
                    break;
                }
                case TermFactor::Kind::Factorial: {
                    requireNumeric(f.a.vars());
                    auto a = integerAt(f.a, pt);
                    if (!a) throw std::domain_error("factorial at a non-integer point");
                    if (*a < 0)
                        poles += f.exponent;
                    else
                        acc *= ratPow(BigRational(factorial(static_cast<unsigned long>(*a))), f.exponent);
                    break;
                }
                case TermFactor::Kind::Power: {
                    requireNumeric(unionVars(f.value.vars(), f.a.vars()));
                    auto e = integerAt(f.a, pt);
                    if (!e) throw std::domain_error("power with non-integer exponent");
                    BigRational num = f.value.num().evaluateAll(pt), den = f.value.den().evaluateAll(pt);
                    if (den == 0) throw std::domain_error("power base has a pole");
                    BigRational b = num / den;
                    long ee = *e * f.exponent;
                    if (b == 0 && ee != 0)
                        poles -= ee;
                    else
                        acc *= ratPow(b, ee);
                    break;
                }
            }
        }
        if (poles > 0) return std::nullopt;
        if (poles < 0) return BigRational(0);
        return acc;
    }
    // walk the shift ratios from the base point
    BigRational acc = baseValue;
    std::map<std::string, BigRational> cur;
    for (const auto& [v, r] : shiftRatios) {
        auto it = basePoint.find(v);
        cur[v] = it == basePoint.end() ? 0 : it->second;
    }
    std::vector<std::string> order;
    for (const auto& [v, r] : shiftRatios) order.push_back(v);
    std::sort(order.begin(), order.end(), variableLess);
    for (const auto& v : order) {
        const RF& r = shiftRatios.at(v);
        auto target = point.find(v);
        if (target == point.end()) throw std::invalid_argument("term value needs a value for " + v);
        long from = cur[v].get_num().get_si();
        for (long i = from; i < target->second; ++i) {
            cur[v] = i;
            auto q = evalRF(r, cur);
            if (!q) return std::nullopt;
            acc *= *q;
        }
        for (long i = from; i > target->second; --i) {
            cur[v] = i - 1;
            auto q = evalRF(r, cur);
            if (!q || *q == 0) return std::nullopt;
            acc /= *q;
        }
        cur[v] = target->second;
    }
    return acc;
}

bool HypergeometricTerm::compatible() const {
    for (const auto& [v, rv] : shiftRatios) {
        for (const auto& [w, rw] : shiftRatios)
            if (v < w && !(rv.shift(w, 1) * rw == rw.shift(v, 1) * rv)) return false;
        for (const auto& [x, wx] : derivativeRatios)
            if (!(wx.shift(v, 1) == rv.derivative(x) / rv + wx)) return false;
    }
    for (const auto& [x, wx] : derivativeRatios)
        for (const auto& [y, wy] : derivativeRatios)
            if (x < y && !(wx.derivative(y) == wy.derivative(x))) return false;
    return true;
}

// ----------------------------------------------------------------- Gosper

std::optional<RationalFunction> gosper(const HypergeometricTerm& t, const std::string& k) {
    const RF& rk = t.ratio(k);
    if (rk.isZero()) throw std::invalid_argument("gosper: zero shift ratio");
    GForm f = gosperFormMulti(rk, k);
    MultiPoly bs = f.b.shift(k, -1);
    long D = degreeBound(f.a, bs, degIn(f.c, k), k);
    if (D < 0) return std::nullopt;
    std::vector<MultiPoly> cols;
    MultiPoly kv = MultiPoly::variable(k), xp(1), xsp(1), step = kv + MultiPoly(1);
    for (long j = 0; j <= D; ++j) {
        cols.push_back(f.a * xsp - bs * xp);
        xp *= kv;
        xsp *= step;
    }
    cols.push_back(-f.c);
    auto basis = nullspace(coefficientMatrix(cols, k), cols.size());
    for (auto& v : basis) {
        if (v.back().isZero()) continue;
        RF s = RF(1) / v.back();
        RF x(0);
        RF kp(1);
        for (long j = 0; j <= D; ++j) {
            x += v[static_cast<size_t>(j)] * s * kp;
            kp *= RF(kv);
        }
        return RF(bs) * x / RF(f.c);
    }
    return std::nullopt;
}

// -------------------------------------------------------------- Zeilberger

std::optional<TelescopeCertificate> zeilbergerAtOrder(const HypergeometricTerm& t, int d, const std::string& n,
                                                      const std::string& k) {
    const RF& rk = t.ratio(k);
    const RF& rn = t.ratio(n);
    if (rk.isZero() || rn.isZero()) throw std::invalid_argument("zeilberger: zero shift ratio");
    std::vector<MultiPoly> P;
    MultiPoly Q;
    shiftQuotients(rn, d, n, P, Q);
    GForm f = gosperFormMulti(rk * RF(Q) / RF(Q.shift(k, 1)), k);
    MultiPoly bs = f.b.shift(k, -1);
    int pdeg = -1;
    for (const auto& p : P) pdeg = std::max(pdeg, degIn(p, k));
    long D = std::max(-1L, degreeBound(f.a, bs, degIn(f.c, k) + pdeg, k));
    std::vector<MultiPoly> cols;
    MultiPoly kv = MultiPoly::variable(k), xp(1), xsp(1), step = kv + MultiPoly(1);
    for (long j = 0; j <= D; ++j) {
        cols.push_back(f.a * xsp - bs * xp);
        xp *= kv;
        xsp *= step;
    }
    size_t nx = cols.size();
    for (const auto& p : P) cols.push_back(-(f.c * p));
    auto basis = nullspace(coefficientMatrix(cols, k), cols.size());
    for (auto& v : basis) {
        if (v.back().isZero()) continue;
        clearToPolynomials(v, nx, v.size());
        TelescopeCertificate c;
        c.kind = TelescopeCertificate::Kind::Discrete;
        c.outer = n;
        c.inner = k;
        for (size_t i = nx; i < v.size(); ++i) c.coeffs.push_back(v[i].num());
        RF x(0), kp(1);
        for (size_t j = 0; j < nx; ++j) {
            x += v[j] * kp;
            kp *= RF(kv);
        }
        c.certificate = RF(bs) * x / RF(f.c * Q);
        return c;
    }
    return std::nullopt;
}

TelescopeCertificate zeilberger(const HypergeometricTerm& t, int maxOrder, const std::string& n,
                                const std::string& k) {
    for (int d = 1; d <= maxOrder; ++d)
        if (auto c = zeilbergerAtOrder(t, d, n, k)) return *c;
    throw NoCertificateError(maxOrder);
}

// ---------------------------------------------------- Almkvist-Zeilberger

namespace {

// multiplicity of x0 as a zero of p in x
int orderAt(MultiPoly p, const std::string& x, const BigRational& x0) {
    if (p.isZero()) return 1 << 20;
    MultiPoly lin = MultiPoly::variable(x) - MultiPoly(x0);
    int m = 0;
    while (p.evaluate(x, x0).isZero()) {
        p = *p.divideExact(lin);
        ++m;
    }
    return m;
}

// value of R f at x0 when it is finite, zero when it vanishes; updates validFrom
RF boundaryValue(const HypergeometricTerm& t, const RF& R, const std::string& x, const BigRational& x0,
                 const std::string& n, long& validFrom) {
    if (R.isZero()) return RF(0);
    const RF& w = t.derivativeRatios.at(x);
    int wpole = orderAt(w.den(), x, x0) - orderAt(w.num(), x, x0);
    if (wpole > 1) throw NotHyperexponentialError("irregular singularity of the integrand at the boundary");
    RF residue(0);
    if (wpole == 1) {
        MultiPoly lin = MultiPoly::variable(x) - MultiPoly(x0);
        residue = RF(w.num(), *w.den().divideExact(lin)).evaluate(x, x0);
    }
    RF expo = RF(orderAt(R.num(), x, x0) - orderAt(R.den(), x, x0)) + residue;
    if (!expo.isPolynomial()) throw NotHyperexponentialError("boundary exponent is not polynomial");
    MultiPoly e = expo.num() * (BigRational(1) / expo.den().constantValue());
    bool onlyN = true;
    for (const auto& v : e.vars())
        if (v != n) onlyN = false;
    if (!onlyN) return RF(0);  // continued analytically from the convergent region
    if (e.isConstant()) {
        BigRational c = e.constantValue();
        if (c > 0) return RF(0);
        if (c < 0) throw std::domain_error("integral diverges at x = " + toString(x0));
    } else {
        if (e.degree(n) != 1 || e.coefficient(n, 1).constantValue() < 0)
            throw std::domain_error("integral diverges at x = " + toString(x0) + " for large n");
        BigRational root = -e.coefficient(n, 0).constantValue() / e.coefficient(n, 1).constantValue();
        validFrom = std::max(validFrom, static_cast<long>(floorQ(root).get_si()) + 1);
        return RF(0);
    }
    // finite value: needs the closed form
    if (t.factors.empty()) throw NotHyperexponentialError("finite boundary term needs the closed form of the term");
    RF acc = R;
    for (const auto& f : t.factors) {
        if (f.kind == TermFactor::Kind::Rational) {
            acc *= f.value.pow(f.exponent);
        } else if (f.kind == TermFactor::Kind::Power) {
            if (!f.value.hasVar(x)) throw NotHyperexponentialError("boundary term is not rational in the parameters");
            RF b = f.value.evaluate(x, x0);
            if (b == RF(1)) continue;
            if (!f.a.isConstant()) throw NotHyperexponentialError("boundary term is not rational in the parameters");
            acc *= f.value.pow(static_cast<int>(integerConstant(f.a, "exponent")));
        } else {
            throw NotHyperexponentialError("boundary term is not rational in the parameters");
        }
    }
    return acc.evaluate(x, x0);
}

}  // namespace

std::optional<TelescopeCertificate> almkvistZeilbergerAtOrder(const HypergeometricTerm& t, int d,
                                                              const std::string& n, const std::string& x) {
    auto wit = t.derivativeRatios.find(x);
    if (wit == t.derivativeRatios.end()) throw std::invalid_argument("term has no derivative ratio in " + x);
    const RF& w = wit->second;
    const RF& rn = t.ratio(n);
    if (rn.isZero()) throw std::invalid_argument("almkvistZeilberger: zero shift ratio");
    std::vector<MultiPoly> P;
    MultiPoly Q;
    shiftQuotients(rn, d, n, P, Q);
    MultiPoly Dw = w.den(), Wn = w.num();
    int pdeg = -1;
    for (const auto& p : P) pdeg = std::max(pdeg, degIn(p, x));
    for (int m = 1; m <= 3; ++m) {
        MultiPoly S = Dw.pow(static_cast<unsigned>(m)), dS = S.derivative(x);
        long Nd = pdeg + degIn(S, x) + degIn(Dw, x) + 2;
        // Q Dw (N' S - N S') + Q N Wn S - (sum lambda_i P_i) S^2 Dw = 0
        std::vector<MultiPoly> cols;
        MultiPoly xv = MultiPoly::variable(x), xp(1);
        for (long j = 0; j <= Nd; ++j) {
            MultiPoly dxp = xp.derivative(x);
            cols.push_back(Q * Dw * (dxp * S - xp * dS) + Q * xp * Wn * S);
            xp *= xv;
        }
        size_t nx = cols.size();
        MultiPoly S2D = S * S * Dw;
        for (const auto& p : P) cols.push_back(-(p * S2D));
        auto basis = nullspace(coefficientMatrix(cols, x), cols.size());
        auto build = [&](std::vector<RF> v) {
            clearToPolynomials(v, nx, v.size());
            TelescopeCertificate c;
            c.kind = TelescopeCertificate::Kind::Continuous;
            c.outer = n;
            c.inner = x;
            for (size_t i = nx; i < v.size(); ++i) c.coeffs.push_back(v[i].num());
            RF N(0), xpow(1);
            for (size_t j = 0; j < nx; ++j) {
                N += v[j] * xpow;
                xpow *= RF(xv);
            }
            c.certificate = N / RF(S);
            c.boundary = boundaryValue(t, c.certificate, x, 1, n, c.validFrom) -
                         boundaryValue(t, c.certificate, x, 0, n, c.validFrom);
            return c;
        };
        auto certificateOf = [&](const std::vector<RF>& v) {
            RF N(0), xpow(1);
            for (size_t j = 0; j < nx; ++j) {
                N += v[j] * xpow;
                xpow *= RF(xv);
            }
            return N / RF(S);
        };
        // prefer a combination whose boundary terms vanish at both ends
        std::vector<size_t> usable;
        Matrix<RF> ends(2);
        for (size_t j = 0; j < basis.size(); ++j) {
            try {
                long vf = 0;
                RF R = certificateOf(basis[j]);
                RF b1 = boundaryValue(t, R, x, 1, n, vf), b0 = boundaryValue(t, R, x, 0, n, vf);
                ends[0].push_back(b1);
                ends[1].push_back(b0);
                usable.push_back(j);
            } catch (const std::exception&) {
            }
        }
        for (const auto& comb : nullspace(ends, usable.size())) {
            std::vector<RF> v(cols.size(), RF(0));
            for (size_t j = 0; j < usable.size(); ++j)
                if (!comb[j].isZero())
                    for (size_t i = 0; i < v.size(); ++i) v[i] += comb[j] * basis[usable[j]][i];
            if (v.back().isZero()) continue;
            return build(v);
        }
        for (auto& v : basis)
            if (!v.back().isZero()) return build(v);
    }
    return std::nullopt;
}

TelescopeCertificate almkvistZeilberger(const HypergeometricTerm& t, int maxOrder, const std::string& n,
                                        const std::string& x) {
    for (int d = 1; d <= maxOrder; ++d)
        if (auto c = almkvistZeilbergerAtOrder(t, d, n, x)) return *c;
    throw NoCertificateError(maxOrder);
}

namespace {

struct SeparatedIntegrand {
    std::vector<HypergeometricTerm> parts;  // one per integration variable, may lack factors
    std::vector<TermFactor> pure;
};

// p = c * prod_i p_i(x_i) with parameter-only c
std::optional<std::vector<MultiPoly>> splitPoly(const MultiPoly& p, const std::vector<std::string>& xs) {
    auto at1 = [&](MultiPoly q, const std::string& keep) {
        for (const auto& x : xs)
            if (x != keep) q = q.evaluate(x, 1);
        return q;
    };
    MultiPoly c = at1(p, "");
    if (c.isZero()) return std::nullopt;
    std::vector<MultiPoly> parts;
    MultiPoly prod(1);
    for (const auto& x : xs) {
        parts.push_back(at1(p, x));
        prod *= parts.back();
    }
    MultiPoly cs(1);
    for (size_t i = 1; i < xs.size(); ++i) cs *= c;
    if (!(p * cs == prod)) return std::nullopt;
    parts.push_back(cs);  // divided out below
    return parts;
}

std::optional<std::vector<RF>> splitBase(const RF& base, const std::vector<std::string>& xs) {
    int involved = 0;
    for (const auto& x : xs)
        if (base.hasVar(x)) ++involved;
    if (involved < 2) return std::nullopt;
    auto num = splitPoly(base.num(), xs), den = splitPoly(base.den(), xs);
    if (!num || !den) return std::nullopt;
    std::vector<RF> out;
    for (size_t i = 0; i < xs.size(); ++i) out.push_back(RF((*num)[i], (*den)[i]));
    out.push_back(RF(den->back(), num->back()));
    return out;
}

SeparatedIntegrand separate(const HypergeometricTerm& t, const std::vector<std::string>& xs, const std::string& n) {
    if (t.factors.empty())
        throw NotHyperexponentialError("iterated integration needs the closed form of the integrand");
    std::vector<std::vector<TermFactor>> groups(xs.size());
    SeparatedIntegrand s;
    std::vector<TermFactor> factors;
    for (const auto& f : t.factors) {
        auto parts = f.kind == TermFactor::Kind::Power ? splitBase(f.value, xs) : std::nullopt;
        if (!parts) {
            factors.push_back(f);
            continue;
        }
        for (const auto& b : *parts) {
            TermFactor g = f;
            g.value = b;
            factors.push_back(g);
        }
    }
    for (const auto& f : factors) {
        int owner = -1;
        for (size_t i = 0; i < xs.size(); ++i) {
            if (!factorHasVar(f, xs[i])) continue;
            if (owner >= 0)
                throw NotHyperexponentialError("intermediate integral is not hyperexponential: factor couples " +
                                               xs[static_cast<size_t>(owner)] + " and " + xs[i]);
            owner = static_cast<int>(i);
        }
        if (owner < 0)
            s.pure.push_back(f);
        else
            groups[static_cast<size_t>(owner)].push_back(f);
    }
    for (size_t i = 0; i < xs.size(); ++i) s.parts.push_back(HypergeometricTerm::fromFactors(groups[i], {n}, {xs[i]}));
    return s;
}

}  // namespace

TelescopeCertificate iterateAZ(const HypergeometricTerm& t, const std::vector<std::string>& xs, int maxOrder,
                               const std::string& n) {
    if (xs.empty()) throw std::invalid_argument("iterateAZ: no integration variables");
    if (xs.size() == 1) return almkvistZeilberger(t, maxOrder, n, xs.front());
    SeparatedIntegrand s = separate(t, xs, n);
    std::vector<TelescopeCertificate> parts;
    for (size_t i = 0; i < xs.size(); ++i) {
        parts.push_back(almkvistZeilberger(s.parts[i], maxOrder, n, xs[i]));
        if (!parts.back().boundary.isZero())
            throw NotHyperexponentialError("nonvanishing boundary term while eliminating " + xs[i]);
    }
    size_t main = 0;
    int higher = 0;
    for (size_t i = 0; i < parts.size(); ++i)
        if (parts[i].order() > 1) {
            main = i;
            ++higher;
        }
    if (higher > 1) throw NotHyperexponentialError("intermediate integral is not hyperexponential");
    // F = H * J with J the main integral and H hypergeometric in n
    RF h(1);
    for (size_t i = 0; i < parts.size(); ++i)
        if (i != main) h *= -RF(parts[i].coeffs[0]) / RF(parts[i].coeffs[1]);
    if (!s.pure.empty()) h *= HypergeometricTerm::fromFactors(s.pure, {n}).ratio(n);
    const auto& a = parts[main].coeffs;
    std::vector<RF> c;
    RF denom(1);
    for (size_t i = 0; i < a.size(); ++i) {
        c.push_back(RF(a[i]) / denom);
        denom *= h.shift(n, static_cast<long>(i));
    }
    clearToPolynomials(c, 0, c.size());
    TelescopeCertificate out;
    out.kind = TelescopeCertificate::Kind::Continuous;
    out.outer = n;
    out.inner = xs[main];
    for (const auto& e : c) out.coeffs.push_back(e.num());
    out.certificate = parts[main].certificate;
    for (const auto& p : parts) out.validFrom = std::max(out.validFrom, p.validFrom);
    out.parts = std::move(parts);
    return out;
}

bool checkCertificate(const HypergeometricTerm& t, const TelescopeCertificate& c) {
    if (!c.parts.empty()) {
        std::vector<std::string> xs;
        for (const auto& p : c.parts) xs.push_back(p.inner);
        SeparatedIntegrand s = separate(t, xs, c.outer);
        for (size_t i = 0; i < xs.size(); ++i)
            if (!checkCertificate(s.parts[i], c.parts[i])) return false;
        return true;
    }
    if (c.coeffs.empty() || c.coeffs.back().isZero()) return false;
    const RF& rn = t.ratio(c.outer);
    RF lhs(0), rho(1);
    for (size_t i = 0; i < c.coeffs.size(); ++i) {
        lhs += RF(c.coeffs[i]) * rho;
        rho *= rn.shift(c.outer, static_cast<long>(i));
    }
    const RF& R = c.certificate;
    if (c.kind == TelescopeCertificate::Kind::Discrete)
        return lhs == R.shift(c.inner, 1) * t.ratio(c.inner) - R;
    return lhs == R.derivative(c.inner) + R * t.derivativeRatios.at(c.inner);
}

// -------------------------------------------------------- definite sums

BigRational sumValue(const DefiniteSum& s, long n) {
    std::map<std::string, BigRational> pt{{s.n, BigRational(n)}};
    auto lo = integerAt(s.lower, pt), hi = integerAt(s.upper, pt);
    if (!lo || !hi) throw std::domain_error("summation bound is not an integer");
    long a = *lo, b = *hi, sign = 1;
    if (b < a - 1) {
        std::swap(a, b);
        ++a;
        --b;
        sign = -1;
    }
    BigRational acc = 0;
    for (long k = a; k <= b; ++k) {
        auto v = s.term.value({{s.n, n}, {s.k, k}});
        if (!v) throw std::domain_error("summand undefined at k = " + std::to_string(k));
        acc += *v;
    }
    return acc * sign;
}

namespace {

constexpr long kWindow = 40;

struct BoundaryTerm {
    MultiPoly coeff;     // polynomial in n
    bool isG = false;    // G(n, line) or t(n + shift, line)
    long shift = 0;
    MultiPoly line;      // k as a function of n
};

long slopeOf(const MultiPoly& line, const std::string& n) {
    MultiPoly d = line.shift(n, 1) - line;
    return integerConstant(d, "summation bound");
}

// H(n+1)/H(n) for H(n) = phi(n + shift, line(n)), phi with ratios phiN, phiK
std::optional<URatFun> lineRatio(const RF& phiN, const RF& phiK, long shift, const MultiPoly& line, long alpha,
                                 const std::string& n, const std::string& k) {
    auto at = [&](const RF& r, long ns, long ks) { return substituteRegular(r.shift(n, ns), k, line + MultiPoly(ks)); };
    auto first = at(phiN, shift, 0);
    if (!first) return std::nullopt;
    RF acc = *first;
    for (long j = 0; j < alpha; ++j) {
        auto q = at(phiK, shift + 1, j);
        if (!q) return std::nullopt;
        acc *= *q;
    }
    for (long j = 1; j <= -alpha; ++j) {
        auto q = at(phiK, shift + 1, -j);
        if (!q) return std::nullopt;
        acc /= *q;
    }
    for (const auto& v : acc.vars())
        if (v != n) return std::nullopt;
    return URatFun::fromMulti(acc, n);
}

bool regularFrom(const URatFun& r, long n0) {
    for (const auto* p : {&r.num(), &r.den()})
        for (long root : integerRoots(*p))
            if (root >= n0) return false;
    return !r.isZero();
}

}  // namespace

SumRecurrence sumToRecurrence(const DefiniteSum& s, int maxOrder) {
    const std::string& n = s.n;
    const std::string& k = s.k;
    TelescopeCertificate cert = zeilberger(s.term, maxOrder, n, k);
    int d = cert.order();
    for (const auto& a : cert.coeffs)
        for (const auto& v : a.vars())
            if (v != n) throw std::invalid_argument("sumToRecurrence: summand has symbolic parameter " + v);
    const RF& R = cert.certificate;
    const RF& rk = s.term.ratio(k);
    const RF& rn = s.term.ratio(n);

    auto tval = [&](long nv, long kv) -> BigRational {
        auto v = s.term.value({{n, nv}, {k, kv}});
        if (!v) throw std::domain_error("summand undefined at (" + std::to_string(nv) + ", " + std::to_string(kv) + ")");
        return *v;
    };
    auto aval = [&](int i, long nv) { return cert.coeffs[static_cast<size_t>(i)].evaluateAll({{n, BigRational(nv)}}); };
    auto Tval = [&](long nv, long kv) {
        BigRational acc = 0;
        for (int i = 0; i <= d; ++i) acc += aval(i, nv) * tval(nv + i, kv);
        return acc;
    };
    // g(n, K) = R t, continued through the telescoping relation where R t is undefined
    auto Gval = [&](long nv, long K) -> std::optional<BigRational> {
        for (long off = 0; off <= 64; ++off) {
            for (long kv : {K - off, K + off}) {
                auto pt = point2(n, nv, k, kv);
                auto r = evalRF(R, pt);
                auto tv = s.term.value({{n, nv}, {k, kv}});
                if (!r || !tv) continue;
                BigRational g = *r * *tv;
                for (long j = kv; j < K; ++j) g += Tval(nv, j);
                for (long j = kv; j > K; --j) g -= Tval(nv, j - 1);
                return g;
            }
        }
        return std::nullopt;
    };

    std::vector<BoundaryTerm> terms;
    long aU = slopeOf(s.upper, n), aL = slopeOf(s.lower, n);
    if (!R.isZero()) {
        terms.push_back({MultiPoly(1), true, 0, s.upper + MultiPoly(1)});
        terms.push_back({MultiPoly(-1), true, 0, s.lower});
    }
    for (int i = 1; i <= d; ++i) {
        const MultiPoly& a = cert.coeffs[static_cast<size_t>(i)];
        long du = aU * i, dl = aL * i;
        for (long m = 1; m <= du; ++m) terms.push_back({a, false, i, s.upper + MultiPoly(m)});
        for (long m = du + 1; m <= 0; ++m) terms.push_back({-a, false, i, s.upper + MultiPoly(m)});
        for (long m = 0; m < dl; ++m) terms.push_back({-a, false, i, s.lower + MultiPoly(m)});
        for (long m = dl; m < 0; ++m) terms.push_back({a, false, i, s.lower + MultiPoly(m)});
    }

    RF Gn = R.isZero() ? RF(0) : R.shift(n, 1) / R * rn;
    RF Gk = R.isZero() ? RF(0) : R.shift(k, 1) / R * rk;
    Expr rhsExpr;
    long rhsFrom = 0;
    for (const auto& bt : terms) {
        long alpha = slopeOf(bt.line, n);
        std::vector<std::optional<BigRational>> h;
        for (long nv = 0; nv <= kWindow; ++nv) {
            auto kv = integerAt(bt.line, {{n, BigRational(nv)}});
            if (bt.isG) {
                h.push_back(Gval(nv, *kv));
            } else {
                h.push_back(s.term.value({{n, nv + bt.shift}, {k, *kv}}));
            }
        }
        // vanishing tail
        long lastNonzero = -1;
        for (long nv = 0; nv <= kWindow; ++nv)
            if (!h[static_cast<size_t>(nv)] || *h[static_cast<size_t>(nv)] != 0) lastNonzero = nv;
        if (lastNonzero < kWindow / 2) {
            rhsFrom = std::max(rhsFrom, lastNonzero + 1);
            continue;
        }
        long n0 = 0;
        for (long nv = 0; nv <= kWindow; ++nv)
            if (!h[static_cast<size_t>(nv)] || *h[static_cast<size_t>(nv)] == 0) n0 = nv + 1;
        if (n0 > kWindow / 2) throw std::runtime_error("sumToRecurrence: boundary term vanishes irregularly");
        auto r = bt.isG ? lineRatio(Gn, Gk, 0, bt.line, alpha, n, k)
                        : lineRatio(rn, rk, bt.shift, bt.line, alpha, n, k);
        auto consistent = [&](const URatFun& q) {
            for (long nv = n0; nv < kWindow; ++nv) {
                if (q.hasPoleAt(nv)) return false;
                if (*h[static_cast<size_t>(nv + 1)] != q(BigRational(nv)) * *h[static_cast<size_t>(nv)]) return false;
            }
            return true;
        };
        if (!r || !consistent(*r)) {
            std::vector<BigRational> tail;
            for (long nv = n0; nv <= kWindow; ++nv) tail.push_back(*h[static_cast<size_t>(nv)]);
            auto g = guessRecurrence(tail, 1, 4, n0);
            if (!g) throw std::runtime_error("sumToRecurrence: boundary term is not hypergeometric along the bound");
            r = URatFun(-g->coeff(0), g->coeff(1));
            if (!consistent(*r)) throw std::runtime_error("sumToRecurrence: inconsistent boundary term");
        }
        while (!regularFrom(*r, n0)) ++n0;
        HGProduct p{n0 + 1, r->shift(BigRational(-1)), std::nullopt};
        Expr term = Expr(*h[static_cast<size_t>(n0)]) * Expr::product(p);
        rhsExpr = rhsExpr + Expr(URatFun(bt.coeff.toUPoly(n))) * term;
        rhsFrom = std::max(rhsFrom, n0);
    }
    rhsExpr = canonicalize(rhsExpr);

    // exact right-hand side and exceptional values
    std::vector<BigRational> F;
    for (long nv = 0; nv <= kWindow + d; ++nv) F.push_back(sumValue(s, nv));
    std::vector<BigRational> b;
    for (long nv = 0; nv <= kWindow; ++nv) {
        BigRational acc = 0;
        for (int i = 0; i <= d; ++i) acc += aval(i, nv) * F[static_cast<size_t>(nv + i)];
        b.push_back(acc);
    }
    auto vals = evalRange(rhsExpr, 0, kWindow);
    for (long nv = rhsFrom; nv <= kWindow; ++nv) {
        const auto& v = vals[static_cast<size_t>(nv)];
        if (!v || !(*v == ZetaValue(b[static_cast<size_t>(nv)]))) rhsFrom = nv + 1;
    }
    while (rhsFrom > 0) {
        const auto& v = vals[static_cast<size_t>(rhsFrom - 1)];
        if (!v || !(*v == ZetaValue(b[static_cast<size_t>(rhsFrom - 1)]))) break;
        --rhsFrom;
    }
    if (rhsFrom > kWindow / 2)
        throw std::runtime_error("sumToRecurrence: boundary terms disagree with the summed values");
    Sequence rhs(rhsExpr, rhsFrom);
    for (long nv = 0; nv < rhsFrom; ++nv) rhs.values[nv] = b[static_cast<size_t>(nv)];

    std::vector<MultiPoly> coeffs;
    for (const auto& a : cert.coeffs) coeffs.push_back(nPoly(a.toUPoly(n)));
    if (rhsExpr.isRational() && !rhsExpr.isZero()) {
        // clear the denominator of a rational right-hand side
        const URatFun& q = rhsExpr.rat();
        MultiPoly den = nPoly(q.den());
        for (auto& a : coeffs) a *= den;
        Sequence cleared(Expr(URatFun(q.num())), rhsFrom);
        for (const auto& [nv, v] : rhs.values) cleared.values[nv] = v * q.den()(BigRational(nv));
        rhs = cleared;
    }
    LinearRecurrence rec(std::move(coeffs), std::move(rhs));
    rec.normalize();
    return {cert, rec};
}

}  // namespace epschain
