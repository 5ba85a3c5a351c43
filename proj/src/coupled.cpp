#include "epschain/coupled.hpp"

#include "epschain/linalg.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

namespace epschain {

namespace {

const std::string kX = "x";
const std::string kEps = "eps";

// sum_e weight_e(n) U_{j-e}(n + shift), U(k) = 0 for k < 0
struct ShiftedTerm {
    std::string fn;
    long shift = 0;
    MultiPoly weight;  // in n and eps
};

int epsLow(const MultiPoly& p) { return p.hasVar(kEps) ? p.minDegree(kEps) : 0; }
int epsHigh(const MultiPoly& p) { return p.hasVar(kEps) ? p.degree(kEps) : 0; }

MultiPoly falling(long shift, int r) {
    MultiPoly n = MultiPoly::variable("n");
    MultiPoly f(1);
    for (int q = 0; q < r; ++q) f *= n + MultiPoly(BigRational(shift - q));
    return f;
}

MultiPoly lcmPoly(const MultiPoly& a, const MultiPoly& b) {
    if (a.isConstant()) return b;
    if (b.isConstant()) return a;
    return *(a * b).divideExact(gcd(a, b));
}

// terms of [x^k] sum_key P_key D^s U for the coefficient index k + offset
std::vector<ShiftedTerm> coefficientTerms(const std::map<DerivKey, MultiPoly>& comb, long offset) {
    std::vector<ShiftedTerm> out;
    for (const auto& [key, p] : comb) {
        int sd = key.second;
        for (int a = 0; a <= p.degree(kX); ++a) {
            MultiPoly pa = p.coefficient(kX, a);
            if (pa.isZero()) continue;
            long shift = offset + sd - a;
            out.push_back({key.first, shift, pa * falling(shift, sd)});
        }
    }
    return out;
}

int knownStart(const KnownFunction& f) { return f.coefficients.empty() ? INT_MAX : f.coefficients.begin()->first; }

int knownTop(const KnownFunction& f) {
    if (f.precision) return *f.precision;
    return f.coefficients.empty() ? INT_MIN : f.coefficients.rbegin()->first;
}

// lowest order and highest exactly known order of sum of terms (shifted by -s)
std::pair<int, std::optional<int>> termOrders(const std::vector<ShiftedTerm>& terms,
                                              const std::map<std::string, KnownFunction>& known, int s) {
    int lo = INT_MAX;
    std::optional<int> prec;
    for (const auto& t : terms) {
        auto it = known.find(t.fn);
        if (it == known.end()) throw std::invalid_argument("unknown function " + t.fn);
        int st = knownStart(it->second);
        if (st != INT_MAX) lo = std::min(lo, st + epsLow(t.weight) - s);
        if (it->second.precision) {
            int p = *it->second.precision + epsLow(t.weight) - s;
            prec = prec ? std::min(*prec, p) : p;
        }
    }
    return {lo, prec};
}

// the order-j coefficient sum_e weight_e(n) U_{j+s-e}(n + shift) as a sequence
Sequence combine(const std::vector<ShiftedTerm>& terms, const std::map<std::string, KnownFunction>& known, int j,
                 int s) {
    struct Piece {
        UPoly w;
        Sequence u;
        long shift;
    };
    std::vector<Piece> pieces;
    for (const auto& t : terms) {
        const auto& f = known.at(t.fn);
        for (int e = epsLow(t.weight); e <= epsHigh(t.weight); ++e) {
            MultiPoly we = t.weight.coefficient(kEps, e);
            if (we.isZero()) continue;
            Sequence u = f.coefficient(j + s - e);
            if (isZero(u)) continue;
            pieces.push_back({we.toUPoly("n"), std::move(u), t.shift});
        }
    }
    Expr e;
    long from = 0;
    for (const auto& p : pieces) {
        e = e + Expr(URatFun(p.w)) * shift(p.u.expr, p.shift);
        from = std::max(from, p.u.validFrom - p.shift);
    }
    Sequence out(canonicalize(e), from);
    for (long n = 0; n < from; ++n) {
        ZetaValue v;
        for (const auto& p : pieces)
            if (n + p.shift >= 0) v += p.u.at(n + p.shift) * p.w(BigRational(n));
        out.values[n] = v;
    }
    return out;
}

using PVec = std::vector<MultiPoly>;
using PComb = std::map<DerivKey, MultiPoly>;

void addPoly(PComb& u, const DerivKey& k, const MultiPoly& c) {
    if (c.isZero()) return;
    auto it = u.find(k);
    if (it == u.end()) {
        u.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.isZero()) u.erase(it);
}

// fraction-free elimination
MultiPoly determinant(Matrix<MultiPoly> m) {
    size_t n = m.size();
    if (n == 0) return MultiPoly(1);
    MultiPoly prev(1);
    bool negate = false;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].isZero()) {
            size_t r = k + 1;
            while (r < n && m[r][k].isZero()) ++r;
            if (r == n) return MultiPoly();
            std::swap(m[k], m[r]);
            negate = !negate;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                m[i][j] = *(m[i][j] * m[k][k] - m[i][k] * m[k][j]).divideExact(prev);
        prev = m[k][k];
    }
    return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// v_r = p / dA^r, u_r = U / dA^r for the component comp
struct Link {
    PVec p;
    PComb u;
    int comp = 0, r = 0;
    std::vector<BigRational> point;  // p at a fixed rational point
};

// sum_row N_row v_row = delta v_cur, if it holds
std::optional<std::pair<std::vector<MultiPoly>, MultiPoly>> dependence(const std::vector<Link>& rows, const Link& cur,
                                                                       const MultiPoly& dA, int lam) {
    size_t k = rows.size();
    if (k == 0) {
        for (const auto& q : cur.p)
            if (!q.isZero()) return std::nullopt;
        return std::make_pair(std::vector<MultiPoly>{}, MultiPoly(1));
    }
    std::vector<PVec> sc;
    for (const auto& l : rows) {
        MultiPoly f = dA.pow(static_cast<unsigned>(cur.r - l.r));
        PVec v;
        for (const auto& q : l.p) v.push_back(q * f);
        sc.push_back(std::move(v));
    }
    std::vector<size_t> cols;
    Matrix<BigRational> numeric;
    for (int c = 0; c < lam && cols.size() < k; ++c) {
        std::vector<BigRational> col;
        for (const auto& l : rows) col.push_back(l.point[static_cast<size_t>(c)]);
        numeric.push_back(col);
        if (matrixRank(numeric, k) > cols.size())
            cols.push_back(static_cast<size_t>(c));
        else
            numeric.pop_back();
    }
    if (cols.size() < k) return std::nullopt;
    Matrix<MultiPoly> b(k, std::vector<MultiPoly>(k));
    for (size_t i = 0; i < k; ++i)
        for (size_t row = 0; row < k; ++row) b[i][row] = sc[row][cols[i]];
    MultiPoly delta = determinant(b);
    std::vector<MultiPoly> n;
    for (size_t row = 0; row < k; ++row) {
        Matrix<MultiPoly> br = b;
        for (size_t i = 0; i < k; ++i) br[i][row] = cur.p[cols[i]];
        n.push_back(determinant(br));
    }
    for (int c = 0; c < lam; ++c) {
        MultiPoly acc = -(delta * cur.p[static_cast<size_t>(c)]);
        for (size_t row = 0; row < k; ++row)
            if (!n[row].isZero()) acc += n[row] * sc[row][static_cast<size_t>(c)];
        if (!acc.isZero()) return std::nullopt;
    }
    return std::make_pair(std::move(n), std::move(delta));
}

struct RecData {
    std::vector<MultiPoly> coeffs;  // in n and eps
    std::vector<ShiftedTerm> rhs;
    int epsShift = 0;  // common eps power divided out of the operator
};

RecData recurrenceData(const ScalarODE& ode) {
    long tmin = LONG_MAX, tmax = LONG_MIN;
    for (int r = 0; r <= ode.order(); ++r) {
        const auto& p = ode.coeffs[static_cast<size_t>(r)];
        for (int a = 0; a <= p.degree(kX); ++a)
            if (!p.coefficient(kX, a).isZero()) {
                tmin = std::min(tmin, static_cast<long>(r - a));
                tmax = std::max(tmax, static_cast<long>(r - a));
            }
    }
    if (tmin == LONG_MAX) throw std::invalid_argument("zero differential operator");
    RecData out;
    out.coeffs.assign(static_cast<size_t>(tmax - tmin + 1), MultiPoly());
    for (int r = 0; r <= ode.order(); ++r) {
        const auto& p = ode.coeffs[static_cast<size_t>(r)];
        for (int a = 0; a <= p.degree(kX); ++a) {
            MultiPoly pa = p.coefficient(kX, a);
            if (pa.isZero()) continue;
            long i = r - a - tmin;
            out.coeffs[static_cast<size_t>(i)] += pa * falling(i, r);
        }
    }
    std::map<DerivKey, MultiPoly> comb;
    for (const auto& [k, c] : ode.rhs) {
        if (!c.den().isConstant()) throw std::invalid_argument("scalar ODE rhs must have polynomial coefficients");
        comb[k] = c.num() * (BigRational(1) / c.den().constantValue());
    }
    out.rhs = coefficientTerms(comb, -tmin);
    int s = INT_MAX;
    for (const auto& a : out.coeffs)
        if (!a.isZero()) s = std::min(s, epsLow(a));
    out.epsShift = s;
    if (s > 0) {
        MultiPoly e = MultiPoly::variable(kEps).pow(static_cast<unsigned>(s));
        for (auto& a : out.coeffs)
            if (!a.isZero()) a = *a.divideExact(e);
    }
    return out;
}

BigRational epsCoeff(const MultiPoly& p, int e) {
    MultiPoly c = p.coefficient(kEps, e);
    return c.isZero() ? BigRational(0) : c.constantValue();
}

// Q f = sum P D^s U, normalized to sum_a Qh_a(eps) F(k-a) = eps^-s R(k + c)
struct FormulaData {
    std::vector<MultiPoly> qh;     // Qh_a in eps, a = 0..deg
    std::vector<ShiftedTerm> low;  // [x^k] of the rhs, k < c must vanish
    std::vector<ShiftedTerm> terms;
    long c = 0;
    int s = 0;
    std::vector<BigRational> inv;  // 1/Qh_0 as a power series in eps
};

FormulaData analyzeFormula(const LinComb& f, int invTerms) {
    MultiPoly q(1);
    for (const auto& [k, c] : f) q = lcmPoly(q, c.den());
    std::map<DerivKey, MultiPoly> comb;
    for (const auto& [k, c] : f) comb[k] = *(c.num() * q).divideExact(c.den());
    FormulaData out;
    out.c = q.hasVar(kX) ? q.minDegree(kX) : 0;
    int s = INT_MAX;
    for (int a = static_cast<int>(out.c); a <= q.degree(kX); ++a) {
        MultiPoly qa = q.coefficient(kX, a);
        out.qh.push_back(qa);
        if (!qa.isZero()) s = std::min(s, epsLow(qa));
    }
    out.s = s;
    MultiPoly e = MultiPoly::variable(kEps).pow(static_cast<unsigned>(s));
    for (auto& qa : out.qh)
        if (!qa.isZero()) qa = *qa.divideExact(e);
    if (epsCoeff(out.qh[0], 0) == 0) throw std::domain_error("back-substitution is not expandable at x = 0 uniformly in eps");
    out.terms = coefficientTerms(comb, out.c);
    out.low = coefficientTerms(comb, 0);
    // power series inverse of Qh_0(eps)
    std::vector<BigRational> q0;
    for (int i = 0; i <= epsHigh(out.qh[0]); ++i) q0.push_back(epsCoeff(out.qh[0], i));
    out.inv.assign(static_cast<size_t>(invTerms), BigRational(0));
    for (int i = 0; i < invTerms; ++i) {
        BigRational acc = i == 0 ? BigRational(1) : BigRational(0);
        for (int m = 1; m <= i && m < static_cast<int>(q0.size()); ++m) acc -= q0[static_cast<size_t>(m)] * out.inv[static_cast<size_t>(i - m)];
        out.inv[static_cast<size_t>(i)] = acc / q0[0];
    }
    return out;
}

// highest order needed of every input for components through order r
std::map<std::string, int> requiredOrders(const UncoupledForm& u, int r) {
    std::map<std::string, int> need;
    auto bump = [&](const std::string& fn, int o) {
        auto it = need.find(fn);
        if (it == need.end() || it->second < o) need[fn] = o;
    };
    for (const auto& f : u.backSubst) {
        FormulaData fd = analyzeFormula(f, 1);
        for (const auto& t : fd.terms) bump(t.fn, r + fd.s - epsLow(t.weight));
    }
    for (auto it = u.blocks.rbegin(); it != u.blocks.rend(); ++it) {
        std::string name = componentName(it->component);
        bump(name, r);
        RecData rd = recurrenceData(*it);
        for (const auto& t : rd.rhs) bump(t.fn, need[name] + rd.epsShift - epsLow(t.weight));
    }
    return need;
}

void checkKnownOrders(const CoupledODESystem& s, const std::map<std::string, int>& need) {
    for (const auto& [fn, o] : need) {
        auto it = s.known.find(fn);
        if (it == s.known.end()) continue;
        const auto& k = it->second;
        std::optional<int> p = k.precision;
        if (!k.hasSymbolic())
            for (const auto& m : k.moments) p = p ? std::min(*p, m.precision()) : m.precision();
        if (p && *p < o)
            throw std::invalid_argument("known function " + fn + " is needed through eps^" + std::to_string(o) +
                                        " but known only through eps^" + std::to_string(*p));
    }
}

EpsRecurrence assemble(const RecData& rd, const std::map<std::string, KnownFunction>& known) {
    EpsRecurrence rec;
    for (const auto& a : rd.coeffs) rec.coeffs.push_back(a);
    if (rd.rhs.empty()) return rec;
    auto [lo, prec] = termOrders(rd.rhs, known, rd.epsShift);
    rec.rhsPrecision = prec;
    if (lo == INT_MAX) return rec;
    int hi = prec ? *prec : INT_MIN;
    if (!prec)
        for (const auto& t : rd.rhs) hi = std::max(hi, knownTop(known.at(t.fn)) + epsHigh(t.weight) - rd.epsShift);
    for (int j = lo; j <= hi; ++j) {
        Sequence b = combine(rd.rhs, known, j, rd.epsShift);
        if (!isZero(b)) rec.rhs[j] = std::move(b);
    }
    return rec;
}

// numeric coefficient tables keyed by eps-order, index k from 0
struct NumFn {
    std::map<int, std::vector<BigRational>> v;
    const BigRational& get(int j, long k) const {
        static const BigRational zero;
        if (k < 0) return zero;
        auto it = v.find(j);
        if (it == v.end()) return zero;
        if (k >= static_cast<long>(it->second.size()))
            throw std::out_of_range("moment index " + std::to_string(k) + " is not available");
        return it->second[static_cast<size_t>(k)];
    }
};

NumFn knownTable(const std::string& name, const KnownFunction& f, int lo, int hi, long count) {
    NumFn out;
    for (int j = lo; j <= hi; ++j) {
        std::vector<BigRational> v;
        for (long k = 0; k < count && k < static_cast<long>(f.moments.size()); ++k) v.push_back(f.moments[static_cast<size_t>(k)][j]);
        if (static_cast<long>(v.size()) < count) {
            if (!f.hasSymbolic())
                throw std::invalid_argument("known function " + name + " has only " +
                                            std::to_string(f.moments.size()) + " moments, " +
                                            std::to_string(count) + " are needed");
            Sequence s = f.coefficient(j);
            long from = static_cast<long>(v.size());
            for (const auto& x : s.range(from, count - 1)) {
                if (!x.isRational()) throw std::invalid_argument("moments of " + name + " are not rational");
                v.push_back(x.rational());
            }
        }
        bool zero = std::all_of(v.begin(), v.end(), [](const BigRational& q) { return q == 0; });
        if (!zero) out.v[j] = std::move(v);
    }
    return out;
}

// sum of u_i w_i over one running common denominator
class Accumulator {
public:
    void add(const BigRational& u, const BigRational& w) {
        if (sgn(u) == 0 || sgn(w) == 0) return;
        add(BigRational(u * w));
    }
    void add(const BigRational& t) {
        const mpz_class& d = t.get_den();
        if (d == 1) {
            num_ += t.get_num() * den_;
        } else if (mpz_divisible_p(den_.get_mpz_t(), d.get_mpz_t())) {
            mpz_divexact(tmp_.get_mpz_t(), den_.get_mpz_t(), d.get_mpz_t());
            num_ += t.get_num() * tmp_;
        } else {
            mpz_gcd(tmp_.get_mpz_t(), den_.get_mpz_t(), d.get_mpz_t());
            mpz_class a = d / tmp_;
            num_ = num_ * a + t.get_num() * (den_ / tmp_);
            den_ *= a;
        }
    }
    BigRational value() const {
        BigRational q(num_, den_);
        q.canonicalize();
        return q;
    }

private:
    mpz_class num_ = 0, den_ = 1, tmp_;
};

// a ShiftedTerm bound to its table, weights split by eps-power
struct NumTerm {
    const NumFn* f = nullptr;
    long shift = 0;
    std::vector<std::pair<int, UPoly>> w;
};

std::vector<NumTerm> compile(const std::vector<ShiftedTerm>& terms, const std::map<std::string, NumFn>& tables) {
    std::vector<NumTerm> out;
    for (const auto& t : terms) {
        NumTerm nt;
        nt.f = &tables.at(t.fn);
        nt.shift = t.shift;
        for (int e = epsLow(t.weight); e <= epsHigh(t.weight); ++e) {
            MultiPoly we = t.weight.coefficient(kEps, e);
            if (!we.isZero()) nt.w.emplace_back(e, we.toUPoly("n"));
        }
        out.push_back(std::move(nt));
    }
    return out;
}

using Weights = std::vector<std::vector<BigRational>>;

Weights weightsAt(const std::vector<NumTerm>& terms, long n) {
    Weights out;
    BigRational nn(n);
    for (const auto& t : terms) {
        std::vector<BigRational> v;
        for (const auto& [e, w] : t.w) v.push_back(w(nn));
        out.push_back(std::move(v));
    }
    return out;
}

void addTerms(Accumulator& acc, const std::vector<NumTerm>& terms, const Weights& wv, int j, int s, long n) {
    for (size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (n + t.shift < 0) continue;
        for (size_t q = 0; q < t.w.size(); ++q) acc.add(t.f->get(j + s - t.w[q].first, n + t.shift), wv[i][q]);
    }
}

}  // namespace

std::string componentName(int i) { return "f" + std::to_string(i + 1); }

BigRational KnownFunction::moment(long k, int order) const {
    if (k < static_cast<long>(moments.size())) return moments[static_cast<size_t>(k)][order];
    if (!hasSymbolic()) throw std::out_of_range("moment " + std::to_string(k) + " is not available");
    ZetaValue v = coefficient(order).at(k);
    if (!v.isRational()) throw std::invalid_argument("moment is not rational");
    return v.rational();
}

Sequence KnownFunction::coefficient(int order) const {
    if (precision && order > *precision)
        throw std::invalid_argument("known function is given through eps^" + std::to_string(*precision) +
                                    ", eps^" + std::to_string(order) + " is required");
    auto it = coefficients.find(order);
    return it == coefficients.end() ? Sequence() : it->second;
}

UncoupledForm uncouple(const CoupledODESystem& s) {
    int lam = s.size();
    if (lam < 1) throw std::invalid_argument("empty system");
    for (const auto& row : s.A)
        if (static_cast<int>(row.size()) != lam) throw std::invalid_argument("system matrix is not square");
    if (!s.g.empty() && static_cast<int>(s.g.size()) != lam)
        throw std::invalid_argument("inhomogeneity has the wrong length");
    auto checkVars = [](const RationalFunction& c) {
        for (const auto& v : c.vars())
            if (v != kX && v != kEps) throw std::invalid_argument("system coefficient depends on " + v);
    };

    // A = Ah / dA, g_i = sum gh / dA
    MultiPoly dA(1);
    for (const auto& row : s.A)
        for (const auto& c : row) {
            checkVars(c);
            dA = lcmPoly(dA, c.den());
        }
    for (const auto& row : s.g)
        for (const auto& t : row) {
            checkVars(t.coef);
            dA = lcmPoly(dA, t.coef.den());
        }
    MultiPoly dA1 = dA.derivative(kX);
    auto cleared = [&](const RationalFunction& c) { return *(c.num() * dA).divideExact(c.den()); };
    std::vector<std::vector<MultiPoly>> ah(static_cast<size_t>(lam));
    for (int k = 0; k < lam; ++k)
        for (int c = 0; c < lam; ++c) ah[static_cast<size_t>(k)].push_back(cleared(s.A[static_cast<size_t>(k)][static_cast<size_t>(c)]));

    const std::map<std::string, BigRational> at{{kX, BigRational(31, 97)}, {kEps, BigRational(53, 89)}};
    auto evalAt = [&](const PVec& p) {
        std::vector<BigRational> v;
        for (const auto& q : p) v.push_back(q.isZero() ? BigRational(0) : q.evaluateAll(at));
        return v;
    };
    auto step = [&](const Link& a) {
        Link b;
        b.comp = a.comp;
        b.r = a.r + 1;
        BigRational r(a.r);
        for (int c = 0; c < lam; ++c) {
            const MultiPoly& q = a.p[static_cast<size_t>(c)];
            MultiPoly n = dA * q.derivative(kX) - dA1 * q * r;
            for (int k = 0; k < lam; ++k)
                if (!a.p[static_cast<size_t>(k)].isZero()) n += a.p[static_cast<size_t>(k)] * ah[static_cast<size_t>(k)][static_cast<size_t>(c)];
            b.p.push_back(std::move(n));
        }
        for (const auto& [key, q] : a.u) {
            addPoly(b.u, key, dA * q.derivative(kX) - dA1 * q * r);
            addPoly(b.u, {key.first, key.second + 1}, dA * q);
        }
        if (!s.g.empty())
            for (int k = 0; k < lam; ++k)
                for (const auto& t : s.g[static_cast<size_t>(k)])
                    if (!a.p[static_cast<size_t>(k)].isZero()) addPoly(b.u, {t.h, 0}, a.p[static_cast<size_t>(k)] * cleared(t.coef));
        b.point = evalAt(b.p);
        return b;
    };
    auto numericRank = [&](const std::vector<Link>& rows, const std::vector<BigRational>* extra) {
        Matrix<BigRational> m;
        for (const auto& l : rows) m.push_back(l.point);
        if (extra) m.push_back(*extra);
        return matrixRank(m, static_cast<size_t>(lam));
    };

    std::vector<Link> rows;
    UncoupledForm out;
    while (static_cast<int>(rows.size()) < lam) {
        int lead = 0;
        for (;; ++lead) {
            std::vector<BigRational> e(static_cast<size_t>(lam), BigRational(0));
            e[static_cast<size_t>(lead)] = 1;
            if (numericRank(rows, &e) > rows.size()) break;
        }
        size_t first = rows.size();
        Link cur;
        cur.comp = lead;
        cur.p.assign(static_cast<size_t>(lam), MultiPoly());
        cur.p[static_cast<size_t>(lead)] = MultiPoly(1);
        cur.point = evalAt(cur.p);
        while (true) {
            std::optional<std::pair<std::vector<MultiPoly>, MultiPoly>> dep;
            if (numericRank(rows, &cur.point) == rows.size()) dep = dependence(rows, cur, dA, lam);
            if (!dep) {
                rows.push_back(cur);
                cur = step(rows.back());
                continue;
            }
            const auto& [nrow, delta] = *dep;
            int m = cur.r;
            MultiPoly dm = dA.pow(static_cast<unsigned>(m));
            std::vector<MultiPoly> lhs(static_cast<size_t>(m + 1));
            lhs[static_cast<size_t>(m)] = delta * dm;
            PComb rhs;
            for (const auto& [key, q] : cur.u) addPoly(rhs, key, delta * q);
            for (size_t k = 0; k < rows.size(); ++k) {
                const MultiPoly& nk = nrow[k];
                if (nk.isZero()) continue;
                for (const auto& [key, q] : rows[k].u) addPoly(rhs, key, -(nk * q * dA.pow(static_cast<unsigned>(m - rows[k].r))));
                if (k >= first)
                    lhs[static_cast<size_t>(rows[k].r)] -= nk * dm;
                else
                    addPoly(rhs, {componentName(rows[k].comp), rows[k].r}, nk * dm);
            }
            MultiPoly g;
            for (const auto& p : lhs) g = gcd(g, p);
            for (const auto& [k, p] : rhs) {
                if (g.isConstant()) break;
                g = gcd(g, p);
            }
            ScalarODE ode;
            ode.component = lead;
            for (const auto& p : lhs) ode.coeffs.push_back(p.isZero() ? p : *p.divideExact(g));
            for (const auto& [k, p] : rhs) ode.rhs[k] = RationalFunction(*p.divideExact(g));
            out.blocks.push_back(std::move(ode));
            break;
        }
    }

    // f = P^-1 diag(dA^r) (D^r f_lead - u_r)
    Matrix<MultiPoly> p;
    for (const auto& l : rows) p.push_back(l.p);
    MultiPoly det = determinant(p);
    if (det.isZero()) throw std::logic_error("uncoupling: singular transformation");
    for (int i = 0; i < lam; ++i) {
        PComb num;
        for (int row = 0; row < lam; ++row) {
            Matrix<MultiPoly> minor;
            for (int a = 0; a < lam; ++a) {
                if (a == row) continue;
                std::vector<MultiPoly> mr;
                for (int c = 0; c < lam; ++c)
                    if (c != i) mr.push_back(p[static_cast<size_t>(a)][static_cast<size_t>(c)]);
                minor.push_back(std::move(mr));
            }
            MultiPoly cof = determinant(minor);
            if ((row + i) % 2) cof = -cof;
            if (cof.isZero()) continue;
            const Link& l = rows[static_cast<size_t>(row)];
            addPoly(num, {componentName(l.comp), l.r}, cof * dA.pow(static_cast<unsigned>(l.r)));
            for (const auto& [key, q] : l.u) addPoly(num, key, -(cof * q));
        }
        LinComb f;
        for (const auto& [key, q] : num) f.emplace(key, RationalFunction(q, det));
        out.backSubst.push_back(std::move(f));
    }
    return out;
}

EpsRecurrence odeToRecurrence(const ScalarODE& ode, const std::map<std::string, KnownFunction>& known) {
    RecData rd = recurrenceData(ode);
    // the operator is returned before dividing out eps powers
    if (rd.epsShift > 0) {
        MultiPoly e = MultiPoly::variable(kEps).pow(static_cast<unsigned>(rd.epsShift));
        for (auto& a : rd.coeffs) a *= e;
        rd.epsShift = 0;
    }
    return assemble(rd, known);
}

EpsExpansion backsubstituteCoefficients(const LinComb& formula, const std::map<std::string, KnownFunction>& inputs,
                                        int l, int r) {
    FormulaData fd = analyzeFormula(formula, r - l + 64);
    auto [lo, prec] = termOrders(fd.terms, inputs, fd.s);
    if (prec && *prec < r)
        throw std::invalid_argument("back-substitution needs the inputs through eps^" +
                                    std::to_string(r + fd.s - (*prec - r)));
    int start = std::min(l, lo == INT_MAX ? l : lo);
    if (r - start + 1 > static_cast<int>(fd.inv.size())) fd = analyzeFormula(formula, r - start + 1);
    // [x^k] of the rhs vanishes below the x-power of Q
    for (long k = 0; k < fd.c; ++k)
        for (int j = start; j <= r; ++j) {
            ZetaValue v;
            for (const auto& t : fd.low) {
                if (k + t.shift < 0) continue;
                const auto& f = inputs.at(t.fn);
                for (int e = epsLow(t.weight); e <= epsHigh(t.weight); ++e) {
                    MultiPoly we = t.weight.coefficient(kEps, e);
                    if (!we.isZero()) v += f.coefficient(j + fd.s - e).at(k + t.shift) * we.evaluateAll({{"n", BigRational(k)}});
                }
            }
            if (!v.isZero()) throw std::domain_error("pole at x = 0 in the back-substitution is not clearable");
        }

    std::map<int, Sequence> rt;
    for (int j = start; j <= r; ++j) rt[j] = combine(fd.terms, inputs, j, fd.s);

    EpsExpansion out;
    out.startOrder = start;
    int deg = static_cast<int>(fd.qh.size()) - 1;
    if (deg == 0) {
        for (int j = start; j <= r; ++j) {
            Expr e;
            long from = 0;
            for (int i = 0; start + i <= j; ++i) {
                const BigRational& w = fd.inv[static_cast<size_t>(i)];
                if (w == 0) continue;
                const Sequence& q = rt[j - i];
                e = e + Expr(w) * q.expr;
                from = std::max(from, q.validFrom);
            }
            Sequence seq(canonicalize(e), from);
            for (long k = 0; k < from; ++k) {
                ZetaValue v;
                for (int i = 0; start + i <= j; ++i)
                    if (fd.inv[static_cast<size_t>(i)] != 0) v += rt[j - i].at(k) * fd.inv[static_cast<size_t>(i)];
                seq.values[k] = v;
            }
            out.coefficients.push_back(std::move(seq));
        }
        return out;
    }
    // sum_a Qh_a F(k - a) = Rt(k): a recurrence in n = k - deg
    EpsRecurrence rec;
    for (int i = 0; i <= deg; ++i) rec.coeffs.push_back(fd.qh[static_cast<size_t>(deg - i)]);
    for (int j = start; j <= r; ++j) {
        const Sequence& q = rt[j];
        Sequence sh(shift(q.expr, deg), std::max(0L, q.validFrom - deg));
        for (long n = 0; n < sh.validFrom; ++n) sh.values[n] = q.at(n + deg);
        rec.rhs[j] = std::move(sh);
    }
    rec.rhsPrecision = r;
    // initial values F(0..deg-1) order by order
    InitialGrid init;
    std::map<int, std::vector<ZetaValue>> fv;
    for (int j = start; j <= r; ++j) {
        std::vector<ZetaValue> v;
        for (long k = 0; k < deg; ++k) {
            ZetaValue acc;
            for (int i = 0; start + i <= j; ++i) {
                const BigRational& w = fd.inv[static_cast<size_t>(i)];
                if (w == 0) continue;
                int jj = j - i;
                ZetaValue x = rt[jj].at(k);
                for (int a = 1; a <= deg && a <= k; ++a)
                    for (int e = 0; e <= epsHigh(fd.qh[static_cast<size_t>(a)]); ++e) {
                        BigRational qa = epsCoeff(fd.qh[static_cast<size_t>(a)], e);
                        if (qa != 0 && jj - e >= start) x -= fv[jj - e][static_cast<size_t>(k - a)] * qa;
                    }
                acc += x * w;
            }
            v.push_back(acc);
        }
        fv[j] = v;
        init[j] = v;
    }
    auto res = epsExpandSolve(rec, init, start, r);
    if (!res.ok()) throw std::runtime_error("back-substitution recurrence is not solvable: " + res.failure->reason);
    return res.expansion;
}

SystemExpansion solveSystemExpansion(const CoupledODESystem& s, const SystemInitial& initial, int l, int r) {
    UncoupledForm u = uncouple(s);
    auto need = requiredOrders(u, r);
    checkKnownOrders(s, need);
    std::map<std::string, KnownFunction> known = s.known;
    SystemExpansion out;
    for (const auto& ode : u.blocks) {
        std::string name = componentName(ode.component);
        int top = need.at(name);
        EpsRecurrence rec = odeToRecurrence(ode, known);
        EpsRecurrence nr = normalizeEps(rec);
        LeadingData ld = leadingData(nr);
        auto it = initial.find(ode.component);
        if (it == initial.end()) throw std::invalid_argument("missing initial values for " + name);
        InitialGrid sliced;
        for (int j = l; j <= top; ++j) {
            auto g = it->second.find(j);
            if (g == it->second.end() || static_cast<long>(g->second.size()) < ld.delta + ld.o)
                throw std::invalid_argument("initial values of " + name + " at eps^" + std::to_string(j) +
                                            " must cover k = 0.." + std::to_string(ld.delta + ld.o - 1));
            sliced[j] = std::vector<ZetaValue>(g->second.begin() + ld.delta, g->second.begin() + ld.delta + ld.o);
        }
        EpsSolveResult res = epsExpandSolve(rec, sliced, l, top);
        if (!res.ok()) {
            out.failure = res.failure;
            out.failedComponent = ode.component;
            return out;
        }
        KnownFunction kf;
        kf.precision = top;
        for (int j = l; j <= top; ++j) {
            Sequence seq = res.expansion.at(j);
            const auto& grid = it->second.at(j);
            for (long k = 0; k < ld.delta; ++k) seq.values[k] = grid[static_cast<size_t>(k)];
            if (seq.validFrom < 0) seq.validFrom = 0;
            for (long k = ld.delta + ld.o; k < static_cast<long>(grid.size()); ++k)
                if (seq.at(k) != grid[static_cast<size_t>(k)])
                    throw std::invalid_argument("initial value of " + name + " at eps^" + std::to_string(j) +
                                                ", k = " + std::to_string(k) + " is inconsistent");
            kf.coefficients[j] = std::move(seq);
        }
        known[name] = std::move(kf);
    }
    for (int i = 0; i < s.size(); ++i) {
        EpsExpansion e = backsubstituteCoefficients(u.backSubst[static_cast<size_t>(i)], known, l, r);
        out.components.push_back(std::move(e));
    }
    return out;
}

MomentTable largeMoments(const CoupledODESystem& s, long mu, const SystemInitial& initial, int l, int r) {
    if (mu < 0) throw std::invalid_argument("mu must be nonnegative");
    UncoupledForm u = uncouple(s);
    auto need = requiredOrders(u, r);
    checkKnownOrders(s, need);

    // moment indices needed per function
    std::vector<FormulaData> fds;
    std::map<std::string, long> idx;
    auto bumpIdx = [&](const std::string& fn, long k) {
        auto it = idx.find(fn);
        if (it == idx.end() || it->second < k) idx[fn] = k;
    };
    int lo = l;
    for (const auto& f : u.backSubst) {
        fds.push_back(analyzeFormula(f, 1));
        for (const auto& t : fds.back().terms) bumpIdx(t.fn, mu + t.shift);
        for (const auto& t : fds.back().low) bumpIdx(t.fn, fds.back().c + t.shift);
    }
    std::vector<RecData> rds;
    std::vector<LeadingData> lds;
    for (const auto& ode : u.blocks) rds.push_back(recurrenceData(ode));
    for (const auto& rd : rds) {
        EpsRecurrence op;
        op.coeffs = rd.coeffs;
        lds.push_back(leadingData(op));
    }
    for (size_t b = u.blocks.size(); b-- > 0;) {
        std::string name = componentName(u.blocks[b].component);
        bumpIdx(name, mu);
        int d = static_cast<int>(rds[b].coeffs.size()) - 1;
        long top = idx[name] + static_cast<long>(need.at(name) - l) * (d - lds[b].o) + d;
        for (const auto& t : rds[b].rhs) bumpIdx(t.fn, top + t.shift);
    }

    std::map<std::string, NumFn> tables;
    for (const auto& [name, k] : s.known) {
        int hi = need.count(name) ? need.at(name) : r;
        int start = knownStart(k);
        for (const auto& m : k.moments)
            if (!m.vanishes()) start = std::min(start, m.start());
        if (start == INT_MAX) start = hi + 1;
        lo = std::min(lo, start);
        long count = idx.count(name) ? idx[name] + 1 : 0;
        tables[name] = knownTable(name, k, start, hi, count);
    }

    for (size_t b = 0; b < u.blocks.size(); ++b) {
        const auto& ode = u.blocks[b];
        std::string name = componentName(ode.component);
        const RecData& rd = rds[b];
        const LeadingData& ld = lds[b];
        int d = static_cast<int>(rd.coeffs.size()) - 1, o = ld.o;
        int top = need.at(name);
        int edeg = 0;
        for (const auto& a : rd.coeffs) edeg = std::max(edeg, epsHigh(a));
        // a_{i,m}(n) as polynomials
        std::vector<std::vector<UPoly>> a(static_cast<size_t>(d + 1), std::vector<UPoly>(static_cast<size_t>(edeg + 1)));
        for (int i = 0; i <= d; ++i)
            for (int m = 0; m <= edeg; ++m) {
                MultiPoly c = rd.coeffs[static_cast<size_t>(i)].coefficient(kEps, m);
                a[static_cast<size_t>(i)][static_cast<size_t>(m)] = c.isZero() ? UPoly() : c.toUPoly("n");
            }
        auto it = initial.find(ode.component);
        if (it == initial.end()) throw std::invalid_argument("missing initial values for " + name);
        NumFn f;
        long need0 = idx[name];
        for (int j = l; j <= top; ++j) {
            long topj = need0 + static_cast<long>(top - j) * (d - o);
            auto g = it->second.find(j);
            if (g == it->second.end() || static_cast<long>(g->second.size()) < ld.delta + o)
                throw std::invalid_argument("initial values of " + name + " at eps^" + std::to_string(j) +
                                            " must cover k = 0.." + std::to_string(ld.delta + o - 1));
            std::vector<BigRational> v;
            for (long k = 0; k < ld.delta + o; ++k) {
                const ZetaValue& z = g->second[static_cast<size_t>(k)];
                if (!z.isRational()) throw std::invalid_argument("moments need rational initial values");
                v.push_back(z.rational());
            }
            auto rhs = compile(rd.rhs, tables);
            for (long n = ld.delta; n + o <= topj; ++n) {
                BigRational nn(n);
                Accumulator acc;
                addTerms(acc, rhs, weightsAt(rhs, n), j, rd.epsShift, n);
                for (int i = 0; i < o; ++i)
                    if (!a[static_cast<size_t>(i)][0].isZero()) acc.add(v[static_cast<size_t>(n + i)], -a[static_cast<size_t>(i)][0](nn));
                for (int m = 1; m <= edeg && j - m >= l; ++m) {
                    const auto& lower = f.v[j - m];
                    for (int i = 0; i <= d; ++i) {
                        const UPoly& p = a[static_cast<size_t>(i)][static_cast<size_t>(m)];
                        if (!p.isZero()) acc.add(lower[static_cast<size_t>(n + i)], -p(nn));
                    }
                }
                BigRational lead = a[static_cast<size_t>(o)][0](nn);
                if (lead == 0)
                    throw std::domain_error("leading coefficient vanishes at k = " + std::to_string(n));
                v.push_back(acc.value() / lead);
            }
            f.v[j] = std::move(v);
        }
        tables[name] = std::move(f);
    }

    MomentTable out;
    out.startOrder = l;
    out.mu = mu;
    for (size_t i = 0; i < fds.size(); ++i) {
        FormulaData fd = analyzeFormula(u.backSubst[i], r - lo + 2);
        int deg = static_cast<int>(fd.qh.size()) - 1;
        auto low = compile(fd.low, tables);
        for (long k = 0; k < fd.c; ++k)
            for (int j = lo; j <= r; ++j)
                if (Accumulator acc; addTerms(acc, low, weightsAt(low, k), j, fd.s, k), acc.value() != 0)
                    throw std::domain_error("pole at x = 0 in the back-substitution is not clearable");
        auto terms = compile(fd.terms, tables);
        std::vector<std::vector<std::pair<int, BigRational>>> qa(static_cast<size_t>(deg + 1));
        for (int aa = 1; aa <= deg; ++aa)
            for (int e = 0; e <= epsHigh(fd.qh[static_cast<size_t>(aa)]); ++e)
                if (epsCoeff(fd.qh[static_cast<size_t>(aa)], e) != 0)
                    qa[static_cast<size_t>(aa)].emplace_back(e, -epsCoeff(fd.qh[static_cast<size_t>(aa)], e));
        std::map<int, std::vector<BigRational>> fv;
        for (int j = lo; j <= r; ++j) fv[j].reserve(static_cast<size_t>(mu + 1));
        for (long k = 0; k <= mu; ++k) {
            Weights wv = weightsAt(terms, k);
            // X_j = Rt_j(k) - sum_{a>=1} Qh_a F(k-a), then F = X / Qh_0
            std::vector<BigRational> x;
            for (int jj = lo; jj <= r; ++jj) {
                Accumulator acc;
                addTerms(acc, terms, wv, jj, fd.s, k);
                for (int aa = 1; aa <= deg && aa <= k; ++aa)
                    for (const auto& [e, q] : qa[static_cast<size_t>(aa)])
                        if (jj - e >= lo) acc.add(fv[jj - e][static_cast<size_t>(k - aa)], q);
                x.push_back(acc.value());
            }
            for (int j = lo; j <= r; ++j) {
                Accumulator acc;
                for (int w = 0; lo + w <= j; ++w) acc.add(x[static_cast<size_t>(j - w - lo)], fd.inv[static_cast<size_t>(w)]);
                fv[j].push_back(acc.value());
            }
        }
        std::vector<std::vector<BigRational>> comp;
        for (int j = l; j <= r; ++j) comp.push_back(fv.count(j) ? fv[j] : std::vector<BigRational>(static_cast<size_t>(mu + 1)));
        out.values.push_back(std::move(comp));
    }
    return out;
}

std::vector<std::vector<RationalEpsSeries>> seriesOracle(const CoupledODESystem& s,
                                                         const std::vector<RationalEpsSeries>& f0, long K, int r) {
    int lam = s.size();
    if (static_cast<int>(f0.size()) != lam) throw std::invalid_argument("f(0) has the wrong length");
    MultiPoly den(1);
    for (const auto& row : s.A)
        for (const auto& c : row) den = lcmPoly(den, c.den());
    for (const auto& row : s.g)
        for (const auto& t : row) den = lcmPoly(den, t.coef.den());
    int prec = r + 4;
    for (const auto& f : f0) prec = std::max(prec, f.precision() + 4);
    auto series = [&](const MultiPoly& p) {
        std::vector<BigRational> c(static_cast<size_t>(prec + 1), BigRational(0));
        for (int e = 0; e <= std::min(prec, epsHigh(p)); ++e) c[static_cast<size_t>(e)] = epsCoeff(p, e);
        return RationalEpsSeries(0, c);
    };
    auto xcoef = [&](const MultiPoly& p, int a) { return series(p.coefficient(kX, a)); };
    auto poly = [&](const RationalFunction& c) { return *(c.num() * den).divideExact(c.den()); };

    std::vector<std::vector<MultiPoly>> ah(static_cast<size_t>(lam), std::vector<MultiPoly>(static_cast<size_t>(lam)));
    for (int i = 0; i < lam; ++i)
        for (int c = 0; c < lam; ++c) ah[static_cast<size_t>(i)][static_cast<size_t>(c)] = poly(s.A[static_cast<size_t>(i)][static_cast<size_t>(c)]);
    int dd = den.degree(kX);
    RationalEpsSeries d0 = xcoef(den, 0);
    if (d0.vanishes()) throw std::domain_error("system matrix is singular at x = 0");

    auto knownSeries = [&](const std::string& name, long k) {
        const auto& f = s.known.at(name);
        if (k < static_cast<long>(f.moments.size())) return f.moments[static_cast<size_t>(k)];
        if (!f.hasSymbolic()) throw std::out_of_range("moment of " + name + " is not available");
        int top = f.precision ? *f.precision : prec;
        int st = knownStart(f);
        if (st == INT_MAX) return RationalEpsSeries::zero(top);
        std::vector<BigRational> c;
        for (int j = st; j <= top; ++j) {
            ZetaValue v = f.coefficient(j).at(k);
            if (!v.isRational()) throw std::invalid_argument("moments of " + name + " are not rational");
            c.push_back(v.rational());
        }
        return RationalEpsSeries(st, c);
    };

    std::vector<std::vector<RationalEpsSeries>> F(static_cast<size_t>(lam));
    for (int i = 0; i < lam; ++i) F[static_cast<size_t>(i)].push_back(f0[static_cast<size_t>(i)]);
    for (long k = 0; k < K; ++k) {
        for (int i = 0; i < lam; ++i) {
            RationalEpsSeries acc = RationalEpsSeries::zero(prec);
            for (int c = 0; c < lam; ++c) {
                const MultiPoly& p = ah[static_cast<size_t>(i)][static_cast<size_t>(c)];
                for (int a = 0; a <= std::min<long>(p.degree(kX), k); ++a) {
                    MultiPoly pa = p.coefficient(kX, a);
                    if (!pa.isZero()) acc = acc + series(pa) * F[static_cast<size_t>(c)][static_cast<size_t>(k - a)];
                }
            }
            if (!s.g.empty())
                for (const auto& t : s.g[static_cast<size_t>(i)]) {
                    MultiPoly p = poly(t.coef);
                    for (int a = 0; a <= std::min<long>(p.degree(kX), k); ++a) {
                        MultiPoly pa = p.coefficient(kX, a);
                        if (!pa.isZero()) acc = acc + series(pa) * knownSeries(t.h, k - a);
                    }
                }
            for (int a = 1; a <= dd && a <= k + 1; ++a) {
                MultiPoly da = den.coefficient(kX, a);
                if (da.isZero()) continue;
                acc = acc - series(da) * F[static_cast<size_t>(i)][static_cast<size_t>(k + 1 - a)] * BigRational(k + 1 - a);
            }
            F[static_cast<size_t>(i)].push_back(acc / (d0 * BigRational(k + 1)));
        }
    }
    for (auto& comp : F)
        for (auto& v : comp) v = v.truncated(r);
    return F;
}

bool satisfiesSystem(const CoupledODESystem& s, const CoefficientAccess& F, int l, int r, long K) {
    int lam = s.size();
    MultiPoly den(1);
    for (const auto& row : s.A)
        for (const auto& c : row) den = lcmPoly(den, c.den());
    for (const auto& row : s.g)
        for (const auto& t : row) den = lcmPoly(den, t.coef.den());
    auto poly = [&](const RationalFunction& c) { return *(c.num() * den).divideExact(c.den()); };
    // value of sum_a p_a(eps) x^a times a series with coefficients u(order, k) at x^k, eps^j
    auto apply = [&](const MultiPoly& p, const std::function<ZetaValue(int, long)>& u, int j, long k) {
        ZetaValue acc;
        for (int a = 0; a <= p.degree(kX) && a <= k; ++a) {
            MultiPoly pa = p.coefficient(kX, a);
            for (int e = 0; e <= epsHigh(pa); ++e) {
                BigRational c = epsCoeff(pa, e);
                if (c != 0 && j - e >= l) acc += u(j - e, k - a) * c;
            }
        }
        return acc;
    };
    for (int i = 0; i < lam; ++i)
        for (long k = 0; k <= K; ++k)
            for (int j = l; j <= r; ++j) {
                // den * (k+1) F(k+1) at x^k, written as den * D f
                ZetaValue lhs = apply(den, [&](int o, long m) { return F(i, o, m + 1) * BigRational(m + 1); }, j, k);
                ZetaValue rhs;
                for (int c = 0; c < lam; ++c)
                    rhs += apply(poly(s.A[static_cast<size_t>(i)][static_cast<size_t>(c)]),
                                 [&](int o, long m) { return F(c, o, m); }, j, k);
                if (!s.g.empty())
                    for (const auto& t : s.g[static_cast<size_t>(i)]) {
                        const KnownFunction& h = s.known.at(t.h);
                        rhs += apply(poly(t.coef), [&](int o, long m) {
                            if (m < static_cast<long>(h.moments.size())) return ZetaValue(h.moments[static_cast<size_t>(m)][o]);
                            return h.coefficient(o).at(m);
                        }, j, k);
                    }
                if (lhs != rhs) return false;
            }
    return true;
}

SystemInitial initialFromSeries(const CoupledODESystem& s, const std::vector<std::vector<RationalEpsSeries>>& series,
                                int l, int r, long count) {
    UncoupledForm u = uncouple(s);
    auto need = requiredOrders(u, r);
    SystemInitial out;
    for (const auto& ode : u.blocks) {
        int top = need.at(componentName(ode.component));
        const auto& comp = series.at(static_cast<size_t>(ode.component));
        InitialGrid g;
        for (int j = l; j <= top; ++j)
            for (long k = 0; k < count && k < static_cast<long>(comp.size()); ++k)
                g[j].push_back(ZetaValue(comp[static_cast<size_t>(k)][j]));
        out[ode.component] = std::move(g);
    }
    return out;
}

SystemInitial initialFromOrigin(const CoupledODESystem& s, const std::vector<std::map<int, BigRational>>& f0, int l,
                                int r) {
    if (static_cast<int>(f0.size()) != s.size()) throw std::invalid_argument("f(0) has the wrong length");
    UncoupledForm u = uncouple(s);
    auto need = requiredOrders(u, r);
    int top = r;
    for (const auto& [fn, o] : need) top = std::max(top, o);
    long count = 1;
    for (const auto& ode : u.blocks) {
        EpsRecurrence op;
        op.coeffs = recurrenceData(ode).coeffs;
        LeadingData ld = leadingData(normalizeEps(op));
        count = std::max(count, ld.delta + ld.o + 1);
    }
    int lo = l;
    for (const auto& m : f0)
        if (!m.empty()) lo = std::min(lo, m.begin()->first);
    std::vector<RationalEpsSeries> init;
    for (const auto& m : f0) {
        std::vector<BigRational> c(static_cast<size_t>(top + 8 - lo + 1), BigRational(0));
        for (const auto& [j, v] : m) {
            if (j > top + 8) throw std::invalid_argument("f(0) order " + std::to_string(j) + " is out of range");
            c[static_cast<size_t>(j - lo)] = v;
        }
        init.push_back(RationalEpsSeries(lo, std::move(c)));
    }
    return initialFromSeries(s, seriesOracle(s, init, count, top), l, r, count + 1);
}

}  // namespace epschain
