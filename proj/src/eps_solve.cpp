#include "epschain/eps_solve.hpp"

#include <algorithm>
#include <stdexcept>

namespace epschain {

namespace {

const std::string kEps = "eps";

long rootBound(const UPoly& p) {
    if (p.isConstant()) return 0;
    long d = -1;
    for (long r : integerRoots(p))
        if (r >= 0) d = std::max(d, r);
    return d + 1;
}

bool zeroOperator(const EpsRecurrence& r) {
    return std::all_of(r.coeffs.begin(), r.coeffs.end(), [](const MultiPoly& a) { return a.isZero(); });
}

void checkVariables(const EpsRecurrence& r) {
    for (const auto& a : r.coeffs)
        for (const auto& v : a.vars())
            if (v != "n" && v != kEps) throw std::invalid_argument("eps-recurrence coefficient depends on " + v);
}

}  // namespace

UPoly EpsRecurrence::coeff(int i, int m) const {
    return coeffs.at(static_cast<size_t>(i)).coefficient(kEps, m).toUPoly("n");
}

int EpsRecurrence::epsDegree() const {
    int d = 0;
    for (const auto& a : coeffs) d = std::max(d, a.degree(kEps));
    return d;
}

Sequence EpsRecurrence::rhsAt(int j) const {
    if (rhsPrecision && j > *rhsPrecision)
        throw std::invalid_argument("rhs is known through eps^" + std::to_string(*rhsPrecision) + ", eps^" +
                                    std::to_string(j) + " is required");
    auto it = rhs.find(j);
    return it == rhs.end() ? Sequence() : it->second;
}

EpsRecurrence normalizeEps(const EpsRecurrence& r) {
    checkVariables(r);
    if (r.coeffs.empty() || zeroOperator(r)) throw std::invalid_argument("identically zero operator");
    int s = -1;
    for (const auto& a : r.coeffs)
        if (!a.isZero()) s = s < 0 ? a.minDegree(kEps) : std::min(s, a.minDegree(kEps));
    if (s <= 0) return r;
    EpsRecurrence out;
    MultiPoly e = MultiPoly::variable(kEps).pow(static_cast<unsigned>(s));
    for (const auto& a : r.coeffs) out.coeffs.push_back(a.isZero() ? a : *a.divideExact(e));
    for (const auto& [j, b] : r.rhs) out.rhs[j - s] = b;
    if (r.rhsPrecision) out.rhsPrecision = *r.rhsPrecision - s;
    return out;
}

LeadingData leadingData(const EpsRecurrence& r) {
    LeadingData ld;
    ld.o = -1;
    for (int i = 0; i <= r.order(); ++i)
        if (!r.coeff(i, 0).isZero()) ld.o = i;
    if (ld.o < 0) throw std::invalid_argument("eps-recurrence is not normalized");
    ld.delta = rootBound(r.coeff(ld.o, 0));
    return ld;
}

EpsSolveResult epsExpandSolve(const EpsRecurrence& r0, const InitialGrid& initial, int l, int rr) {
    if (rr < l) throw std::invalid_argument("empty order range");
    EpsRecurrence r = normalizeEps(r0);
    LeadingData ld = leadingData(r);
    int d = r.order();
    for (const auto& [j, b] : r.rhs)
        if (j < l && !isZero(b)) throw std::invalid_argument("rhs has a term below the requested start order");
    for (int j = l; j <= rr; ++j) r.rhsAt(j);

    std::vector<MultiPoly> lead;
    for (int i = 0; i <= ld.o; ++i) lead.push_back(nPoly(r.coeff(i, 0)));

    EpsSolveResult out;
    out.expansion.startOrder = l;
    out.expansion.validFrom = ld.delta;
    for (int j = l; j <= rr; ++j) {
        auto it = initial.find(j);
        if (ld.o > 0 && (it == initial.end() || static_cast<int>(it->second.size()) < ld.o))
            throw std::invalid_argument("missing initial values for eps^" + std::to_string(j));
        Sequence b = r.rhsAt(j);
        Expr expr = b.expr;
        long from = std::max(b.validFrom, ld.delta);
        for (int m = 1; m <= j - l && m <= r.epsDegree(); ++m) {
            const Sequence& f = out.expansion.at(j - m);
            for (int i = 0; i <= d; ++i) {
                UPoly a = r.coeff(i, m);
                if (a.isZero()) continue;
                expr = expr - Expr(URatFun(a)) * shift(f.expr, i);
                from = std::max(from, f.validFrom - i);
            }
        }
        Sequence rhs(canonicalize(expr), from);
        for (long n = ld.delta; n < from; ++n) {
            ZetaValue v = b.at(n);
            for (int m = 1; m <= j - l && m <= r.epsDegree(); ++m)
                for (int i = 0; i <= d; ++i) {
                    UPoly a = r.coeff(i, m);
                    if (!a.isZero()) v -= out.expansion.at(j - m).at(n + i) * a(BigRational(n));
                }
            rhs.values[n] = v;
        }
        LinearRecurrence rec(lead, rhs);
        std::vector<ZetaValue> init;
        if (ld.o > 0) init.assign(it->second.begin(), it->second.begin() + ld.o);
        auto sol = solveWithInitialValues(rec, init, ld.delta);
        if (!sol) {
            out.failure = EpsSolveFailure{j, dalembertSolutions(rec), "eps^" + std::to_string(j) +
                                                                          " coefficient is not expressible "
                                                                          "in indefinite nested sums"};
            return out;
        }
        if (ld.o > 0 && static_cast<int>(it->second.size()) > ld.o &&
            sol->at(ld.delta + ld.o) != it->second[static_cast<size_t>(ld.o)])
            throw std::invalid_argument("initial value F_" + std::to_string(j) + "(" +
                                        std::to_string(ld.delta + ld.o) + ") is inconsistent with the recurrence");
        out.expansion.coefficients.push_back(std::move(*sol));
    }
    return out;
}

std::map<int, std::vector<ZetaValue>> unrollEps(const EpsRecurrence& r0, const InitialGrid& initial, int l, int rr,
                                                long to) {
    EpsRecurrence r = normalizeEps(r0);
    LeadingData ld = leadingData(r);
    int d = r.order(), o = ld.o;
    long delta = ld.delta;
    std::map<int, std::vector<ZetaValue>> vals;
    for (int j = l; j <= rr; ++j) {
        long top = std::max(to, to + static_cast<long>(rr - j) * (d - o));
        std::vector<ZetaValue> v;
        if (o > 0) {
            auto it = initial.find(j);
            if (it == initial.end() || static_cast<int>(it->second.size()) < o)
                throw std::invalid_argument("missing initial values for eps^" + std::to_string(j));
            v.assign(it->second.begin(), it->second.begin() + o);
        }
        Sequence b = r.rhsAt(j);
        for (long n = delta; n + o <= top; ++n) {
            ZetaValue acc = b.at(n);
            for (int i = 0; i < o; ++i) acc -= v[static_cast<size_t>(n - delta + i)] * r.coeff(i, 0)(BigRational(n));
            for (int m = 1; m <= j - l && m <= r.epsDegree(); ++m)
                for (int i = 0; i <= d; ++i) {
                    UPoly a = r.coeff(i, m);
                    if (!a.isZero()) acc -= vals[j - m][static_cast<size_t>(n - delta + i)] * a(BigRational(n));
                }
            v.push_back(acc * (BigRational(1) / r.coeff(o, 0)(BigRational(n))));
        }
        vals[j] = std::move(v);
    }
    for (auto& [j, v] : vals) v.resize(static_cast<size_t>(to - delta + 1));
    return vals;
}

bool verifyExpansion(const EpsRecurrence& r0, const EpsExpansion& e, long nWindow) {
    if (e.coefficients.empty()) return true;
    int l = e.startOrder, rr = e.endOrder();
    if (zeroOperator(r0)) {
        for (int j = l; j <= rr; ++j)
            if (!isZero(r0.rhsAt(j))) return false;
        return true;
    }
    EpsRecurrence r = normalizeEps(r0);
    LeadingData ld;
    try {
        ld = leadingData(r);
    } catch (const std::invalid_argument&) {
        return false;
    }
    int d = r.order();
    long delta = ld.delta;
    try {
        std::map<int, std::vector<ZetaValue>> f;
        for (int j = l; j <= rr; ++j) f[j] = e.at(j).range(delta, delta + nWindow + d);
        for (int j = l; j <= rr; ++j) {
            Sequence b = r.rhsAt(j);
            for (long n = delta; n <= delta + nWindow; ++n) {
                ZetaValue acc = -b.at(n);
                for (int m = 0; m <= j - l && m <= r.epsDegree(); ++m)
                    for (int i = 0; i <= d; ++i) {
                        UPoly a = r.coeff(i, m);
                        if (!a.isZero()) acc += f[j - m][static_cast<size_t>(n - delta + i)] * a(BigRational(n));
                    }
                if (!acc.isZero()) return false;
            }
        }
        InitialGrid grid;
        for (int j = l; j <= rr; ++j)
            grid[j] = std::vector<ZetaValue>(f[j].begin(), f[j].begin() + ld.o);
        auto direct = unrollEps(r, grid, l, rr, delta + nWindow);
        for (int j = l; j <= rr; ++j)
            for (long n = delta; n <= delta + nWindow; ++n)
                if (direct[j][static_cast<size_t>(n - delta)] != f[j][static_cast<size_t>(n - delta)]) return false;
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

}  // namespace epschain
