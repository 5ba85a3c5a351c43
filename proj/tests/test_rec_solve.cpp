#include <doctest.h>

#include "epschain/expr_io.hpp"
#include "epschain/linalg.hpp"
#include "epschain/rec_solve.hpp"

using namespace epschain;

namespace {

URatFun ur(const char* s) { return URatFun::fromMulti(parseRationalFunction(s), "n"); }

LinearRecurrence rec(std::initializer_list<const char*> coeffs, Sequence rhs = Sequence()) {
    std::vector<MultiPoly> c;
    for (auto s : coeffs) c.push_back(parsePolynomial(s));
    return LinearRecurrence(c, std::move(rhs));
}

Expr ex(const char* s) { return parseExpr(s); }

bool solves(const LinearRecurrence& r, const Expr& e, bool withRhs, long from, long to) {
    for (long n = from; n <= to; ++n) {
        ZetaValue acc;
        for (int i = 0; i <= r.order(); ++i) acc += eval(e, n + i) * r.coeffValue(i, n);
        if (withRhs) acc -= r.rhs.at(n);
        if (!acc.isZero()) return false;
    }
    return true;
}

// e1 - e2 is constant on from..to
bool differByConstant(const Expr& a, const Expr& b, long from, long to) {
    ZetaValue c = eval(a, from) - eval(b, from);
    for (long n = from + 1; n <= to; ++n)
        if (eval(a, n) - eval(b, n) != c) return false;
    return true;
}

size_t rankOn(const std::vector<Expr>& es, long from, long len) {
    Matrix<BigRational> m;
    for (const auto& e : es) {
        std::vector<BigRational> row;
        for (long n = from; n < from + len; ++n) row.push_back(eval(e, n).rational());
        m.push_back(row);
    }
    return matrixRank(m, static_cast<size_t>(len));
}

URatFun det(const std::vector<std::vector<URatFun>>& m) {
    if (m.size() == 1) return m[0][0];
    URatFun acc;
    for (size_t c = 0; c < m.size(); ++c) {
        std::vector<std::vector<URatFun>> minor;
        for (size_t r = 1; r < m.size(); ++r) {
            std::vector<URatFun> row;
            for (size_t k = 0; k < m.size(); ++k)
                if (k != c) row.push_back(m[r][k]);
            minor.push_back(row);
        }
        URatFun t = m[0][c] * det(minor);
        acc += (c % 2 ? -t : t);
    }
    return acc;
}

// the operator whose solutions are the hypergeometric terms with these ratios
LinearRecurrence annihilator(const std::vector<URatFun>& ratios) {
    size_t d = ratios.size();
    std::vector<std::vector<URatFun>> rows;
    for (const auto& r : ratios) {
        std::vector<URatFun> row{URatFun(1)};
        URatFun rho(1);
        for (size_t k = 1; k <= d; ++k) {
            rho *= r.shift(BigRational(static_cast<long>(k - 1)));
            row.push_back(rho);
        }
        rows.push_back(row);
    }
    std::vector<URatFun> a;
    for (size_t k = 0; k <= d; ++k) {
        std::vector<std::vector<URatFun>> minor;
        for (const auto& row : rows) {
            std::vector<URatFun> m;
            for (size_t j = 0; j <= d; ++j)
                if (j != k) m.push_back(row[j]);
            minor.push_back(m);
        }
        URatFun c = det(minor);
        a.push_back(k % 2 ? -c : c);
    }
    UPoly l(1);
    for (const auto& c : a) l = lcm(l, c.den());
    std::vector<MultiPoly> coeffs;
    for (const auto& c : a) coeffs.push_back(nPoly((c * URatFun(l)).num()));
    LinearRecurrence r(coeffs);
    r.normalize();
    return r;
}

}  // namespace

TEST_CASE("polynomial solutions") {
    auto s1 = polySolutions(rec({"-1", "1"}));
    REQUIRE(s1.size() == 1);
    CHECK(s1[0] == UPoly(1));

    auto s2 = polySolutions(rec({"-(n+1)", "n"}));
    REQUIRE(s2.size() == 1);
    CHECK(s2[0] == UPoly::x());

    auto s3 = polySolutions(rec({"1", "-2", "1"}));
    REQUIRE(s3.size() == 2);
    CHECK(s3[0] == UPoly(1));
    CHECK(s3[1] == UPoly::x());

    CHECK(polySolutions(rec({"-2", "1"})).empty());
    // n^2 - n from (n-1) F(n+1) - (n+1) F(n) = 0
    auto s4 = polySolutions(rec({"-(n+1)", "n-1"}));
    REQUIRE(s4.size() == 1);
    CHECK(s4[0] == UPoly::x() * UPoly::linear(1, -1));
}

TEST_CASE("rational solutions") {
    auto r1 = rationalSolutions(rec({"-n", "n+1"}));
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == ur("1/n"));

    CHECK(rationalSolutions(rec({"-2", "1"})).empty());

    auto p = rationalParticular(rec({"-1", "1"}, Sequence(ex("-1/(n(n+1))"))));
    REQUIRE(p.has_value());
    CHECK((*p - ur("1/n")).isConstant());

    // 1/((n+1)(n+2)) solves (n+3) F(n+1) - (n+1) F(n) = 0
    auto r2 = rationalSolutions(rec({"-(n+1)", "n+3"}));
    REQUIRE(r2.size() == 1);
    CHECK(r2[0] == ur("1/((n+1)(n+2))"));
}

TEST_CASE("hypergeometric solutions") {
    auto h1 = hypergeomSolutions(rec({"-2", "1"}));
    REQUIRE(h1.size() == 1);
    CHECK(h1[0].ratio == URatFun(2));
    CHECK(equalCanonical(h1[0].expr, Expr::power(2)));

    auto h2 = hypergeomSolutions(rec({"-(n+1)", "n+2"}));
    REQUIRE(h2.size() == 1);
    CHECK(h2[0].ratio == ur("(n+1)/(n+2)"));
    CHECK(equalCanonical(h2[0].expr, ex("1/(n+1)")));

    auto h3 = hypergeomSolutions(rec({"n+1", "-(2n+3)", "n+2"}));
    REQUIRE(h3.size() == 1);
    CHECK(h3[0].ratio == URatFun(1));
}

TEST_CASE("hypergeometric corpus") {
    std::vector<std::vector<const char*>> corpus = {
        {"2"},
        {"(n+1)/(n+2)"},
        {"1", "2"},
        {"2", "3"},
        {"n+1", "2"},
        {"-1", "(n+1)/(n+2)"},
        {"1/(n+1)", "3"},
        {"(2n+1)(2n+2)/(n+1)^2", "1"},
        {"(n+2)/(n+1)", "-2"},
        {"1", "-1", "2"},
        {"n+1", "1/(n+1)", "2"},
        {"(n+3)/(n+1)", "1/2"},
        {"-(n+1)/(n+3)", "5"},
        {"(2n+3)/(2n+1)", "-1"},
        {"(n+1)/2", "1/3"},
    };
    for (const auto& ratios : corpus) {
        std::vector<URatFun> rs;
        for (auto s : ratios) rs.push_back(ur(s));
        auto r = annihilator(rs);
        CAPTURE(r.toString());
        auto hs = hypergeomSolutions(r);
        REQUIRE(hs.size() == rs.size());
        for (const auto& want : rs) {
            bool found = false;
            for (const auto& h : hs) found = found || h.ratio == want;
            CHECK(found);
        }
        for (const auto& h : hs) CHECK(solves(r, h.expr, false, r.delta() + 2, r.delta() + 32));
        auto basis = dalembertSolutions(r);
        CHECK(basis.complete);
    }
}

TEST_CASE("d'Alembertian solutions") {
    auto r = rec({"n+1", "-(2n+3)", "n+2"});
    auto b = dalembertSolutions(r);
    CHECK(b.complete);
    REQUIRE(b.homogeneous.size() == 2);
    CHECK(equalCanonical(b.homogeneous[0], Expr(1)));
    CHECK(differByConstant(b.homogeneous[1], Expr::harmonic({1}), 0, 30));
    for (const auto& e : b.homogeneous) CHECK(solves(r, e, false, 1, 30));
    CHECK(rankOn(b.homogeneous, b.validFrom, 4) == 2);

    auto b2 = dalembertSolutions(rec({"2", "-3", "1"}));
    REQUIRE(b2.homogeneous.size() == 2);
    CHECK(equalCanonical(b2.homogeneous[0], Expr(1)));
    CHECK(equalCanonical(b2.homogeneous[1], Expr::power(2)));

    auto b3 = dalembertSolutions(rec({"-(n+1)", "1"}));
    REQUIRE(b3.homogeneous.size() == 1);
    CHECK(b3.homogeneous[0].kind() != Expr::Kind::Sum);
    CHECK(solves(rec({"-(n+1)", "1"}), b3.homogeneous[0], false, 0, 30));

    // no hypergeometric solution: F(n+2) = F(n+1) + F(n)
    auto fib = dalembertSolutions(rec({"1", "1", "-1"}));
    CHECK_FALSE(fib.complete);
    CHECK(fib.homogeneous.empty());

    // (n+1) S1(n) and n+1 from peeling n+1
    auto r4 = rec({"(n+2)(n+3)", "-(2n+3)(n+3)", "(n+2)^2"});
    auto b4 = dalembertSolutions(r4);
    CHECK(b4.complete);
    for (const auto& e : b4.homogeneous) CHECK(solves(r4, e, false, b4.validFrom, b4.validFrom + 30));
    CHECK(rankOn(b4.homogeneous, b4.validFrom, 4) == 2);
}

TEST_CASE("particular solutions") {
    auto p1 = particularSolution(rec({"-1", "1"}, Sequence(ex("1/(n+1)"))));
    REQUIRE(p1.has_value());
    CHECK(differByConstant(*p1, Expr::harmonic({1}), 0, 30));

    auto p2 = particularSolution(rec({"-2", "1"}, Sequence(Expr(1))));
    REQUIRE(p2.has_value());
    CHECK(equalCanonical(*p2, Expr(-1)));

    // the solution of F(n+1) - F(n) = S1(n)/(n+1) is (S1^2 - S2)/2
    auto r3 = rec({"-1", "1"}, Sequence(Expr::harmonic({1}) * Expr(ur("1/(n+1)"))));
    auto p3 = particularSolution(r3);
    REQUIRE(p3.has_value());
    CHECK(solves(r3, *p3, true, 0, 25));
    Expr want = (Expr::harmonic({1}) * Expr::harmonic({1}) - Expr::harmonic({2})) * Expr(BigRational(1, 2));
    CHECK(differByConstant(*p3, want, 0, 25));

    // order two with a nested-sum rhs
    auto r4 = rec({"n+1", "-(2n+3)", "n+2"}, Sequence(Expr::harmonic({1})));
    auto p4 = particularSolution(r4);
    REQUIRE(p4.has_value());
    CHECK(solves(r4, *p4, true, 0, 30));
}

TEST_CASE("initial values") {
    auto r = rec({"n+1", "-(2n+3)", "n+2"});
    auto s = solveWithInitialValues(r, {ZetaValue(1), ZetaValue(BigRational(3, 2))}, 1);
    REQUIRE(s.has_value());
    for (long n = 1; n <= 50; ++n) CHECK(s->at(n) == eval(Expr::harmonic({1}), n));
    CHECK(equalCanonical(s->expr, Expr::harmonic({1})));

    auto z = solveWithInitialValues(rec({"-2", "1"}), {ZetaValue(0)});
    REQUIRE(z.has_value());
    CHECK(isZeroCanonical(z->expr));

    auto g = solveWithInitialValues(rec({"-2", "1"}, Sequence(Expr(1))), {ZetaValue(0)});
    REQUIRE(g.has_value());
    CHECK(equalCanonical(g->expr, Expr::power(2) - Expr(1)));

    // zeta-valued initial data
    auto zr = rec({"-1", "1"}, Sequence(ex("1/(n+1)^2")));
    auto zs = solveWithInitialValues(zr, {ZetaValue::zeta(2)});
    REQUIRE(zs.has_value());
    for (long n = 0; n <= 20; ++n) CHECK(zs->at(n) == ZetaValue::zeta(2) + eval(Expr::harmonic({2}), n));

    // uniqueness against unrolling
    auto r5 = rec({"(n+2)(n+3)", "-(2n+3)(n+3)", "(n+2)^2"}, Sequence(Expr(1)));
    auto s5 = solveWithInitialValues(r5, {ZetaValue(1), ZetaValue(BigRational(-2, 3))});
    REQUIRE(s5.has_value());
    auto direct = r5.unroll({ZetaValue(1), ZetaValue(BigRational(-2, 3))}, 0, 50);
    for (long n = 0; n <= 50; ++n) CHECK(s5->at(n) == direct[static_cast<size_t>(n)]);

    CHECK_THROWS_AS(solveWithInitialValues(r, {ZetaValue(1)}), std::invalid_argument);
    CHECK_FALSE(solveWithInitialValues(rec({"1", "1", "-1"}), {ZetaValue(0), ZetaValue(1)}).has_value());
}
