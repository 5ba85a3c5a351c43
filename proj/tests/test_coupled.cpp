#include <doctest.h>

#include "epschain/coupled.hpp"
#include "epschain/expr_io.hpp"
#include "epschain/guess.hpp"

#include <random>

using namespace epschain;

namespace {

RationalFunction rf(const char* s) { return parseRationalFunction(s); }

CoupledODESystem sys(std::initializer_list<std::initializer_list<const char*>> rows) {
    CoupledODESystem s;
    for (const auto& row : rows) {
        std::vector<RationalFunction> r;
        for (auto e : row) r.push_back(rf(e));
        s.A.push_back(std::move(r));
    }
    return s;
}

RationalEpsSeries series(std::vector<BigRational> c, int start = 0) { return RationalEpsSeries(start, std::move(c)); }

// proportional up to a nonzero constant
bool proportional(const std::vector<MultiPoly>& a, const std::vector<MultiPoly>& b) {
    if (a.size() != b.size()) return false;
    std::optional<BigRational> f;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].isZero() != b[i].isZero()) return false;
        if (a[i].isZero()) continue;
        BigRational q = a[i].leadingCoefficient() / b[i].leadingCoefficient();
        if (f && *f != q) return false;
        f = q;
        if (!(a[i] == b[i] * q)) return false;
    }
    return true;
}

void checkAgainstOracle(const CoupledODESystem& s, const SystemExpansion& e,
                        const std::vector<std::vector<RationalEpsSeries>>& oracle, int l, int r, long K) {
    for (int i = 0; i < s.size(); ++i)
        for (int j = l; j <= r; ++j)
            for (long k = 0; k <= K; ++k)
                CHECK(e.components[static_cast<size_t>(i)].at(j).at(k) ==
                      ZetaValue(oracle[static_cast<size_t>(i)][static_cast<size_t>(k)][j]));
}

}  // namespace

TEST_CASE("uncoupling") {
    auto one = uncouple(sys({{"eps/(1-x)"}}));
    REQUIRE(one.blocks.size() == 1);
    CHECK(proportional(one.blocks[0].coeffs, {parsePolynomial("-eps"), parsePolynomial("1-x")}));
    CHECK(one.blocks[0].rhs.empty());

    auto two = uncouple(sys({{"0", "1"}, {"0", "1"}}));
    REQUIRE(two.blocks.size() == 1);
    CHECK(two.blocks[0].component == 0);
    CHECK(proportional(two.blocks[0].coeffs, {MultiPoly(), parsePolynomial("-1"), parsePolynomial("1")}));
    REQUIRE(two.backSubst.size() == 2);
    CHECK(two.backSubst[1] == LinComb{{{"f1", 1}, RationalFunction(1)}});
    CHECK(two.backSubst[0] == LinComb{{{"f1", 0}, RationalFunction(1)}});

    // diagonal: two blocks, the second with no dependence on the first
    auto diag = uncouple(sys({{"eps/(1-x)", "0"}, {"0", "2eps/(1-x)"}}));
    REQUIRE(diag.blocks.size() == 2);
    CHECK(diag.blocks[1].component == 1);
    CHECK(diag.blocks[1].rhs.empty());
    CHECK(diag.blocks[1].order() == 1);

    // lower triangular: the second block sees f1
    auto tri = uncouple(sys({{"eps", "0"}, {"1", "0"}}));
    REQUIRE(tri.blocks.size() == 2);
    CHECK(tri.blocks[1].rhs.count({"f1", 0}) == 1);

    CHECK_THROWS_AS(uncouple(sys({{"1", "2"}})), std::invalid_argument);
}

TEST_CASE("ODE to recurrence") {
    ScalarODE exp1;
    exp1.coeffs = {parsePolynomial("-1"), parsePolynomial("1")};
    auto r1 = odeToRecurrence(exp1, {});
    CHECK(proportional(r1.coeffs, {parsePolynomial("-1"), parsePolynomial("n+1")}));

    ScalarODE g;
    g.coeffs = {parsePolynomial("-eps"), parsePolynomial("1-x")};
    auto r2 = odeToRecurrence(g, {});
    CHECK(proportional(r2.coeffs, {parsePolynomial("-(n+eps)"), parsePolynomial("n+1")}));

    // f' = h with H_0(k) = 1
    ScalarODE inh;
    inh.coeffs = {MultiPoly(), MultiPoly(1)};
    inh.rhs[{"h", 0}] = RationalFunction(1);
    KnownFunction h;
    h.coefficients[0] = Sequence(Expr(1));
    auto r3 = odeToRecurrence(inh, {{"h", h}});
    // n F(n) = H(n-1): the index of F is the coefficient index
    CHECK(proportional(r3.coeffs, {parsePolynomial("n")}));
    REQUIRE(r3.rhs.count(0) == 1);
    CHECK(r3.rhs.at(0).at(4) == ZetaValue(1));

    // x h' contributes k H(k)
    ScalarODE d;
    d.coeffs = {MultiPoly(1)};
    d.rhs[{"h", 1}] = rf("x");
    auto r4 = odeToRecurrence(d, {{"h", h}});
    CHECK(r4.rhs.at(0).at(5) == ZetaValue(5));
    CHECK(r4.rhs.at(0).at(0) == ZetaValue(0));
}

TEST_CASE("system (1-x) f' = eps f") {
    auto s = sys({{"eps/(1-x)"}});
    auto oracle = seriesOracle(s, {series({1, 0, 0})}, 30, 2);
    auto init = initialFromSeries(s, oracle, 0, 2, 3);
    auto e = solveSystemExpansion(s, init, 0, 2);
    REQUIRE(e.ok());
    checkAgainstOracle(s, e, oracle, 0, 2, 30);
    const auto& f = e.components[0];
    for (long k = 1; k <= 30; ++k) {
        CHECK(f.at(0).at(k) == ZetaValue(0));
        CHECK(f.at(1).at(k) == ZetaValue(BigRational(1, k)));
        CHECK(f.at(2).at(k) == ZetaValue(eval(Expr::harmonic({1}), k - 1) * ZetaValue(BigRational(1, k))));
    }
    CHECK(f.at(0).at(0) == ZetaValue(1));
    CHECK(f.at(1).at(0) == ZetaValue(0));
    CHECK(equalCanonical(f.at(1).expr, parseExpr("1/n")));

    auto access = [&](int i, int j, long k) { return e.components[static_cast<size_t>(i)].at(j).at(k); };
    CHECK(satisfiesSystem(s, access, 0, 2, 25));
    auto off = [&](int i, int j, long k) { return access(i, j, k) + ZetaValue(j == 2 && k == 7 ? 1 : 0); };
    CHECK_FALSE(satisfiesSystem(s, off, 0, 2, 25));
}

TEST_CASE("two components through one cyclic vector") {
    // f1' = f2, (1-x) f2' = eps f2
    auto s = sys({{"0", "1"}, {"0", "eps/(1-x)"}});
    auto oracle = seriesOracle(s, {series({0, 1, 0}), series({1, 0, 0})}, 30, 2);
    auto init = initialFromSeries(s, oracle, 0, 2, 4);
    auto e = solveSystemExpansion(s, init, 0, 2);
    REQUIRE(e.ok());
    checkAgainstOracle(s, e, oracle, 0, 2, 30);

    auto m = largeMoments(s, 30, init, 0, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j <= 2; ++j)
            for (long k = 0; k <= 30; ++k)
                CHECK(m.at(i, j)[static_cast<size_t>(k)] == oracle[static_cast<size_t>(i)][static_cast<size_t>(k)][j]);
}

TEST_CASE("diagonal and triangular systems") {
    auto s = sys({{"eps/(1-x)", "0"}, {"0", "2eps/(1-x)"}});
    auto oracle = seriesOracle(s, {series({1, 0, 0}), series({1, 1, 0})}, 25, 2);
    auto e = solveSystemExpansion(s, initialFromSeries(s, oracle, 0, 2, 2), 0, 2);
    REQUIRE(e.ok());
    checkAgainstOracle(s, e, oracle, 0, 2, 25);

    auto t = sys({{"eps/(1-x)", "0"}, {"1/(1-x)", "0"}});
    auto o2 = seriesOracle(t, {series({1, 0, 0}), series({0, 0, 0})}, 25, 2);
    auto e2 = solveSystemExpansion(t, initialFromSeries(t, o2, 0, 2, 3), 0, 2);
    REQUIRE(e2.ok());
    checkAgainstOracle(t, e2, o2, 0, 2, 25);
}

TEST_CASE("known inhomogeneity") {
    // f' = h, H(k) = 1/(k+1): F(k) = 1/k^2
    CoupledODESystem s = sys({{"0"}});
    s.g = {{InhomogeneousTerm{"h", RationalFunction(1)}}};
    KnownFunction h;
    h.coefficients[0] = Sequence(parseExpr("1/(n+1)"));
    s.known["h"] = h;
    SystemInitial init{{0, {{0, {ZetaValue(0)}}}}};
    auto e = solveSystemExpansion(s, init, 0, 0);
    REQUIRE(e.ok());
    CHECK(e.components[0].at(0).at(0) == ZetaValue(0));
    for (long k = 1; k <= 30; ++k) CHECK(e.components[0].at(0).at(k) == ZetaValue(BigRational(1, k * k)));

    // a truncated h limits the reachable order
    s.known["h"].precision = 0;
    CHECK_THROWS_AS(solveSystemExpansion(s, init, 0, 1), std::invalid_argument);

    // moments only
    CoupledODESystem s2 = sys({{"0"}});
    s2.g = s.g;
    KnownFunction hm;
    for (long k = 0; k <= 40; ++k) hm.moments.push_back(series({BigRational(1, k + 1)}));
    s2.known["h"] = hm;
    auto m = largeMoments(s2, 30, init, 0, 0);
    for (long k = 1; k <= 30; ++k) CHECK(m.at(0, 0)[static_cast<size_t>(k)] == BigRational(1, k * k));
    CHECK_THROWS_AS(largeMoments(s2, 50, init, 0, 0), std::invalid_argument);
}

TEST_CASE("back-substitution at coefficient level") {
    KnownFunction f1;
    f1.coefficients[0] = Sequence(parseExpr("1/(n+1)"));
    std::map<std::string, KnownFunction> in{{"f1", f1}};

    auto d = backsubstituteCoefficients({{{"f1", 1}, RationalFunction(1)}}, in, 0, 0);
    for (long k = 0; k <= 20; ++k) CHECK(d.at(0).at(k) == ZetaValue(BigRational(k + 1, k + 2)));

    auto xf = backsubstituteCoefficients({{{"f1", 0}, rf("x")}}, in, 0, 0);
    CHECK(xf.at(0).at(0) == ZetaValue(0));
    for (long k = 1; k <= 20; ++k) CHECK(xf.at(0).at(k) == ZetaValue(BigRational(1, k)));

    auto ps = backsubstituteCoefficients({{{"f1", 0}, rf("1/(1-x)")}}, in, 0, 0);
    for (long k = 0; k <= 20; ++k) CHECK(ps.at(0).at(k) == eval(Expr::harmonic({1}), k + 1));
    CHECK(equalCanonical(ps.at(0).expr, shift(Expr::harmonic({1}), 1)));

    // f1 / x is not a power series unless F1(0) = 0
    CHECK_THROWS_AS(backsubstituteCoefficients({{{"f1", 0}, rf("1/x")}}, in, 0, 0), std::domain_error);
    auto q2 = backsubstituteCoefficients({{{"f1", 0}, rf("1-1/(1-x)")}}, in, 0, 0);
    CHECK(q2.at(0).at(3) == ZetaValue(BigRational(1, 4)) - eval(Expr::harmonic({1}), 4));
}

TEST_CASE("large moments") {
    // exponential
    auto e = sys({{"1"}});
    SystemInitial init{{0, {{0, {ZetaValue(1)}}}}};
    auto m = largeMoments(e, 20, init, 0, 0);
    BigRational fact = 1;
    for (long k = 0; k <= 20; ++k) {
        if (k > 0) fact = fact * BigRational(k);
        CHECK(m.at(0, 0)[static_cast<size_t>(k)] == BigRational(1) / fact);
    }
    auto m0 = largeMoments(e, 0, init, 0, 0);
    CHECK(m0.at(0, 0).size() == 1);
    CHECK(m0.at(0, 0)[0] == BigRational(1));

    auto s = sys({{"eps/(1-x)"}});
    auto oracle = seriesOracle(s, {series({1, 0, 0})}, 10, 2);
    auto t = largeMoments(s, 10, initialFromSeries(s, oracle, 0, 2, 1), 0, 2);
    for (int j = 0; j <= 2; ++j)
        for (long k = 0; k <= 10; ++k) CHECK(t.at(0, j)[static_cast<size_t>(k)] == oracle[0][static_cast<size_t>(k)][j]);
}

TEST_CASE("random systems against the series oracle") {
    std::mt19937 rng(7);
    const char* entries[] = {"0", "1", "eps", "eps/(1-x)", "2eps/(1+x)", "x", "eps x/(1-x)", "-eps", "1/(1-2x)"};
    for (int lam = 1; lam <= 4; ++lam) {
        CoupledODESystem s;
        for (int i = 0; i < lam; ++i) {
            std::vector<RationalFunction> row;
            for (int c = 0; c < lam; ++c) row.push_back(rf(entries[rng() % 9]));
            s.A.push_back(std::move(row));
        }
        std::vector<RationalEpsSeries> f0;
        for (int i = 0; i < lam; ++i)
            f0.push_back(series({BigRational(static_cast<long>(rng() % 5)), BigRational(static_cast<long>(rng() % 3)), 0, 0, 0, 0, 0, 0}));
        // leader equations divided by eps need higher orders
        auto oracle = seriesOracle(s, f0, 60, 7);
        auto init = initialFromSeries(s, oracle, 0, 2, 60);
        auto m = largeMoments(s, 40, init, 0, 2);
        CAPTURE(lam);
        for (int i = 0; i < lam; ++i)
            for (int j = 0; j <= 2; ++j)
                for (long k = 0; k <= 40; ++k)
                    CHECK(m.at(i, j)[static_cast<size_t>(k)] == oracle[static_cast<size_t>(i)][static_cast<size_t>(k)][j]);
    }
}

TEST_CASE("recurrence guessing") {
    // harmonic numbers: (n+2) S(n+2) - (2n+3) S(n+1) + (n+1) S(n) = 0
    std::vector<BigRational> h;
    BigRational acc = 0;
    for (long k = 0; k < 60; ++k) {
        if (k > 0) acc = acc + BigRational(1, k);
        h.push_back(acc);
    }
    auto g = guessRecurrence(h, 3, 2);
    REQUIRE(g);
    CHECK(g->order() == 2);
    CHECK(proportional(g->coeffs, {parsePolynomial("n+1"), parsePolynomial("-(2n+3)"), parsePolynomial("n+2")}));

    std::vector<BigRational> p;
    for (long k = 0; k < 40; ++k) p.push_back(BigRational(1) * BigRational(1L << k));
    auto g2 = guessRecurrence(p, 2, 2);
    REQUIRE(g2);
    CHECK(g2->order() == 1);
    CHECK(proportional(g2->coeffs, {MultiPoly(-2), MultiPoly(1)}));

    std::mt19937 rng(3);
    std::vector<BigRational> r;
    for (int k = 0; k < 60; ++k) r.push_back(BigRational(static_cast<long>(rng() % 1000)));
    CHECK_FALSE(guessRecurrence(r, 2, 2));
    CHECK_THROWS_AS(guessRecurrence(std::vector<BigRational>(5, BigRational(1)), 2, 2), std::invalid_argument);
}
