#include <doctest.h>

#include "epschain/eps_solve.hpp"
#include "epschain/expr_io.hpp"
#include "epschain/series.hpp"

using namespace epschain;

namespace {

EpsRecurrence erec(std::initializer_list<const char*> coeffs, std::map<int, Sequence> rhs = {},
                   std::optional<int> precision = std::nullopt) {
    EpsRecurrence r;
    for (auto s : coeffs) r.coeffs.push_back(parsePolynomial(s));
    r.rhs = std::move(rhs);
    r.rhsPrecision = precision;
    return r;
}

std::vector<MultiPoly> polys(std::initializer_list<const char*> l) {
    std::vector<MultiPoly> v;
    for (auto s : l) v.push_back(parsePolynomial(s));
    return v;
}

// eps^-1 prod_{k=1}^{n} k/(k+eps) through eps^prec
RationalEpsSeries gammaOracle(long n, int prec) {
    std::vector<BigRational> one(static_cast<size_t>(prec + 2), BigRational(0));
    one[0] = 1;
    RationalEpsSeries f(-1, one);
    for (long k = 1; k <= n; ++k) {
        std::vector<BigRational> d(static_cast<size_t>(prec + 2), BigRational(0));
        d[0] = 1;
        d[1] = BigRational(1, k);
        f = f / RationalEpsSeries(0, d);
    }
    return f;
}

}  // namespace

TEST_CASE("normalization and leading data") {
    auto n1 = normalizeEps(erec({"eps", "eps(n+1)"}, {{0, Sequence(Expr(1))}}, 3));
    CHECK(n1.coeffs == polys({"1", "n+1"}));
    CHECK(n1.rhs.count(-1) == 1);
    CHECK(*n1.rhsPrecision == 2);

    auto r2 = erec({"1", "n+1"});
    CHECK(normalizeEps(r2).coeffs == r2.coeffs);

    CHECK(normalizeEps(erec({"eps^2", "eps n", "eps^3"})).coeffs == polys({"eps", "n", "eps^2"}));
    CHECK_THROWS_AS(normalizeEps(erec({"0", "0"})), std::invalid_argument);

    auto ld1 = leadingData(erec({"1", "n-3", "eps(n+1)"}));
    CHECK(ld1.o == 1);
    CHECK(ld1.delta == 4);
    auto ld2 = leadingData(erec({"1", "n+1"}));
    CHECK(ld2.o == 1);
    CHECK(ld2.delta == 0);
    auto ld3 = leadingData(erec({"1", "(n-2)(n-5)"}));
    CHECK(ld3.delta == 6);
}

TEST_CASE("gamma product expansion") {
    auto r = erec({"-(n+1)", "n+1+eps"});
    InitialGrid init{{-1, {ZetaValue(1)}}, {0, {ZetaValue(0)}}, {1, {ZetaValue(0)}}};
    auto res = epsExpandSolve(r, init, -1, 1);
    REQUIRE(res.ok());
    const auto& e = res.expansion;
    CHECK(equalCanonical(e.at(-1).expr, Expr(1)));
    CHECK(equalCanonical(e.at(0).expr, -Expr::harmonic({1})));
    Expr f1 = (Expr::harmonic({1}) * Expr::harmonic({1}) + Expr::harmonic({2})) * Expr(BigRational(1, 2));
    CHECK(equalCanonical(e.at(1).expr, f1));
    for (long n = 0; n <= 20; ++n) {
        auto o = gammaOracle(n, 1);
        for (int j = -1; j <= 1; ++j) CHECK(e.at(j).at(n) == ZetaValue(o[j]));
    }
    CHECK(verifyExpansion(r, e, 30));

    auto bad = e;
    bad.coefficients[1] = Sequence(bad.coefficients[1].expr + Expr(1));
    CHECK_FALSE(verifyExpansion(r, bad, 30));

    // a changed initial value changes the expansion
    InitialGrid init2 = init;
    init2[0] = {ZetaValue(1)};
    auto res2 = epsExpandSolve(r, init2, -1, 1);
    REQUIRE(res2.ok());
    CHECK(res2.expansion.at(0).at(5) != e.at(0).at(5));
    CHECK(verifyExpansion(r, res2.expansion, 20));
}

TEST_CASE("simple expansions") {
    // eps-free operator with rhs 1
    auto r = erec({"-1", "1"}, {{0, Sequence(Expr(1))}});
    auto res = epsExpandSolve(r, {{0, {ZetaValue(0)}}}, 0, 0);
    REQUIRE(res.ok());
    CHECK(equalCanonical(res.expansion.at(0).expr, Expr::var()));

    // no coupling: each order solves the same recurrence
    auto r2 = erec({"-2", "1"});
    auto res2 = epsExpandSolve(r2, {{0, {ZetaValue(1)}}, {1, {ZetaValue(3)}}}, 0, 1);
    REQUIRE(res2.ok());
    CHECK(equalCanonical(res2.expansion.at(1).expr, Expr::power(2) * Expr(3)));

    EpsExpansion zero;
    zero.startOrder = 0;
    zero.coefficients = {Sequence(Expr()), Sequence(Expr())};
    CHECK(verifyExpansion(erec({"-1", "1"}), zero, 10));
    CHECK(verifyExpansion(erec({"0", "0"}), zero, 10));
}

TEST_CASE("eps-suppressed higher shifts") {
    // eps F(n+2) + (n+1) F(n+1) - (n+1) F(n) = 0, o = 1 < d = 2
    auto r = erec({"-(n+1)", "n+1", "eps"});
    InitialGrid init{{0, {ZetaValue(1)}}, {1, {ZetaValue(0)}}, {2, {ZetaValue(BigRational(1, 2))}}};
    auto res = epsExpandSolve(r, init, 0, 2);
    REQUIRE(res.ok());
    CHECK(verifyExpansion(r, res.expansion, 30));
    auto direct = unrollEps(r, init, 0, 2, 40);
    for (int j = 0; j <= 2; ++j)
        for (long n = 0; n <= 40; ++n) CHECK(res.expansion.at(j).at(n) == direct[j][static_cast<size_t>(n)]);
}

TEST_CASE("zeta-valued initial data and consistency checks") {
    auto r = erec({"-(n+1)", "n+1+eps"});
    InitialGrid init{{-1, {ZetaValue(1)}}, {0, {ZetaValue::zeta(2)}}};
    auto res = epsExpandSolve(r, init, -1, 0);
    REQUIRE(res.ok());
    CHECK(res.expansion.at(0).at(3) == ZetaValue::zeta(2) - ZetaValue(BigRational(11, 6)));

    // an extra value F_j(delta + o) is checked
    InitialGrid extra{{-1, {ZetaValue(1), ZetaValue(1)}}};
    CHECK(epsExpandSolve(r, extra, -1, -1).ok());
    InitialGrid wrong{{-1, {ZetaValue(1), ZetaValue(2)}}};
    CHECK_THROWS_AS(epsExpandSolve(r, wrong, -1, -1), std::invalid_argument);
    CHECK_THROWS_AS(epsExpandSolve(r, {{-1, {ZetaValue(1)}}}, -1, 0), std::invalid_argument);

    // dividing by eps demands one more rhs order
    auto s = erec({"-eps", "eps"}, {{1, Sequence(Expr(1))}}, 1);
    CHECK_THROWS_AS(epsExpandSolve(s, {{0, {ZetaValue(0)}}, {1, {ZetaValue(0)}}}, 0, 1), std::invalid_argument);
    auto s0 = epsExpandSolve(s, {{0, {ZetaValue(0)}}}, 0, 0);
    REQUIRE(s0.ok());
    CHECK(equalCanonical(s0.expansion.at(0).expr, Expr::var()));
}

TEST_CASE("constructive failure") {
    auto r = erec({"1", "1", "-1"});
    auto res = epsExpandSolve(r, {{0, {ZetaValue(0), ZetaValue(1)}}}, 0, 0);
    REQUIRE_FALSE(res.ok());
    CHECK(res.failure->order == 0);
    CHECK_FALSE(res.failure->partial.complete);
}
