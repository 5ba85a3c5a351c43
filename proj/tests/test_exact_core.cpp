#include "doctest.h"

#include "epschain/linalg.hpp"
#include "epschain/ratfun.hpp"
#include "epschain/series.hpp"
#include "epschain/value.hpp"

#include <random>
#include <set>

using namespace epschain;

namespace {

UPoly fromRoots(const std::vector<long>& roots, const BigRational& lead = 1) {
    UPoly p(lead);
    for (long r : roots) p *= UPoly::linear(1, -r);
    return p;
}

MultiPoly P(const char* s) { return parsePolynomial(s); }
RationalFunction R(const char* s) { return parseRationalFunction(s); }

MultiPoly randomPoly(std::mt19937& rng, const std::vector<std::string>& vars, int terms, int maxDeg) {
    std::uniform_int_distribution<int> deg(0, maxDeg), coef(-5, 5);
    MultiPoly p;
    for (int t = 0; t < terms; ++t) {
        MultiPoly m(coef(rng));
        for (const auto& v : vars) m *= MultiPoly::variable(v).pow(static_cast<unsigned>(deg(rng)));
        p += m;
    }
    return p;
}

}  // namespace

TEST_CASE("rational literals round trip") {
    CHECK(parseRational("-3/6") == BigRational(-1, 2));
    CHECK(toString(parseRational("10/4")) == "5/2");
    CHECK(toString(parseRational("7")) == "7");
    CHECK_THROWS_AS(parseRational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parseRational("a/2"), std::invalid_argument);
    CHECK(ratPow(BigRational(2, 3), -2) == BigRational(9, 4));
    CHECK(binomial(6, 2) == 15);
    CHECK(binomial(-2, 3) == -4);
}

TEST_CASE("univariate polynomial arithmetic") {
    UPoly x = UPoly::x();
    UPoly p = x * x - UPoly(1);
    UPoly q = x - UPoly(1);
    auto [quo, rem] = UPoly::divRem(p, q);
    CHECK(quo == x + UPoly(1));
    CHECK(rem.isZero());
    CHECK(gcd(p, x * x - UPoly(2) * x + UPoly(1)) == q);
    CHECK(p.shift(1) == x * x + UPoly(2) * x);
    CHECK(p.derivative() == UPoly(2) * x);
    CHECK((UPoly(3) * x + UPoly(BigRational(3, 2))).primitive() == UPoly(2) * x + UPoly(1));
    CHECK(p.toString("n") == "n^2 - 1");
}

TEST_CASE("integer and rational roots") {
    UPoly p = fromRoots({3, -5, 3}) * UPoly::linear(2, -1);
    CHECK(integerRoots(p) == std::vector<long>{-5, 3});
    auto rr = rationalRoots(p);
    REQUIRE(rr.size() == 3);
    CHECK(rr[1] == BigRational(1, 2));
    CHECK(integerRoots(UPoly::x() * UPoly::x() + UPoly(1)).empty());
    CHECK(integerRoots(fromRoots({0, 0, 7})) == std::vector<long>{0, 7});
    CHECK(integerRoots(fromRoots({123456789, -2})) == std::vector<long>{-2, 123456789});
}

TEST_CASE("integer roots agree with brute force") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> root(-40, 40), extra(-9, 9);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<long> roots;
        int nr = 1 + trial % 4;
        for (int i = 0; i < nr; ++i) roots.push_back(root(rng));
        // multiply by a factor without integer roots most of the time
        UPoly p = fromRoots(roots, 3) * UPoly(std::vector<BigRational>{extra(rng) * 2 + 1, 0, 2});
        std::set<long> brute;
        for (long v = -200; v <= 200; ++v)
            if (p(v) == 0) brute.insert(v);
        auto got = integerRoots(p);
        CHECK(std::set<long>(got.begin(), got.end()) == brute);
    }
}

TEST_CASE("resultant and dispersion") {
    UPoly x = UPoly::x();
    CHECK(resultant(x - UPoly(1), x - UPoly(1)) == 0);
    CHECK(resultant(x - UPoly(1), x + UPoly(1)) != 0);
    // res(x^2 - 1, x - 2) = (2^2 - 1) up to sign
    CHECK(abs(resultant(x * x - UPoly(1), x - UPoly(2))) == 3);
    UPoly p = x * (x + UPoly(5));
    CHECK(shiftSet(p, x) == std::vector<long>{0, 5});
    CHECK(dispersion(p, x) == 5);
    CHECK(!dispersion(x, x + UPoly(BigRational(1, 2))).has_value());
    auto f = factorLinear(fromRoots({1, 1, -2}) * (x * x + UPoly(1)) * UPoly(4));
    CHECK(f.unit == 4);
    REQUIRE(f.roots.size() == 2);
    CHECK(f.roots[0] == std::make_pair(BigRational(-2), 1));
    CHECK(f.roots[1] == std::make_pair(BigRational(1), 2));
    REQUIRE(f.rest.size() == 1);
    CHECK(f.rest[0].first == x * x + UPoly(1));
}

TEST_CASE("parametric dispersion") {
    MultiPoly a = P("(k+n)(k+2)"), b = P("k + n + 3");
    auto s = shiftSet(a, b, "k");
    CHECK(s == std::vector<long>{});
    auto s2 = shiftSet(b, a, "k");
    CHECK(s2 == std::vector<long>{3});
}

TEST_CASE("multivariate polynomials") {
    MultiPoly p = P("2n(n+1)");
    CHECK(p == P("2n^2 + 2n"));
    CHECK(P("(n+k)^2") == P("n^2 + 2n*k + k^2"));
    CHECK(P("n*k + eps").vars() == std::vector<std::string>{"n", "k", "eps"});
    CHECK(P("x^2 y").degree("x") == 2);
    CHECK(P("(x+1)^3").shift("x", -1) == P("x^3"));
    CHECK(P("x^2 y + y").substitute("y", P("x - 1")) == P("x^3 - x^2 + x - 1"));
    CHECK(P("x^2 - y^2").divideExact(P("x - y")) == P("x + y"));
    CHECK(!P("x^2 + y^2").divideExact(P("x - y")).has_value());
    CHECK(P("3 x^2 y").evaluate("x", 2) == P("12y"));
}

TEST_CASE("multivariate gcd") {
    CHECK(gcd(P("(x+y)(x-y)(2x+3)"), P("(x+y)(x+1)")) == P("x+y"));
    CHECK(gcd(P("(n+k+eps)^2 (n-1)"), P("(n+k+eps)(n+2)")) == P("n+k+eps"));
    CHECK(gcd(P("6x"), P("4x^2")) == P("x"));
    std::mt19937 rng(11);
    std::vector<std::string> vars = {"n", "k", "eps"};
    for (int t = 0; t < 12; ++t) {
        MultiPoly a = randomPoly(rng, vars, 3, 2), b = randomPoly(rng, vars, 3, 2), c = randomPoly(rng, vars, 2, 2);
        if (a.isZero() || b.isZero() || c.isZero()) continue;
        MultiPoly g = gcd(a * c, b * c);
        CHECK(g.divideExact(c.primitive()).has_value());
        CHECK((a * c).divideExact(g).has_value());
        CHECK((b * c).divideExact(g).has_value());
    }
}

TEST_CASE("rational functions") {
    RationalFunction r = R("(n^2-1)/(2n-2)");
    CHECK(r == R("(n+1)/2"));
    CHECK(R("1/(n+1) - 1/(n+2)") == R("1/((n+1)(n+2))"));
    CHECK(R("(n+1)/(k+1)").shift("n", 1) == R("(n+2)/(k+1)"));
    CHECK(R("1/x").derivative("x") == R("-1/x^2"));
    CHECK(R("x/(x+1)").substitute("x", R("1/y")) == R("1/(1+y)"));
    CHECK(R("(n+k)/(n-k)").evaluateAll({{"n", 3}, {"k", 1}}) == 2);
    CHECK_THROWS_AS(R("1/(n-2)").evaluate("n", 2), std::domain_error);
    // field axioms on random samples
    std::mt19937 rng(5);
    std::vector<std::string> vars = {"n", "eps"};
    for (int t = 0; t < 10; ++t) {
        RationalFunction a(randomPoly(rng, vars, 2, 2), randomPoly(rng, vars, 2, 1) + MultiPoly(7));
        RationalFunction b(randomPoly(rng, vars, 2, 1), randomPoly(rng, vars, 2, 2) + MultiPoly(11));
        RationalFunction c(randomPoly(rng, vars, 2, 1) + MultiPoly(1));
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a - a == RationalFunction());
        if (!b.isZero()) CHECK((a / b) * b == a);
    }
}

TEST_CASE("univariate rational functions") {
    URatFun r(UPoly::x() + UPoly(1), UPoly::x() * UPoly::x() - UPoly(1));
    CHECK(r == URatFun(UPoly(1), UPoly::x() - UPoly(1)));
    CHECK(r(3) == BigRational(1, 2));
    CHECK(r.shift(1)(2) == BigRational(1, 2));
    CHECK_THROWS_AS(r(1), std::domain_error);
}

TEST_CASE("linear algebra over Q and Q(n)") {
    Matrix<BigRational> m = {{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
    auto ns = nullspace(m, 3);
    REQUIRE(ns.size() == 1);
    for (const auto& row : m) CHECK(row[0] * ns[0][0] + row[1] * ns[0][1] + row[2] * ns[0][2] == 0);
    auto sol = solveLinear<BigRational>({{1, 1}, {1, -1}}, {3, 1}, 2);
    REQUIRE(sol);
    CHECK((*sol)[0] == 2);
    CHECK((*sol)[1] == 1);
    Matrix<RationalFunction> a = {{R("n"), R("1")}, {R("1"), R("n")}};
    auto inv = inverse(a);
    REQUIRE(inv);
    CHECK((*inv)[0][0] == R("n/(n^2-1)"));
    Matrix<RationalFunction> sing = {{R("n"), R("n^2")}, {R("1"), R("n")}};
    CHECK(nullspace(sing, 2).size() == 1);
}

TEST_CASE("eps series arithmetic") {
    RationalEpsSeries one = RationalEpsSeries::constant(1, 4);
    RationalEpsSeries oneMinus(0, {1, -1, 0, 0, 0});
    RationalEpsSeries geo = one / oneMinus;
    CHECK(geo.precision() == 4);
    for (int i = 0; i <= 4; ++i) CHECK(geo[i] == 1);
    RationalEpsSeries pole(-1, {2, 3});  // 2/eps + 3 + O(eps)
    RationalEpsSeries prod = pole * geo;
    CHECK(prod.start() == -1);
    CHECK(prod.precision() == 0);
    CHECK(prod[0] == 5);
    RationalEpsSeries q = geo / pole;  // loses relative precision
    CHECK(q.start() == 1);
    CHECK(q.precision() == 2);
    CHECK(q[1] == BigRational(1, 2));
    CHECK(q[2] == BigRational(-1, 4));
    CHECK(RationalEpsSeries(0, {0, 0, 1}).start() == 2);
    CHECK(toString(pole) == "2*eps^(-1) + 3 + O(eps^1)");
    CHECK_THROWS_AS(pole[1], std::out_of_range);
}

TEST_CASE("truncated power series") {
    TruncatedPowerSeries a, b;
    for (int k = 0; k <= 5; ++k) {
        a.coeffs.push_back(RationalEpsSeries::constant(1, 2));
        b.coeffs.push_back(RationalEpsSeries::constant(k == 0 ? 1 : (k == 1 ? -1 : 0), 2));
    }
    auto p = a * b;  // 1/(1-x) * (1-x) = 1
    CHECK(p.coeffs[0][0] == 1);
    for (int k = 1; k <= 5; ++k) CHECK(p.coeffs[static_cast<size_t>(k)].vanishes());
    auto q = seriesArith(b, b, SeriesOp::Div);
    CHECK(q.coeffs[0][0] == 1);
    CHECK(q.coeffs[3].vanishes());
    CHECK(a.derivative().coeffs[2][0] == 3);
}

TEST_CASE("zeta values") {
    ZetaValue v = ZetaValue::parse("1393/486 + 5/18*zeta(2)");
    CHECK(v.rational() == BigRational(1393, 486));
    CHECK(v.coefficient({{2, 1}}) == BigRational(5, 18));
    ZetaValue sq = ZetaValue::zeta(2) * ZetaValue::zeta(2);
    CHECK(sq.toString() == "zeta(2)^2");
    CHECK((v - v).isZero());
    CHECK(ZetaValue::parse(v.toString()) == v);
    CHECK(ZetaValue::parse("-zeta(3)") == -ZetaValue::zeta(3));
}
