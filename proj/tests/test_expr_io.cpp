#include "doctest.h"

#include "epschain/canonical.hpp"
#include "epschain/expr_io.hpp"

#include <random>

using namespace epschain;

namespace {

Expr P(const char* s) { return parseExpr(s); }

// small random expressions for round-trip checks
Expr randomExpr(std::mt19937_64& rng, int depth, bool topLevel = true) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 7 : 3);
    std::uniform_int_distribution<int> small(-4, 4);
    auto rat = [&]() {
        long a = small(rng), b = small(rng);
        UPoly num = UPoly::linear(BigRational(a), BigRational(b == 0 ? 1 : b));
        UPoly den = UPoly::linear(1, BigRational(std::abs(small(rng)) + 1));
        return Expr(URatFun(num, den));
    };
    switch (pick(rng)) {
        case 0: return rat();
        case 1: return Expr::zeta(2 + std::abs(small(rng)) % 3);
        case 2: return Expr::power(small(rng) >= 0 ? BigRational(2) : BigRational(-1, 3));
        case 3: {
            std::vector<int> idx;
            int len = 1 + std::abs(small(rng)) % 3;
            for (int i = 0; i < len; ++i) idx.push_back(small(rng) == 0 ? 1 : small(rng) % 3 == 0 ? -2 : 1);
            return Expr::harmonic(idx);
        }
        case 4: return randomExpr(rng, depth - 1, false) + randomExpr(rng, depth - 1, false);
        case 5: return randomExpr(rng, depth - 1, false) * randomExpr(rng, depth - 1, false);
        case 6: return Expr::sum(std::abs(small(rng)) % 3, randomExpr(rng, depth - 1, false) * rat());
        default:
            return Expr::product(HGProduct{1 + std::abs(small(rng)) % 2,
                                           URatFun(UPoly::linear(1, BigRational(std::abs(small(rng)) + 1))), std::nullopt});
    }
    (void)topLevel;
}

}  // namespace

TEST_CASE("text rendering of basic objects") {
    CHECK(renderText(Expr::harmonic({1})) == "S[1](n)");
    CHECK(renderText(Expr::harmonic({2, -1})) == "S[2,-1](n)");
    CHECK(renderText(Expr::zeta(3)) == "zeta(3)");
    CHECK(renderText(Expr::power(-1)) == "(-1)^n");
    CHECK(renderText(Expr(URatFun(UPoly(1), UPoly::linear(1, 1)))) == "1/(n+1)");
    CHECK(renderText(Expr()) == "0");
    CHECK(renderText(Expr(BigRational(-3, 2))) == "-3/2");
}

TEST_CASE("paper-shaped rational prefactors") {
    Expr f = P("8(-1)^n/(3(n+1)(n+2)) + 8(2n+3)/(3(n+1)^2(n+2))");
    CHECK(renderText(f) == "8(-1)^n/(3(n+1)(n+2)) + 8(2n+3)/(3(n+1)^2(n+2))");
    CHECK(eval(f, 2) == ZetaValue(BigRational(20, 27)));
    Expr g = P("-4(-1)^n(3n^3+18n^2+31n+18)/(3(n+1)^3(n+2)^2) - 4(6n^3+32n^2+51n+26)/(3(n+1)^3(n+2)^2)");
    CHECK(renderText(g) == "-4(-1)^n(3n^3+18n^2+31n+18)/(3(n+1)^3(n+2)^2) - 4(6n^3+32n^2+51n+26)/(3(n+1)^3(n+2)^2)");
}

TEST_CASE("parser accepts general sums, products and unicode") {
    Expr e = P("sum(j=1..n, 1/j^2 * sum(i=1..j, (-1)^i/i))");
    CHECK(Expr::structurallyEqual(e, Expr::harmonic({2, -1})));
    Expr f = P("prod(j=1..n, j)");
    CHECK(eval(f, 5) == ZetaValue(120));
    CHECK(eval(P("ζ(2)/6 − 1"), 0) == ZetaValue::parse("1/6*zeta(2) - 1"));
    CHECK(eval(P("sum(j=0..n, (1/2)^j)"), 2) == ZetaValue(BigRational(7, 4)));
    CHECK(P("S[1](n)^2").kind() == Expr::Kind::Mul);
}

TEST_CASE("parse errors carry positions") {
    try {
        parseExpr("1 +\n  foo");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(parseExpr("S[0](n)"), ParseError);
    CHECK_THROWS_AS(parseExpr("1/S[1](n)"), ParseError);
    CHECK_THROWS_AS(parseExpr("(1+n"), ParseError);
    CHECK_THROWS_AS(parseExpr("S[1](j)"), ParseError);
}

TEST_CASE("text and json round trips on a random corpus") {
    std::mt19937_64 rng(20240611);
    for (int t = 0; t < 200; ++t) {
        Expr e = randomExpr(rng, 3);
        std::string s = renderText(e);
        Expr back = parseExpr(s);
        CHECK_MESSAGE(Expr::structurallyEqual(back, e), s << " -> " << renderText(back));
        Expr jb = exprFromJson(exprToJson(e));
        CHECK(Expr::structurallyEqual(jb, e));
    }
}

TEST_CASE("canonical forms render and round trip") {
    Expr e = canonicalize(P("S[1](n)^2 + S[-1](n)/(n+1) + 2^n*S[2](n)"));
    Expr back = parseExpr(renderText(e));
    CHECK(Expr::structurallyEqual(back, e));
    CHECK(renderText(canonicalize(P("S[1](n) + S[1](n)"))) == "2S[1](n)");
    CHECK(renderLatex(P("S[2,1](n)/(n+1)")) == "\\frac{S_{2,1}(n)}{n+1}");
    CHECK(renderLatex(P("zeta(2)(-1)^n")) == "\\zeta(2) \\left(-1\\right)^{n}");
    CHECK(exprToJson(P("zeta(3)")).dump() == R"({"zeta":3})");
    CHECK(Expr::structurallyEqual(exprFromJson(nlohmann::json::parse(R"({"S":[2,1]})")), Expr::harmonic({2, 1})));
}
