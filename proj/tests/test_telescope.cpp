#include <doctest.h>

#include "epschain/expr_io.hpp"
#include "epschain/telescope.hpp"

using namespace epschain;

namespace {

RationalFunction rf(const char* s) { return parseRationalFunction(s); }
MultiPoly mp(const char* s) { return parsePolynomial(s); }

HypergeometricTerm term(const char* s) { return HypergeometricTerm::parse(s, {"n", "k"}); }
HypergeometricTerm integrand(const char* s, std::vector<std::string> xs = {"x"}) {
    return HypergeometricTerm::parse(s, {"n"}, xs);
}

BigRational val(const HypergeometricTerm& t, long n, long k) {
    auto v = t.value({{"n", n}, {"k", k}});
    REQUIRE(v.has_value());
    return *v;
}

std::vector<MultiPoly> polys(std::initializer_list<const char*> l) {
    std::vector<MultiPoly> v;
    for (auto s : l) v.push_back(mp(s));
    return v;
}

// t = g(k+1) - g(k) = g(k) (ratio(k) - 1)
HypergeometricTerm differenceOf(const char* g) {
    auto gt = term(g);
    auto factors = gt.factors;
    TermFactor f;
    f.value = gt.ratio("k") - RationalFunction(1);
    factors.push_back(f);
    return HypergeometricTerm::fromFactors(factors, {"n", "k"});
}

}  // namespace

TEST_CASE("term parsing and ratios") {
    auto t = term("binom(n,k)");
    CHECK(t.ratio("k") == rf("(n-k)/(k+1)"));
    CHECK(t.ratio("n") == rf("(n+1)/(n+1-k)"));
    CHECK(t.compatible());
    CHECK(val(t, 5, 2) == 10);
    CHECK(val(t, 3, 5) == 0);
    CHECK(val(t, 3, -1) == 0);

    auto u = term("k!*2^k/(k+1)");
    CHECK(u.ratio("k") == rf("2(k+1)^2/(k+2)"));
    CHECK(val(u, 0, 3) == 12);
    CHECK(u.ratio("n") == RationalFunction(1));

    auto v = term("binom(n,2k)");
    CHECK(v.ratio("k") == rf("(n-2k)(n-2k-1)/((2k+1)(2k+2))"));

    auto w = integrand("x^n*(1-x)^eps");
    CHECK(w.ratio("n") == rf("x"));
    CHECK(w.derivativeRatios.at("x") == rf("n/x - eps/(1-x)"));
    CHECK(w.compatible());

    // a rational term given as a sum
    auto r = term("1/k + 1/(k+1)");
    CHECK(r.factors.size() == 1);
    CHECK(val(r, 0, 1) == BigRational(3, 2));
    CHECK_FALSE(r.value({{"n", 0}, {"k", 0}}).has_value());

    // terms given only by ratios are evaluated by walking from the base point
    HypergeometricTerm q;
    q.shiftRatios["n"] = rf("(n+1)/(n+1-k)");
    q.shiftRatios["k"] = rf("(n-k)/(k+1)");
    CHECK(val(q, 6, 3) == 20);
}

TEST_CASE("gosper examples") {
    auto r = gosper(term("k*k!"));
    REQUIRE(r);
    CHECK(*r == rf("1/k"));
    CHECK_FALSE(gosper(term("1/k")));
    CHECK_FALSE(gosper(term("binom(n,k)")));
}

TEST_CASE("gosper decision corpus") {
    const char* summable[] = {"k!",         "2^k",          "k*2^k",        "1/k",
                              "binom(n,k)", "(k^2+1)*k!",   "3^k/(k+1)",    "binom(2*k,k)",
                              "1/binom(2*k,k)", "k!/2^k",   "(-1)^k*k",     "(-1)^k/(k+1)",
                              "k*binom(n,k)^2", "1/k!",     "k^3",          "(k+1)!/(k+3)",
                              "2^k/(k^2+1)",    "binom(n+k,k)", "binom(2*k,k)/4^k", "(-2)^k*k^2"};
    for (const char* g : summable) {
        CAPTURE(g);
        auto t = differenceOf(g);
        auto R = gosper(t);
        REQUIRE(R);
        CHECK(R->shift("k", 1) * t.ratio("k") - *R == RationalFunction(1));
        // telescoping on actual values at n = 7
        for (long k = 2; k < 6; ++k) {
            std::map<std::string, BigRational> p0{{"n", 7}, {"k", k}}, p1{{"n", 7}, {"k", k + 1}};
            auto t0 = t.value({{"n", 7}, {"k", k}}), t1 = t.value({{"n", 7}, {"k", k + 1}});
            REQUIRE(t0);
            REQUIRE(t1);
            if (R->den().evaluateAll(p0) == 0 || R->den().evaluateAll(p1) == 0) continue;
            CHECK(R->evaluateAll(p1) * *t1 - R->evaluateAll(p0) * *t0 == *t0);
        }
    }
    const char* nonSummable[] = {"1/k",        "1/k^2",        "1/(2k+1)",       "1/(k^2+1)",
                                 "1/(k^2+k+1)", "k/(k^2+2)",   "1/(k^3+2)",      "k!",
                                 "2^k/k",      "(-1)^k/k",     "3^k/(k+1)",      "binom(n,k)",
                                 "binom(n,k)^2", "binom(n,k)/(k+1)", "k^2*binom(n,k)", "binom(2*k,k)",
                                 "k!/2^k",     "1/k!",         "1/(3k+1)",       "binom(n,k)*2^k"};
    for (const char* f : nonSummable) {
        CAPTURE(f);
        CHECK_FALSE(gosper(term(f)));
    }
}

TEST_CASE("zeilberger examples and minimality") {
    struct Case {
        const char* t;
        std::vector<MultiPoly> coeffs;
    };
    std::vector<Case> cases = {{"binom(n,k)", polys({"-2", "1"})},
                               {"binom(n,k)^2", polys({"-(4n+2)", "n+1"})},
                               {"binom(n,k)*2^k", polys({"-3", "1"})}};
    for (const auto& c : cases) {
        CAPTURE(c.t);
        auto t = term(c.t);
        auto cert = zeilberger(t);
        CHECK(cert.coeffs == c.coeffs);
        CHECK(checkCertificate(t, cert));
        for (int d = 1; d < cert.order(); ++d) CHECK_FALSE(zeilbergerAtOrder(t, d));
    }
    // central binomial values for the squares
    DefiniteSum s{term("binom(n,k)^2"), mp("0"), mp("n")};
    for (long n = 0; n <= 30; ++n) CHECK(sumValue(s, n) == BigRational(binomial(2 * n, n)));

    CHECK_THROWS_AS(zeilberger(term("binom(n,k)^3"), 1), NoCertificateError);
}

TEST_CASE("sum to recurrence with boundary terms") {
    auto r1 = sumToRecurrence({term("binom(n,k)"), mp("0"), mp("n")}).recurrence;
    CHECK(r1.coeffs == polys({"-2", "1"}));
    CHECK(r1.homogeneous());

    // F(n) = 2^n - 1 gives F(n+1) - 2 F(n) = 1
    auto r2 = sumToRecurrence({term("binom(n,k)"), mp("0"), mp("n-1")}).recurrence;
    CHECK(r2.coeffs == polys({"-2", "1"}));
    CHECK(equalCanonical(r2.rhs.expr, Expr(1)));
    CHECK(r2.rhs.validFrom == 0);

    auto r3 = sumToRecurrence({term("1/k"), mp("1"), mp("n")}).recurrence;
    CHECK(r3.coeffs == polys({"-(n+1)", "n+1"}));
    CHECK(equalCanonical(r3.rhs.expr, Expr(1)));
}

TEST_CASE("telescoping corpus") {
    struct Problem {
        const char* t;
        const char* lower;
        const char* upper;
    };
    std::vector<Problem> corpus = {
        {"binom(n,k)", "0", "n"},
        {"binom(n,k)", "0", "n-1"},
        {"binom(n,k)^2", "0", "n"},
        {"binom(n,k)*2^k", "0", "n"},
        {"binom(n,k)*(-1)^k", "0", "n"},
        {"k*binom(n,k)", "0", "n"},
        {"k^2*binom(n,k)", "0", "n"},
        {"binom(n,k)*binom(n+1,k)", "0", "n"},
        {"binom(n,k)*binom(n,k+1)", "0", "n"},
        {"binom(n,k)*binom(n+k,k)", "0", "n"},
        {"binom(n,k)^2*binom(n+k,k)", "0", "n"},
        {"binom(n,k)^3", "0", "n"},
        {"1/k", "1", "n"},
        {"1/k^2", "1", "n"},
        {"(-1)^k/k", "1", "n"},
        {"1/(k*(k+1))", "1", "n"},
        {"binom(n,k)/(k+1)", "0", "n"},
        {"binom(n,k)*(-1)^k/(k+1)", "0", "n"},
        {"binom(2*n,k)", "0", "n"},
        {"binom(n,k)^2*(-1)^k", "0", "n"},
        {"k*binom(n,k)^2", "0", "n"},
        {"binom(n,2*k)", "0", "n"},
        {"binom(n-k,k)", "0", "n"},
        {"2^k", "0", "n"},
        {"k", "0", "n"},
        {"k^2", "1", "n"},
        {"k*k!", "0", "n"},
        {"1/binom(n,k)", "0", "n"},
        {"binom(n,k)*(-3)^k", "0", "n"},
        {"binom(n,k)*(-1)^(k+1)/k", "1", "n"},
    };
    REQUIRE(corpus.size() == 30);
    for (const auto& p : corpus) {
        CAPTURE(p.t);
        CAPTURE(p.upper);
        DefiniteSum s{term(p.t), mp(p.lower), mp(p.upper)};
        auto res = sumToRecurrence(s);
        CHECK(checkCertificate(s.term, res.certificate));
        const auto& rec = res.recurrence;
        std::vector<BigRational> F;
        for (long n = 0; n <= 25 + rec.order(); ++n) F.push_back(sumValue(s, n));
        for (long n = 0; n <= 25; ++n) {
            CAPTURE(n);
            CHECK(rec.residual([&](long m) { return ZetaValue(F[static_cast<size_t>(m)]); }, n).isZero());
        }
    }
}

TEST_CASE("almkvist-zeilberger") {
    auto t1 = integrand("x^n");
    auto c1 = almkvistZeilberger(t1);
    CHECK(c1.coeffs == polys({"-(n+1)", "n+2"}));
    CHECK(checkCertificate(t1, c1));
    CHECK(c1.boundary.isZero());
    // F(n) = 1/(n+1)
    for (long n = 0; n < 10; ++n)
        CHECK(c1.coeffs[0].evaluateAll({{"n", n}}) / (n + 1) + c1.coeffs[1].evaluateAll({{"n", n}}) / (n + 2) == 0);

    auto t2 = integrand("x^n*(1-x)^eps");
    auto c2 = almkvistZeilberger(t2);
    CHECK(c2.coeffs == polys({"-(n+1)", "n+2+eps"}));
    CHECK(checkCertificate(t2, c2));
    CHECK(c2.boundary.isZero());
    // Beta ratio (n+1)/(n+2+eps)
    CHECK(RationalFunction(c2.coeffs[0]) + RationalFunction(c2.coeffs[1]) * rf("(n+1)/(n+2+eps)") ==
          RationalFunction(0));

    auto t3 = integrand("(1-x)^eps");
    auto c3 = almkvistZeilberger(t3);
    CHECK(c3.coeffs == polys({"-1", "1"}));
    CHECK(checkCertificate(t3, c3));

    // int_0^1 x^n/(1+x) dx has no homogeneous first-order recurrence; the
    // boundary at x = 1 is returned
    auto t4 = integrand("x^n/(1+x)");
    auto c4 = almkvistZeilberger(t4);
    CHECK(checkCertificate(t4, c4));
    CHECK(c4.coeffs == polys({"1", "1"}));
    CHECK(c4.boundary == rf("1/(n+1)"));
}

TEST_CASE("iterated integrals") {
    auto t = integrand("x^n*y^n", {"x", "y"});
    auto c = iterateAZ(t, {"x", "y"});
    CHECK(c.coeffs == polys({"-(n+1)^2", "(n+2)^2"}));
    CHECK(checkCertificate(t, c));

    auto one = integrand("x^n");
    CHECK(iterateAZ(one, {"x"}).coeffs == almkvistZeilberger(one).coeffs);

    auto u = integrand("(x*y)^n*(1-x)^eps", {"x", "y"});
    auto cu = iterateAZ(u, {"x", "y"});
    CHECK(cu.coeffs == polys({"-(n+1)^2", "(n+2)(n+2+eps)"}));
    CHECK(checkCertificate(u, cu));

    auto coupled = integrand("(x+y)^n", {"x", "y"});
    CHECK_THROWS_AS(iterateAZ(coupled, {"x", "y"}), NotHyperexponentialError);
}
