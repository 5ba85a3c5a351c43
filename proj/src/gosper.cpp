#include "epschain/gosper.hpp"

#include "epschain/linalg.hpp"

namespace epschain {

GosperForm gosperForm(const URatFun& ratio) {
    GosperForm f{ratio.num(), ratio.den(), UPoly(1)};
    for (long h : shiftSet(f.a, f.b)) {
        UPoly g = gcd(f.a, f.b.shift(BigRational(h)));
        if (g.degree() < 1) continue;
        f.a = UPoly::divExact(f.a, g);
        f.b = UPoly::divExact(f.b, g.shift(BigRational(-h)));
        for (long i = 1; i <= h; ++i) f.c *= g.shift(BigRational(-i));
    }
    return f;
}

std::optional<UPoly> gosperPolynomial(const UPoly& a, const UPoly& bs, const UPoly& c) {
    if (c.isZero()) return UPoly();
    UPoly minus = a - bs, plus = a + bs;
    int dm = minus.isZero() ? -1 : minus.degree();
    int dp = plus.isZero() ? -1 : plus.degree();
    long d = -1;
    if (dm >= dp) {
        d = c.degree() - dm;
    } else {
        d = c.degree() - dp + 1;
        BigRational cand = BigRational(-2) * minus.coeff(dp - 1) / plus.lc();
        if (cand.get_den() == 1 && cand >= 0 && cand.get_num().fits_slong_p()) d = std::max(d, cand.get_num().get_si());
    }
    if (d < 0) return std::nullopt;
    // columns: images of x^i under x -> a x(j+1) - bs x(j)
    std::vector<UPoly> cols;
    int rows = c.degree() + 1;
    UPoly xp(1), xsp(1), step = UPoly::linear(1, 1);
    for (long i = 0; i <= d; ++i) {
        UPoly img = a * xsp - bs * xp;
        if (!img.isZero()) rows = std::max(rows, img.degree() + 1);
        cols.push_back(std::move(img));
        xp *= UPoly::x();
        xsp *= step;
    }
    Matrix<BigRational> m(static_cast<size_t>(rows), std::vector<BigRational>(cols.size()));
    std::vector<BigRational> rhs(static_cast<size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        for (size_t i = 0; i < cols.size(); ++i) m[static_cast<size_t>(r)][i] = cols[i].coeff(r);
        rhs[static_cast<size_t>(r)] = c.coeff(r);
    }
    auto sol = solveLinear(m, rhs, cols.size());
    if (!sol) return std::nullopt;
    return UPoly(*sol);
}

std::optional<URatFun> gosper(const URatFun& ratio) {
    if (ratio.isZero()) return URatFun(-1);
    GosperForm f = gosperForm(ratio);
    UPoly bs = f.b.shift(BigRational(-1));
    auto x = gosperPolynomial(f.a, bs, f.c);
    if (!x) return std::nullopt;
    return URatFun(bs * *x, f.c);
}

}  // namespace epschain
