#pragma once

#include "epschain/nested_sums.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace epschain {

// a_0(n) F(n) + ... + a_d(n) F(n+d) = b(n)
struct LinearRecurrence {
    std::vector<MultiPoly> coeffs;  // polynomials in n
    Sequence rhs;

    LinearRecurrence() = default;
    LinearRecurrence(std::vector<MultiPoly> c, Sequence b = Sequence());

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    bool homogeneous() const { return isZero(rhs); }
    // max({i >= 0 : a_d(i) = 0} u {-1}) + 1
    long delta() const { return delta_; }
    UPoly coeff(int i) const;

    // sum_i a_i(n) v(n+i) - b(n) for values given as a function of n
    template <class F>
    ZetaValue residual(F&& v, long n) const {
        ZetaValue acc;
        for (int i = 0; i <= order(); ++i) acc += v(n + i) * coeffValue(i, n);
        return acc - rhs.at(n);
    }
    BigRational coeffValue(int i, long n) const;

    // F(from..to) from the d initial values F(from..from+d-1); requires
    // a_d(n) != 0 on the range
    std::vector<ZetaValue> unroll(const std::vector<ZetaValue>& initial, long from, long to) const;

    std::string toString() const;

    // divides by the content and makes a_d's leading coefficient positive
    // (the rhs is scaled along)
    void normalize();

private:
    long delta_ = 0;
};

MultiPoly nPoly(const UPoly& p);

}  // namespace epschain
