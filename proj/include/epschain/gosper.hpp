#pragma once

#include "epschain/ratfun.hpp"

#include <optional>

namespace epschain {

// r = a(x)/b(x) * c(x+1)/c(x) with gcd(a(x), b(x+h)) = 1 for all h >= 0
struct GosperForm {
    UPoly a, b, c;
};
GosperForm gosperForm(const URatFun& ratio);

// Polynomial x with a(j) x(j+1) - b(j-1) x(j) = c(j), nullopt if none.
std::optional<UPoly> gosperPolynomial(const UPoly& a, const UPoly& bShifted, const UPoly& c);

// For a hypergeometric term t with t(j+1)/t(j) = ratio(j), the rational
// certificate z with z(j+1) ratio(j) - z(j) = 1, so that T = z t satisfies
// T(j+1) - T(j) = t(j).  nullopt when t has no hypergeometric antidifference.
std::optional<URatFun> gosper(const URatFun& ratio);

}  // namespace epschain
