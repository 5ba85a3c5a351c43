#pragma once

#include "epschain/rec_solve.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace epschain {

// a_0(n,eps) F(n,eps) + ... + a_d(n,eps) F(n+d,eps) = sum_j b_j(n) eps^j
struct EpsRecurrence {
    std::vector<MultiPoly> coeffs;  // polynomials in n and eps
    std::map<int, Sequence> rhs;    // b_j, missing orders are zero
    // highest order of the rhs that is known; nullopt when exact
    std::optional<int> rhsPrecision;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    // coefficient of eps^m in a_i, as a polynomial in n
    UPoly coeff(int i, int m) const;
    int epsDegree() const;
    // b_j; throws when j is beyond the known precision
    Sequence rhsAt(int j) const;
};

struct LeadingData {
    int o = 0;
    long delta = 0;
};

// divides the operator and the rhs by the largest common power of eps
EpsRecurrence normalizeEps(const EpsRecurrence& r);
LeadingData leadingData(const EpsRecurrence& r);

struct EpsExpansion {
    int startOrder = 0;
    std::vector<Sequence> coefficients;  // F_l .. F_r
    long validFrom = 0;

    int endOrder() const { return startOrder + static_cast<int>(coefficients.size()) - 1; }
    const Sequence& at(int order) const { return coefficients.at(static_cast<size_t>(order - startOrder)); }
};

struct EpsSolveFailure {
    int order = 0;
    SolutionBasis partial;
    std::string reason;
};

struct EpsSolveResult {
    EpsExpansion expansion;  // the orders solved before a failure
    std::optional<EpsSolveFailure> failure;
    bool ok() const { return !failure; }
};

// initial[j] holds F_j(delta), ..., F_j(delta + o - 1) for j = l..r; a
// further value F_j(delta + o) is checked for consistency
using InitialGrid = std::map<int, std::vector<ZetaValue>>;
EpsSolveResult epsExpandSolve(const EpsRecurrence& r, const InitialGrid& initial, int l, int rr);

// F_j(n) for j = l..r and n = delta..to by stepping the recurrence order by
// order from the initial values
std::map<int, std::vector<ZetaValue>> unrollEps(const EpsRecurrence& r, const InitialGrid& initial, int l, int rr,
                                                long to);

// every eps-order l..r vanishes for n = delta..delta+nWindow, and the
// coefficients agree with unrollEps from their own initial values
bool verifyExpansion(const EpsRecurrence& r, const EpsExpansion& e, long nWindow);

}  // namespace epschain
