#pragma once

#include "epschain/recurrence.hpp"

#include <optional>
#include <vector>

namespace epschain {

// Basis of the polynomial solutions of the homogeneous part.
std::vector<UPoly> polySolutions(const LinearRecurrence& r);

// Basis of the rational solutions of the homogeneous part.
std::vector<URatFun> rationalSolutions(const LinearRecurrence& r);
// A rational solution of the full recurrence when the rhs is a rational
// function of n; nullopt when there is none.
std::optional<URatFun> rationalParticular(const LinearRecurrence& r);

// h(n) = prod_{j=lower}^{n} ratio(j - 1), so h(n+1)/h(n) = ratio(n)
struct HypergeometricSolution {
    URatFun ratio;
    long lower = 1;
    Expr expr;
};
// Linearly independent hypergeometric solutions of the homogeneous part
// whose ratio has rational coefficients.
std::vector<HypergeometricSolution> hypergeomSolutions(const LinearRecurrence& r);

struct SolutionBasis {
    std::vector<Expr> homogeneous;
    std::optional<Expr> particular;
    long validFrom = 0;
    bool complete = false;  // homogeneous.size() == order
};
// d'Alembertian solutions by peeling hypergeometric right factors; the
// particular solution is filled in when the rhs is nonzero and reachable.
SolutionBasis dalembertSolutions(const LinearRecurrence& r);
std::optional<Expr> particularSolution(const LinearRecurrence& r);

// The solution with F(start + i) = initial[i], start >= delta (default
// delta); values below the validity point of the closed form are kept
// explicitly.  nullopt when the basis is incomplete or no particular
// solution was found.
std::optional<Sequence> solveWithInitialValues(const LinearRecurrence& r, const std::vector<ZetaValue>& initial,
                                               std::optional<long> start = std::nullopt);

}  // namespace epschain
