#pragma once

#include "epschain/eps_solve.hpp"
#include "epschain/series.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace epschain {

// A function of x and eps known through its power-series coefficients
// h(x) = sum_k H(k) x^k: symbolically per eps-order (sequences in k, the
// active variable of the expressions) and/or as a moment table.
struct KnownFunction {
    std::map<int, Sequence> coefficients;
    std::optional<int> precision;            // highest known eps-order, nullopt when exact
    std::vector<RationalEpsSeries> moments;  // H(0), H(1), ...

    bool hasSymbolic() const { return !coefficients.empty() || precision.has_value(); }
    // H_j(k) as a rational number
    BigRational moment(long k, int order) const;
    // H_j as a sequence; throws beyond the known precision
    Sequence coefficient(int order) const;
};

struct InhomogeneousTerm {
    std::string h;
    RationalFunction coef;  // in x and eps
};

// D_x f = A f + g, g_i = sum coef * h
struct CoupledODESystem {
    std::vector<std::vector<RationalFunction>> A;
    std::vector<std::vector<InhomogeneousTerm>> g;
    std::map<std::string, KnownFunction> known;

    int size() const { return static_cast<int>(A.size()); }
};

// (function name, derivative order); components are named f1, f2, ...
using DerivKey = std::pair<std::string, int>;
using LinComb = std::map<DerivKey, RationalFunction>;

std::string componentName(int i);  // 0-based index -> "f1", ...

// sum_r coeffs[r](x, eps) D^r f_component = rhs, the rhs over known
// functions and the components of earlier blocks
struct ScalarODE {
    int component = 0;
    std::vector<MultiPoly> coeffs;
    LinComb rhs;
    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct UncoupledForm {
    std::vector<ScalarODE> blocks;
    // f_i as a combination of derivatives of the block components and of
    // the known functions
    std::vector<LinComb> backSubst;
};

UncoupledForm uncouple(const CoupledODESystem& s);

// recurrence for the coefficients F(k) of f = sum_k F(k) x^k; the
// recurrence index is k itself.  Earlier block components must be present
// in known.
EpsRecurrence odeToRecurrence(const ScalarODE& ode, const std::map<std::string, KnownFunction>& known);

// eps-expansion of every component's coefficients
struct SystemExpansion {
    std::vector<EpsExpansion> components;
    std::optional<EpsSolveFailure> failure;
    int failedComponent = -1;
    bool ok() const { return !failure; }
};

// initial[i][j] = F_{i,j}(0), F_{i,j}(1), ... for the block components i
// (at least delta + o values); orders l..r
using SystemInitial = std::map<int, InitialGrid>;
SystemExpansion solveSystemExpansion(const CoupledODESystem& s, const SystemInitial& initial, int l, int r);

// F_i from the back-substitution formula; inputs keyed by function name
// (block components and known functions), every entry an eps-expansion of
// the power-series coefficients
EpsExpansion backsubstituteCoefficients(const LinComb& formula, const std::map<std::string, KnownFunction>& inputs,
                                        int l, int r);

struct MomentTable {
    int startOrder = 0;
    // values[i][j - startOrder][k]
    std::vector<std::vector<std::vector<BigRational>>> values;
    long mu = 0;

    const std::vector<BigRational>& at(int component, int order) const {
        return values.at(static_cast<size_t>(component)).at(static_cast<size_t>(order - startOrder));
    }
};

// F_{i,j}(k) for k = 0..mu by unrolling; initial values as for
// solveSystemExpansion (rational)
MomentTable largeMoments(const CoupledODESystem& s, long mu, const SystemInitial& initial, int l, int r);

// independent oracle: Taylor recursion on the system from f(0) (one
// eps-series per component), F_i(k) for k = 0..K through order r
std::vector<std::vector<RationalEpsSeries>> seriesOracle(const CoupledODESystem& s,
                                                         const std::vector<RationalEpsSeries>& f0, long K, int r);

// coefficient-level residual of D f = A f + g: every eps-order l..r of the
// x^k coefficient vanishes for k = 0..K.  F(i, j, k) gives F_{i,j}(k).
using CoefficientAccess = std::function<ZetaValue(int component, int order, long k)>;
bool satisfiesSystem(const CoupledODESystem& s, const CoefficientAccess& F, int l, int r, long K);

// the initial-value grid of the block components from oracle series
SystemInitial initialFromSeries(const CoupledODESystem& s, const std::vector<std::vector<RationalEpsSeries>>& series,
                                int l, int r, long count);

// the initial-value grid from exact values f_i(0) (order -> value, absent
// orders zero) through the series oracle; x = 0 must be an ordinary point
SystemInitial initialFromOrigin(const CoupledODESystem& s, const std::vector<std::map<int, BigRational>>& f0, int l,
                                int r);

}  // namespace epschain
