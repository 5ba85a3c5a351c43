#include "epschain/guess.hpp"

#include "epschain/linalg.hpp"

#include <stdexcept>

namespace epschain {

std::optional<LinearRecurrence> guessRecurrence(const std::vector<BigRational>& seq, int maxOrder, int maxDegree,
                                                long offset) {
    long len = static_cast<long>(seq.size());
    if (len < static_cast<long>((maxOrder + 1) * (maxDegree + 1) + maxOrder + 10))
        throw std::invalid_argument("guessRecurrence: insufficient data (" + std::to_string(len) + " terms)");
    for (int d = 1; d <= maxOrder; ++d) {
        for (int g = 0; g <= maxDegree; ++g) {
            size_t unknowns = static_cast<size_t>((d + 1) * (g + 1));
            long rows = static_cast<long>(unknowns) + 2;
            if (rows + d > len) continue;
            auto row = [&](long k) {
                std::vector<BigRational> r;
                r.reserve(unknowns);
                BigRational nk(k + offset);
                for (int i = 0; i <= d; ++i) {
                    BigRational p = seq[static_cast<size_t>(k + i)];
                    for (int e = 0; e <= g; ++e) {
                        r.push_back(p);
                        p *= nk;
                    }
                }
                return r;
            };
            Matrix<BigRational> m;
            for (long k = 0; k < rows; ++k) m.push_back(row(k));
            auto basis = nullspace(m, unknowns);
            if (basis.empty()) continue;
            const auto& c = basis.front();
            bool ok = true;
            for (long k = rows; k + d < len && ok; ++k) {
                auto r = row(k);
                BigRational acc = 0;
                for (size_t u = 0; u < unknowns; ++u) acc += r[u] * c[u];
                ok = acc == 0;
            }
            if (!ok) continue;
            std::vector<MultiPoly> coeffs;
            for (int i = 0; i <= d; ++i) {
                std::vector<BigRational> cs(c.begin() + i * (g + 1), c.begin() + (i + 1) * (g + 1));
                coeffs.push_back(nPoly(UPoly(cs)));
            }
            if (coeffs.back().isZero()) continue;
            LinearRecurrence rec(coeffs);
            rec.normalize();
            return rec;
        }
    }
    return std::nullopt;
}

}  // namespace epschain
