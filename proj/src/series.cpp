#include "epschain/series.hpp"

namespace epschain {

std::string toString(const RationalEpsSeries& s) {
    std::string out;
    for (int i = s.start(); i <= s.precision(); ++i) {
        BigRational c = s[i];
        if (c == 0) continue;
        if (!out.empty()) out += c < 0 ? " - " : " + ";
        else if (c < 0) out += "-";
        out += BigRational(abs(c)).get_str();
        if (i != 0) out += "*eps^" + (i < 0 ? "(" + std::to_string(i) + ")" : std::to_string(i));
    }
    if (!out.empty()) out += " + ";
    out += "O(eps^" + std::to_string(s.precision() + 1) + ")";
    return out;
}

TruncatedPowerSeries TruncatedPowerSeries::derivative() const {
    TruncatedPowerSeries r;
    r.var = var;
    for (size_t k = 1; k < coeffs.size(); ++k) r.coeffs.push_back(coeffs[k] * BigRational(static_cast<long>(k)));
    return r;
}

TruncatedPowerSeries operator+(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b) {
    TruncatedPowerSeries r;
    r.var = a.var;
    size_t n = std::min(a.coeffs.size(), b.coeffs.size());
    for (size_t k = 0; k < n; ++k) r.coeffs.push_back(a.coeffs[k] + b.coeffs[k]);
    return r;
}

TruncatedPowerSeries operator-(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b) {
    TruncatedPowerSeries r;
    r.var = a.var;
    size_t n = std::min(a.coeffs.size(), b.coeffs.size());
    for (size_t k = 0; k < n; ++k) r.coeffs.push_back(a.coeffs[k] - b.coeffs[k]);
    return r;
}

TruncatedPowerSeries operator*(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b) {
    TruncatedPowerSeries r;
    r.var = a.var;
    size_t n = std::min(a.coeffs.size(), b.coeffs.size());
    for (size_t k = 0; k < n; ++k) {
        RationalEpsSeries acc = a.coeffs[0] * b.coeffs[k];
        for (size_t i = 1; i <= k; ++i) acc = acc + a.coeffs[i] * b.coeffs[k - i];
        r.coeffs.push_back(acc);
    }
    return r;
}

RationalEpsSeries seriesArith(const RationalEpsSeries& a, const RationalEpsSeries& b, SeriesOp op) {
    switch (op) {
        case SeriesOp::Add: return a + b;
        case SeriesOp::Sub: return a - b;
        case SeriesOp::Mul: return a * b;
        case SeriesOp::Div: return a / b;
    }
    return a;
}

TruncatedPowerSeries seriesArith(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b, SeriesOp op) {
    switch (op) {
        case SeriesOp::Add: return a + b;
        case SeriesOp::Sub: return a - b;
        case SeriesOp::Mul: return a * b;
        case SeriesOp::Div: {
            if (b.coeffs.empty() || b.coeffs[0].vanishes())
                throw std::domain_error("power series division by a series vanishing at the origin");
            TruncatedPowerSeries q;
            q.var = a.var;
            size_t n = std::min(a.coeffs.size(), b.coeffs.size());
            for (size_t k = 0; k < n; ++k) {
                RationalEpsSeries acc = a.coeffs[k];
                for (size_t i = 1; i <= k; ++i) acc = acc - b.coeffs[i] * q.coeffs[k - i];
                q.coeffs.push_back(acc / b.coeffs[0]);
            }
            return q;
        }
    }
    return a;
}

}  // namespace epschain
