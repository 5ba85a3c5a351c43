#pragma once

#include "epschain/rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace epschain {

// Truncated Laurent series sum_{i >= start} c_i eps^i, known through
// order precision() = start + size - 1.  Leading zero coefficients are
// stripped, so a nonzero series has a nonzero first coefficient.
template <class C>
class EpsSeries {
public:
    EpsSeries() = default;
    EpsSeries(int start, std::vector<C> coeffs) : start_(start), c_(std::move(coeffs)) { strip(); }

    static EpsSeries zero(int precision) { return EpsSeries(precision + 1, {}); }
    static EpsSeries constant(const C& c, int precision) {
        if (precision < 0) return zero(precision);
        std::vector<C> v(static_cast<size_t>(precision) + 1, C(0));
        v[0] = c;
        return EpsSeries(0, std::move(v));
    }

    int start() const { return start_; }
    int precision() const { return start_ + static_cast<int>(c_.size()) - 1; }
    const std::vector<C>& coeffs() const { return c_; }
    bool vanishes() const { return c_.empty(); }

    // coefficient of eps^order; zero below start, error above precision
    C operator[](int order) const {
        if (order > precision())
            throw std::out_of_range("eps-series coefficient " + std::to_string(order) + " beyond precision " +
                                    std::to_string(precision()));
        if (order < start_) return C(0);
        return c_[static_cast<size_t>(order - start_)];
    }

    EpsSeries truncated(int r) const {
        if (r >= precision()) return *this;
        if (r < start_) return zero(r);
        return EpsSeries(start_, std::vector<C>(c_.begin(), c_.begin() + (r - start_ + 1)));
    }

    // multiply by eps^s
    EpsSeries shifted(int s) const {
        EpsSeries r = *this;
        r.start_ += s;
        return r;
    }

    EpsSeries operator-() const {
        EpsSeries r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }

    friend EpsSeries operator+(const EpsSeries& a, const EpsSeries& b) {
        int p = std::min(a.precision(), b.precision());
        int s = std::min(a.start_, b.start_);
        if (p < s) return zero(p);
        std::vector<C> v(static_cast<size_t>(p - s + 1), C(0));
        for (int i = s; i <= p; ++i) v[static_cast<size_t>(i - s)] = a[i] + b[i];
        return EpsSeries(s, std::move(v));
    }
    friend EpsSeries operator-(const EpsSeries& a, const EpsSeries& b) { return a + (-b); }

    friend EpsSeries operator*(const EpsSeries& a, const EpsSeries& b) {
        int p = std::min(a.precision() + b.start_, b.precision() + a.start_);
        int s = a.start_ + b.start_;
        if (p < s) return zero(p);
        std::vector<C> v(static_cast<size_t>(p - s + 1), C(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size() && i + j < v.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        return EpsSeries(s, std::move(v));
    }

    friend EpsSeries operator*(const EpsSeries& a, const C& s) {
        EpsSeries r = a;
        for (auto& c : r.c_) c = c * s;
        r.strip();
        return r;
    }

    // Laurent division; the divisor must not vanish to its precision
    friend EpsSeries operator/(const EpsSeries& a, const EpsSeries& b) {
        if (b.vanishes()) throw std::domain_error("division by an eps-series that vanishes to its precision");
        int rel = std::min(a.precision() - a.start_, b.precision() - b.start_);
        int s = a.start_ - b.start_;
        if (a.vanishes()) return zero(a.precision() - b.start_);
        std::vector<C> q(static_cast<size_t>(rel + 1), C(0));
        C inv = C(1) / b.c_[0];
        for (int k = 0; k <= rel; ++k) {
            C acc = a.c_[static_cast<size_t>(k)];
            for (int j = 1; j <= k && j < static_cast<int>(b.c_.size()); ++j)
                acc -= b.c_[static_cast<size_t>(j)] * q[static_cast<size_t>(k - j)];
            q[static_cast<size_t>(k)] = acc * inv;
        }
        return EpsSeries(s, std::move(q));
    }

    friend bool operator==(const EpsSeries& a, const EpsSeries& b) {
        return a.start_ == b.start_ && a.c_ == b.c_;
    }

private:
    void strip() {
        size_t k = 0;
        while (k < c_.size() && isZero(c_[k])) ++k;
        if (k > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(k));
            start_ += static_cast<int>(k);
        }
    }
    int start_ = 0;
    std::vector<C> c_;
};

using RationalEpsSeries = EpsSeries<BigRational>;

std::string toString(const RationalEpsSeries& s);

// sum_{k=0}^{K} c_k(eps) var^k with eps-series coefficients
struct TruncatedPowerSeries {
    std::string var = "x";
    std::vector<RationalEpsSeries> coeffs;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    TruncatedPowerSeries derivative() const;
    friend TruncatedPowerSeries operator+(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b);
    friend TruncatedPowerSeries operator-(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b);
    friend TruncatedPowerSeries operator*(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b);
};

enum class SeriesOp { Add, Sub, Mul, Div };
RationalEpsSeries seriesArith(const RationalEpsSeries& a, const RationalEpsSeries& b, SeriesOp op);
TruncatedPowerSeries seriesArith(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b, SeriesOp op);

}  // namespace epschain
