#include "epschain/value.hpp"

#include <cctype>
#include <stdexcept>

namespace epschain {

namespace {

ZetaValue::Monomial mulMono(const ZetaValue::Monomial& a, const ZetaValue::Monomial& b) {
    std::map<int, int> m;
    for (auto [w, p] : a) m[w] += p;
    for (auto [w, p] : b) m[w] += p;
    return ZetaValue::Monomial(m.begin(), m.end());
}

}  // namespace

ZetaValue ZetaValue::zeta(int weight) {
    if (weight < 2) throw std::invalid_argument("zeta(" + std::to_string(weight) + ") is not a constant");
    ZetaValue v;
    v.z_[{{weight, 1}}] = 1;
    return v;
}

ZetaValue ZetaValue::monomial(const Monomial& m, const BigRational& c) {
    if (m.empty()) return ZetaValue(c);
    ZetaValue v;
    if (c != 0) v.z_[m] = c;
    return v;
}

BigRational ZetaValue::coefficient(const Monomial& m) const {
    if (m.empty()) return q_;
    auto it = z_.find(m);
    return it == z_.end() ? BigRational(0) : it->second;
}

void ZetaValue::clean() {
    for (auto it = z_.begin(); it != z_.end();) {
        if (it->second == 0)
            it = z_.erase(it);
        else
            ++it;
    }
}

ZetaValue& ZetaValue::operator+=(const ZetaValue& o) {
    q_ += o.q_;
    if (!o.z_.empty()) {
        for (const auto& [m, c] : o.z_) z_[m] += c;
        clean();
    }
    return *this;
}

ZetaValue& ZetaValue::operator-=(const ZetaValue& o) {
    q_ -= o.q_;
    if (!o.z_.empty()) {
        for (const auto& [m, c] : o.z_) z_[m] -= c;
        clean();
    }
    return *this;
}

ZetaValue& ZetaValue::operator*=(const BigRational& s) {
    q_ *= s;
    if (s == 0)
        z_.clear();
    else
        for (auto& [m, c] : z_) c *= s;
    return *this;
}

ZetaValue& ZetaValue::operator*=(const ZetaValue& o) {
    if (z_.empty() && o.z_.empty()) {
        q_ *= o.q_;
        return *this;
    }
    if (o.z_.empty()) return *this *= o.q_;
    ZetaValue r;
    r.q_ = q_ * o.q_;
    for (const auto& [m, c] : o.z_)
        if (q_ != 0) r.z_[m] += q_ * c;
    for (const auto& [m, c] : z_) {
        if (o.q_ != 0) r.z_[m] += c * o.q_;
        for (const auto& [m2, c2] : o.z_) r.z_[mulMono(m, m2)] += c * c2;
    }
    r.clean();
    return *this = r;
}

ZetaValue operator/(const ZetaValue& a, const ZetaValue& b) {
    if (!b.isRational()) throw std::domain_error("division by a non-rational zeta value");
    if (b.q_ == 0) throw std::domain_error("division by zero");
    ZetaValue r = a;
    r *= 1 / b.q_;
    return r;
}

ZetaValue ZetaValue::operator-() const {
    ZetaValue r = *this;
    r *= BigRational(-1);
    return r;
}

std::string monomialToString(const ZetaValue::Monomial& m) {
    std::string s;
    for (auto [w, p] : m) {
        if (!s.empty()) s += "*";
        s += "zeta(" + std::to_string(w) + ")";
        if (p > 1) s += "^" + std::to_string(p);
    }
    return s;
}

std::string ZetaValue::toString() const {
    std::string out;
    auto put = [&](const BigRational& c, const std::string& mono) {
        if (c == 0) return;
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        BigRational a = abs(c);
        if (mono.empty())
            out += a.get_str();
        else if (a == 1)
            out += mono;
        else
            out += a.get_str() + "*" + mono;
    };
    put(q_, "");
    for (const auto& [m, c] : z_) put(c, monomialToString(m));
    return out.empty() ? "0" : out;
}

ZetaValue ZetaValue::parse(const std::string& text) {
    // sum of terms  [sign] [rational] [* zeta(w)[^p]]*
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty value");
    ZetaValue total;
    size_t i = 0;
    while (i < s.size()) {
        bool neg = false;
        if (s[i] == '+' || s[i] == '-') {
            neg = s[i] == '-';
            ++i;
        }
        BigRational coeff = 1;
        Monomial mono;
        bool any = false;
        while (i < s.size() && s[i] != '+' && s[i] != '-') {
            if (s[i] == '*') {
                ++i;
                continue;
            }
            if (s.compare(i, 5, "zeta(") == 0) {
                size_t close = s.find(')', i);
                if (close == std::string::npos) throw std::invalid_argument("bad zeta in '" + text + "'");
                int w = std::stoi(s.substr(i + 5, close - i - 5));
                i = close + 1;
                int p = 1;
                if (i < s.size() && s[i] == '^') {
                    size_t j = i + 1;
                    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                    p = std::stoi(s.substr(i + 1, j - i - 1));
                    i = j;
                }
                mono = mulMono(mono, Monomial{{w, p}});
                any = true;
            } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
                size_t j = i;
                while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
                coeff *= parseRational(s.substr(i, j - i));
                i = j;
                any = true;
            } else {
                throw std::invalid_argument("unexpected character in value '" + text + "'");
            }
        }
        if (!any) throw std::invalid_argument("malformed value '" + text + "'");
        if (neg) coeff = -coeff;
        total += monomial(mono, coeff);
    }
    return total;
}

}  // namespace epschain
