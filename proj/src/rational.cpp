#include "epschain/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace epschain {

BigRational parseRational(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto validInt = [](std::string_view t) {
        size_t i = 0;
        if (!t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!validInt(num) || !validInt(den) || den[0] == '-' || den[0] == '+')
        throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    if (num[0] == '+') num.erase(0, 1);
    BigInt p(num, 10), q(den, 10);
    if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    BigRational r(p, q);
    r.canonicalize();
    return r;
}

std::string toString(const BigRational& q) { return q.get_str(10); }
std::string toString(const BigInt& z) { return z.get_str(10); }

BigRational ratPow(const BigRational& base, long exp) {
    if (exp < 0) {
        if (base == 0) throw std::domain_error("zero to a negative power");
        return ratPow(1 / base, -exp);
    }
    BigRational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exp));
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exp));
    r.canonicalize();
    return r;
}

BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

BigInt binomial(long n, long k) {
    if (k < 0) return 0;
    BigInt r;
    if (n >= 0) {
        mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    } else {
        BigInt nn = n;
        mpz_bin_ui(r.get_mpz_t(), nn.get_mpz_t(), static_cast<unsigned long>(k));
    }
    return r;
}

BigInt floorQ(const BigRational& q) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

size_t bitSize(const BigRational& q) {
    return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

}  // namespace epschain
