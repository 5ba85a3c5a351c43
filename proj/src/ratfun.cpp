#include "epschain/ratfun.hpp"

#include <cctype>
#include <stdexcept>

namespace epschain {

// ---------------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.isZero()) throw std::domain_error("rational function with zero denominator");
    if (num_.isZero()) {
        den_ = MultiPoly(1);
        return;
    }
    if (!den_.isConstant()) {
        MultiPoly g = gcd(num_, den_);
        if (!g.isConstant()) {
            num_ = *num_.divideExact(g);
            den_ = *den_.divideExact(g);
        }
    }
    normalizeDen();
}

void RationalFunction::normalizeDen() {
    if (num_.isZero()) {
        den_ = MultiPoly(1);
        return;
    }
    BigRational c = den_.content();
    if (c != 1) {
        BigRational inv = 1 / c;
        den_ *= inv;
        num_ *= inv;
    }
}

BigRational RationalFunction::constantValue() const {
    if (!isConstant()) throw std::logic_error("constantValue of non-constant rational function " + toString());
    return num_.constantValue() / den_.constantValue();
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
    if (o.isZero()) return *this;
    if (isZero()) return *this = o;
    if (den_ == o.den_) {
        if (den_.isConstant()) {
            num_ += o.num_;
            if (num_.isZero()) den_ = MultiPoly(1);
            return *this;
        }
        *this = RationalFunction(num_ + o.num_, den_);
        return *this;
    }
    if (den_.isConstant() && o.den_.isConstant()) {
        num_ += o.num_;
        return *this;
    }
    if (den_.isConstant()) {
        *this = RationalFunction(num_ * o.den_ + o.num_, o.den_);
        return *this;
    }
    if (o.den_.isConstant()) {
        *this = RationalFunction(num_ + o.num_ * den_, den_);
        return *this;
    }
    MultiPoly g = gcd(den_, o.den_);
    MultiPoly a = *den_.divideExact(g);
    MultiPoly b = *o.den_.divideExact(g);
    *this = RationalFunction(num_ * b + o.num_ * a, den_ * b);
    return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
    if (isZero()) return *this;
    if (o.isZero()) return *this = RationalFunction();
    if (den_.isConstant() && o.den_.isConstant()) {
        num_ = num_ * o.num_;
        return *this;
    }
    MultiPoly a = num_, b = o.num_, c = den_, d = o.den_;
    if (!d.isConstant()) {
        MultiPoly g1 = gcd(a, d);
        if (!g1.isConstant()) {
            a = *a.divideExact(g1);
            d = *d.divideExact(g1);
        }
    }
    if (!c.isConstant()) {
        MultiPoly g2 = gcd(b, c);
        if (!g2.isConstant()) {
            b = *b.divideExact(g2);
            c = *c.divideExact(g2);
        }
    }
    num_ = a * b;
    den_ = c * d;
    normalizeDen();
    return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) { return *this *= o.inverse(); }

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFunction RationalFunction::inverse() const {
    if (isZero()) throw std::domain_error("inverse of zero rational function");
    RationalFunction r;
    r.num_ = den_;
    r.den_ = num_;
    r.normalizeDen();
    return r;
}

RationalFunction RationalFunction::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    RationalFunction r;
    r.num_ = num_.pow(static_cast<unsigned>(e));
    r.den_ = den_.pow(static_cast<unsigned>(e));
    r.normalizeDen();
    return r;
}

RationalFunction RationalFunction::evaluate(const std::string& v, const BigRational& value) const {
    MultiPoly d = den_.evaluate(v, value);
    if (d.isZero()) throw std::domain_error("pole at " + v + " = " + value.get_str());
    return RationalFunction(num_.evaluate(v, value), d);
}

BigRational RationalFunction::evaluateAll(const std::map<std::string, BigRational>& values) const {
    BigRational d = den_.evaluateAll(values);
    if (d == 0) throw std::domain_error("pole of " + toString());
    return num_.evaluateAll(values) / d;
}

RationalFunction RationalFunction::substitute(const std::string& v, const RationalFunction& s) const {
    if (!hasVar(v)) return *this;
    if (s.isPolynomial()) {
        MultiPoly sp = s.num_ * (1 / s.den_.constantValue());
        return RationalFunction(num_.substitute(v, sp), den_.substitute(v, sp));
    }
    // homogenize: p(N/D) = P~ / D^deg
    auto hom = [&](const MultiPoly& p, int& deg) {
        auto cs = p.coefficientsIn(v);
        deg = static_cast<int>(cs.size()) - 1;
        MultiPoly r;
        MultiPoly npow(1);
        std::vector<MultiPoly> dpow(cs.size());
        dpow[0] = MultiPoly(1);
        for (size_t i = 1; i < cs.size(); ++i) dpow[i] = dpow[i - 1] * s.den_;
        for (size_t i = 0; i < cs.size(); ++i) {
            r += cs[i] * npow * dpow[cs.size() - 1 - i];
            npow = npow * s.num_;
        }
        return r;
    };
    int dn = 0, dd = 0;
    MultiPoly n = hom(num_, dn), d = hom(den_, dd);
    if (dd > dn)
        n = n * s.den_.pow(static_cast<unsigned>(dd - dn));
    else if (dn > dd)
        d = d * s.den_.pow(static_cast<unsigned>(dn - dd));
    return RationalFunction(n, d);
}

RationalFunction RationalFunction::shift(const std::string& v, const BigRational& c) const {
    if (c == 0 || !hasVar(v)) return *this;
    RationalFunction r;
    r.num_ = num_.shift(v, c);
    r.den_ = den_.shift(v, c);
    r.normalizeDen();
    return r;
}

RationalFunction RationalFunction::derivative(const std::string& v) const {
    if (!hasVar(v)) return RationalFunction();
    if (den_.isConstant()) {
        RationalFunction r;
        r.num_ = num_.derivative(v) * (1 / den_.constantValue());
        return r;
    }
    return RationalFunction(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
}

std::string RationalFunction::toString() const {
    if (den_.isConstant()) return num_.toString();
    std::string n = num_.toString(), d = den_.toString();
    if (num_.termCount() > 1) n = "(" + n + ")";
    if (den_.termCount() > 1) d = "(" + d + ")";
    return n + "/" + d;
}

int RationalFunction::compare(const RationalFunction& a, const RationalFunction& b) {
    int c = MultiPoly::compare(a.den_, b.den_);
    if (c != 0) return c;
    return MultiPoly::compare(a.num_, b.num_);
}

// ---------------------------------------------------------------- URatFun

URatFun::URatFun(UPoly num, UPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.isZero()) throw std::domain_error("rational function with zero denominator");
    if (num_.isZero()) {
        den_ = UPoly(1);
        return;
    }
    if (den_.degree() > 0) {
        UPoly g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = UPoly::divExact(num_, g);
            den_ = UPoly::divExact(den_, g);
        }
    }
    BigRational l = den_.lc();
    if (l != 1) {
        BigRational inv = 1 / l;
        num_ *= inv;
        den_ *= inv;
    }
}

BigRational URatFun::constantValue() const {
    if (!isConstant()) throw std::logic_error("constantValue of non-constant rational function");
    return num_.coeff(0);
}

URatFun& URatFun::operator+=(const URatFun& o) {
    if (o.isZero()) return *this;
    if (isZero()) return *this = o;
    if (den_.isConstant() && o.den_.isConstant()) {
        num_ += o.num_;
        return *this;
    }
    if (den_ == o.den_) return *this = URatFun(num_ + o.num_, den_);
    UPoly g = gcd(den_, o.den_);
    UPoly a = UPoly::divExact(den_, g), b = UPoly::divExact(o.den_, g);
    return *this = URatFun(num_ * b + o.num_ * a, den_ * b);
}

URatFun& URatFun::operator-=(const URatFun& o) { return *this += -o; }

URatFun& URatFun::operator*=(const URatFun& o) {
    if (isZero()) return *this;
    if (o.isZero()) return *this = URatFun();
    if (den_.isConstant() && o.den_.isConstant()) {
        num_ *= o.num_;
        return *this;
    }
    UPoly a = num_, b = o.num_, c = den_, d = o.den_;
    UPoly g1 = gcd(a, d);
    if (g1.degree() > 0) {
        a = UPoly::divExact(a, g1);
        d = UPoly::divExact(d, g1);
    }
    UPoly g2 = gcd(b, c);
    if (g2.degree() > 0) {
        b = UPoly::divExact(b, g2);
        c = UPoly::divExact(c, g2);
    }
    UPoly n = a * b, dd = c * d;
    BigRational l = dd.lc();
    if (l != 1) {
        BigRational inv = 1 / l;
        n *= inv;
        dd *= inv;
    }
    num_ = std::move(n);
    den_ = std::move(dd);
    return *this;
}

URatFun& URatFun::operator/=(const URatFun& o) { return *this *= o.inverse(); }

URatFun URatFun::inverse() const {
    if (isZero()) throw std::domain_error("inverse of zero rational function");
    return URatFun(den_, num_);
}

URatFun URatFun::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    return URatFun(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)), true);
}

BigRational URatFun::operator()(const BigRational& v) const {
    BigRational d = den_(v);
    if (d == 0) throw std::domain_error("pole at " + v.get_str());
    return num_(v) / d;
}

URatFun URatFun::shift(const BigRational& c) const {
    if (c == 0) return *this;
    return URatFun(num_.shift(c), den_.shift(c), true);
}

URatFun URatFun::compose(const URatFun& s) const {
    auto hom = [&](const UPoly& p) {
        UPoly r;
        int d = p.degree();
        for (int i = 0; i <= d; ++i)
            r += p.coeff(i) * s.num_.pow(static_cast<unsigned>(i)) * s.den_.pow(static_cast<unsigned>(d - i));
        return r;
    };
    int dn = num_.degree(), dd = den_.degree();
    UPoly n = hom(num_), d = hom(den_);
    if (dd > dn) n *= s.den_.pow(static_cast<unsigned>(dd - dn));
    if (dn > dd) d *= s.den_.pow(static_cast<unsigned>(dn - dd));
    return URatFun(n, d);
}

URatFun URatFun::derivative() const {
    return URatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

std::string URatFun::toString(std::string_view var) const {
    if (den_.isConstant()) return num_.toString(var);
    std::string n = num_.toString(var), d = den_.toString(var);
    return "(" + n + ")/(" + d + ")";
}

int URatFun::compare(const URatFun& a, const URatFun& b) {
    int c = UPoly::compare(a.den_, b.den_);
    if (c != 0) return c;
    return UPoly::compare(a.num_, b.num_);
}

RationalFunction URatFun::toMulti(const std::string& var) const {
    return RationalFunction(MultiPoly::fromUPoly(num_, var), MultiPoly::fromUPoly(den_, var));
}

URatFun URatFun::fromMulti(const RationalFunction& r, const std::string& var) {
    return URatFun(r.num().toUPoly(var), r.den().toUPoly(var));
}

// ---------------------------------------------------------------- parser

namespace {

struct Lexer {
    enum class T { Num, Ident, Op, End };
    struct Tok {
        T type;
        std::string text;
    };
    std::vector<Tok> toks;
    size_t pos = 0;

    explicit Lexer(std::string_view s) {
        size_t i = 0;
        while (i < s.size()) {
            unsigned char c = static_cast<unsigned char>(s[i]);
            if (std::isspace(c)) {
                ++i;
            } else if (std::isdigit(c)) {
                size_t j = i;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                toks.push_back({T::Num, std::string(s.substr(i, j - i))});
                i = j;
            } else if (std::isalpha(c) || c == '_') {
                size_t j = i;
                while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
                toks.push_back({T::Ident, std::string(s.substr(i, j - i))});
                i = j;
            } else if (s.compare(i, 2, "\xce\xb5") == 0) {  // UTF-8 epsilon
                toks.push_back({T::Ident, "eps"});
                i += 2;
            } else if (std::string_view("+-*/^()").find(static_cast<char>(c)) != std::string_view::npos) {
                toks.push_back({T::Op, std::string(1, static_cast<char>(c))});
                ++i;
            } else {
                throw std::invalid_argument("unexpected character '" + std::string(1, static_cast<char>(c)) +
                                            "' in '" + std::string(s) + "'");
            }
        }
        toks.push_back({T::End, ""});
    }
    const Tok& peek() const { return toks[pos]; }
    Tok next() { return toks[pos++]; }
    bool isOp(const char* op) const { return peek().type == T::Op && peek().text == op; }
};

struct Parser {
    Lexer lex;
    explicit Parser(std::string_view s) : lex(s) {}

    RationalFunction expr() {
        RationalFunction r = term();
        while (lex.isOp("+") || lex.isOp("-")) {
            bool plus = lex.next().text == "+";
            RationalFunction t = term();
            if (plus)
                r += t;
            else
                r -= t;
        }
        return r;
    }
    bool startsAtom() const {
        const auto& t = lex.peek();
        return t.type == Lexer::T::Num || t.type == Lexer::T::Ident || (t.type == Lexer::T::Op && t.text == "(");
    }
    RationalFunction term() {
        RationalFunction r = unary();
        while (true) {
            if (lex.isOp("*")) {
                lex.next();
                r *= unary();
            } else if (lex.isOp("/")) {
                lex.next();
                RationalFunction d = unary();
                if (d.isZero()) throw std::invalid_argument("division by zero");
                r /= d;
            } else if (startsAtom()) {
                r *= power();
            } else {
                break;
            }
        }
        return r;
    }
    RationalFunction unary() {
        if (lex.isOp("-")) {
            lex.next();
            return -unary();
        }
        if (lex.isOp("+")) {
            lex.next();
            return unary();
        }
        return power();
    }
    long exponent() {
        bool neg = false;
        bool paren = false;
        if (lex.isOp("(")) {
            lex.next();
            paren = true;
        }
        if (lex.isOp("-")) {
            lex.next();
            neg = true;
        }
        auto t = lex.next();
        if (t.type != Lexer::T::Num) throw std::invalid_argument("expected integer exponent");
        if (paren) {
            if (!lex.isOp(")")) throw std::invalid_argument("expected ')'");
            lex.next();
        }
        long e = std::stol(t.text);
        return neg ? -e : e;
    }
    RationalFunction power() {
        RationalFunction b = atom();
        if (lex.isOp("^")) {
            lex.next();
            long e = exponent();
            if (e < 0 && b.isZero()) throw std::invalid_argument("zero to a negative power");
            return b.pow(static_cast<int>(e));
        }
        return b;
    }
    RationalFunction atom() {
        auto t = lex.next();
        if (t.type == Lexer::T::Num) return RationalFunction(BigRational(BigInt(t.text)));
        if (t.type == Lexer::T::Ident) return RationalFunction::variable(t.text);
        if (t.type == Lexer::T::Op && t.text == "(") {
            RationalFunction r = expr();
            if (!lex.isOp(")")) throw std::invalid_argument("expected ')'");
            lex.next();
            return r;
        }
        throw std::invalid_argument("unexpected token '" + t.text + "'");
    }
};

}  // namespace

RationalFunction parseRationalFunction(std::string_view text) {
    Parser p(text);
    RationalFunction r = p.expr();
    if (p.lex.peek().type != Lexer::T::End)
        throw std::invalid_argument("trailing input in '" + std::string(text) + "'");
    return r;
}

MultiPoly parsePolynomial(std::string_view text) {
    RationalFunction r = parseRationalFunction(text);
    if (!r.isPolynomial()) throw std::invalid_argument("not a polynomial: '" + std::string(text) + "'");
    return r.num() * (1 / r.den().constantValue());
}

}  // namespace epschain
