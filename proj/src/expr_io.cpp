#include "epschain/expr_io.hpp"

#include <algorithm>
#include <cctype>

namespace epschain {

namespace {

std::string innerVar(int depth) {
    static const char* names[] = {"j", "i", "k", "m", "p", "q", "r", "s", "t"};
    if (depth < 9) return names[depth];
    return "j" + std::to_string(depth);
}

// integer polynomial, descending, e.g. 3n^3+18n^2-n+18
std::string polyText(const UPoly& p, const std::string& var, bool latex) {
    std::string out;
    for (int d = p.degree(); d >= 0; --d) {
        const BigRational& c = p.coeff(d);
        if (c == 0) continue;
        bool neg = c < 0;
        BigRational a = abs(c);
        if (!out.empty())
            out += neg ? "-" : "+";
        else if (neg)
            out += "-";
        if (d == 0 || a != 1) out += toString(a);
        if (d > 0) {
            if (latex && a != 1) out += " ";
            out += var;
            if (d > 1) out += latex ? "^{" + std::to_string(d) + "}" : "^" + std::to_string(d);
        }
    }
    return out.empty() ? "0" : out;
}

bool multiTerm(const UPoly& p) {
    int n = 0;
    for (const auto& c : p.coeffs())
        if (c != 0) ++n;
    return n > 1;
}

struct RatParts {
    bool negative = false;
    BigInt a{1}, b{1};       // |content| = a/b
    UPoly p{1};              // primitive numerator, positive leading coefficient
    std::vector<std::pair<UPoly, int>> den;  // primitive integer factors
};

RatParts ratParts(const URatFun& r) {
    RatParts out;
    LinearFactorization f = factorLinear(r.den());
    std::vector<std::pair<BigRational, int>> roots = f.roots;
    std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    UPoly dint(1);
    for (const auto& [root, m] : roots) {
        UPoly lin = UPoly::linear(BigRational(root.get_den()), BigRational(-root.get_num()));
        out.den.emplace_back(lin, m);
        dint *= lin.pow(static_cast<unsigned>(m));
    }
    for (const auto& [q, m] : f.rest) {
        UPoly pq = q.primitive();
        out.den.emplace_back(pq, m);
        dint *= pq.pow(static_cast<unsigned>(m));
    }
    UPoly num = r.num() * dint.lc();
    BigRational c = num.content();
    out.p = num.primitive();
    out.negative = c < 0;
    BigRational ac = abs(c);
    out.a = ac.get_num();
    out.b = ac.get_den();
    return out;
}

std::string factorText(const UPoly& q, int m, const std::string& var, bool latex) {
    std::string s = (q.degree() == 1 && q.coeff(0) == 0 && q.lc() == 1) ? var : "(" + polyText(q, var, latex) + ")";
    if (m > 1) s += latex ? "^{" + std::to_string(m) + "}" : "^" + std::to_string(m);
    return s;
}

bool isNumber(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::string joinFactors(const std::vector<std::string>& items) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i > 0 && !(isNumber(items[i - 1]) && !std::isdigit(static_cast<unsigned char>(items[i][0]))) &&
            items[i][0] != '(')
            out += "*";
        out += items[i];
    }
    return out;
}

std::string denText(const RatParts& rp, const std::string& var) {
    std::vector<std::string> items;
    if (rp.b != 1) items.push_back(toString(rp.b));
    for (const auto& [q, m] : rp.den) items.push_back(factorText(q, m, var, false));
    if (items.empty()) return "";
    std::string s = joinFactors(items);
    return items.size() > 1 ? "(" + s + ")" : s;
}

// numerator items: the content and polynomial part
std::vector<std::string> numItems(const RatParts& rp, const std::string& var, bool more) {
    std::vector<std::string> items;
    bool pOne = rp.p == UPoly(1);
    if (rp.a != 1 || (pOne && !more)) items.push_back(toString(rp.a));
    if (!pOne) {
        std::string pt = polyText(rp.p, var, false);
        bool wrap = multiTerm(rp.p) && (!items.empty() || more || !rp.den.empty() || rp.b != 1 || rp.negative);
        items.push_back(wrap ? "(" + pt + ")" : pt);
    }
    return items;
}

std::optional<std::vector<int>> harmonicIndex(const Expr& e) {
    if (e.kind() != Expr::Kind::Sum || e.sumLower() != 1 || e.sumInfinite()) return std::nullopt;
    const Expr& b = e.sumBody();
    std::vector<Expr> parts = b.kind() == Expr::Kind::Mul ? b.children() : std::vector<Expr>{b};
    if (parts.empty() || parts[0].kind() != Expr::Kind::Rat) return std::nullopt;
    const URatFun& r = parts[0].rat();
    if (!(r.num() == UPoly(1)) || r.den().degree() < 1 || !(r.den() == UPoly::monomial(1, r.den().degree())))
        return std::nullopt;
    int a = r.den().degree();
    std::vector<int> idx{a};
    size_t i = 1;
    if (i < parts.size() && parts[i].kind() == Expr::Kind::Prod) {
        idx[0] = -a;
        ++i;
    }
    if (i < parts.size()) {
        auto inner = harmonicIndex(parts[i]);
        if (!inner) return std::nullopt;
        idx.insert(idx.end(), inner->begin(), inner->end());
        ++i;
    }
    if (i != parts.size()) return std::nullopt;
    if (!Expr::structurallyEqual(e, Expr::harmonic(idx))) return std::nullopt;
    return idx;
}

std::string indexText(const std::vector<int>& idx) {
    std::string s;
    for (size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
    return s;
}

bool isNegativeTerm(const Expr& e) {
    if (e.kind() == Expr::Kind::Rat) return e.rat().num().lc() < 0;
    if (e.kind() == Expr::Kind::Mul && e.children()[0].kind() == Expr::Kind::Rat)
        return e.children()[0].rat().num().lc() < 0;
    return false;
}

// ---------------------------------------------------------------- text

std::string text(const Expr& e, const std::string& var, int depth);

std::string atomText(const Expr& e, const std::string& var, int depth) {
    switch (e.kind()) {
        case Expr::Kind::Zeta: return "zeta(" + std::to_string(e.zetaWeight()) + ")";
        case Expr::Kind::Prod: {
            const HGProduct& p = e.prod();
            if (p.lower == 1 && p.ratio.isConstant()) {
                BigRational z = p.ratio.constantValue();
                std::string zs = toString(z);
                return (z > 0 && z.get_den() == 1 ? zs : "(" + zs + ")") + "^" + var;
            }
            std::string v = innerVar(depth);
            return "prod(" + v + "=" + std::to_string(p.lower) + ".." + var + ", " + renderRational(p.ratio, v) + ")";
        }
        case Expr::Kind::Sum: {
            if (auto idx = harmonicIndex(e)) return "S[" + indexText(*idx) + "](" + var + ")";
            std::string v = innerVar(depth);
            return "sum(" + v + "=" + std::to_string(e.sumLower()) + ".." + (e.sumInfinite() ? "inf" : var) + ", " +
                   text(e.sumBody(), v, depth + 1) + ")";
        }
        default: return "(" + text(e, var, depth) + ")";
    }
}

std::string ratText(const URatFun& r, const std::string& var) {
    if (r.isZero()) return "0";
    RatParts rp = ratParts(r);
    std::string d = denText(rp, var);
    std::string s = (rp.negative ? "-" : "") + joinFactors(numItems(rp, var, false));
    return d.empty() ? s : s + "/" + d;
}

std::string mulText(const Expr& e, const std::string& var, int depth) {
    const auto& ch = e.children();
    URatFun coeff(1);
    size_t start = 0;
    if (ch[0].kind() == Expr::Kind::Rat) {
        coeff = ch[0].rat();
        start = 1;
    }
    RatParts rp = ratParts(coeff);
    // content, then the factors, then the polynomial part of the numerator
    std::vector<std::string> items = numItems(rp, var, true);
    std::string poly;
    if (!(rp.p == UPoly(1))) {
        poly = items.back();
        items.pop_back();
    }
    for (size_t i = start; i < ch.size(); ++i) items.push_back(atomText(ch[i], var, depth));
    if (!poly.empty()) items.push_back(poly);
    std::string d = denText(rp, var);
    std::string s = (rp.negative ? "-" : "") + joinFactors(items);
    return d.empty() ? s : s + "/" + d;
}

std::string text(const Expr& e, const std::string& var, int depth) {
    switch (e.kind()) {
        case Expr::Kind::Rat: return ratText(e.rat(), var);
        case Expr::Kind::Mul: return mulText(e, var, depth);
        case Expr::Kind::Add: {
            std::string out;
            for (size_t i = 0; i < e.children().size(); ++i) {
                const Expr& c = e.children()[i];
                if (i == 0) {
                    out = text(c, var, depth);
                } else if (isNegativeTerm(c)) {
                    out += " - " + text(-c, var, depth);
                } else {
                    out += " + " + text(c, var, depth);
                }
            }
            return out;
        }
        default: return atomText(e, var, depth);
    }
}

// ---------------------------------------------------------------- latex

std::string latex(const Expr& e, const std::string& var, int depth);

std::string latexDen(const RatParts& rp, const std::string& var) {
    std::vector<std::string> items;
    if (rp.b != 1) items.push_back(toString(rp.b));
    for (const auto& [q, m] : rp.den) items.push_back(factorText(q, m, var, true));
    if (items.size() == 1 && rp.b == 1 && rp.den[0].second == 1) return polyText(rp.den[0].first, var, true);
    std::string s;
    for (size_t i = 0; i < items.size(); ++i) s += (i ? " " : "") + items[i];
    return s;
}

std::string latexNum(const RatParts& rp, const std::string& var, const std::vector<std::string>& extra) {
    std::vector<std::string> items;
    bool pOne = rp.p == UPoly(1);
    if (rp.a != 1 || (pOne && extra.empty())) items.push_back(toString(rp.a));
    if (!pOne) {
        std::string pt = polyText(rp.p, var, true);
        items.push_back(multiTerm(rp.p) && (!items.empty() || !extra.empty()) ? "\\left(" + pt + "\\right)" : pt);
    }
    items.insert(items.end(), extra.begin(), extra.end());
    std::string s;
    for (size_t i = 0; i < items.size(); ++i) s += (i ? " " : "") + items[i];
    return s;
}

std::string latexFrac(const RatParts& rp, const std::string& var, const std::vector<std::string>& extra) {
    std::string n = latexNum(rp, var, extra), d = latexDen(rp, var);
    std::string s = d.empty() ? n : "\\frac{" + n + "}{" + d + "}";
    return (rp.negative ? "-" : "") + s;
}

std::string latexAtom(const Expr& e, const std::string& var, int depth) {
    switch (e.kind()) {
        case Expr::Kind::Zeta: return "\\zeta(" + std::to_string(e.zetaWeight()) + ")";
        case Expr::Kind::Prod: {
            const HGProduct& p = e.prod();
            if (p.lower == 1 && p.ratio.isConstant()) {
                BigRational z = p.ratio.constantValue();
                std::string zs = z.get_den() == 1 ? toString(z) : "\\frac{" + toString(BigRational(z.get_num())) +
                                                                        "}{" + toString(BigRational(z.get_den())) + "}";
                return (z > 0 && z.get_den() == 1 ? zs : "\\left(" + zs + "\\right)") + "^{" + var + "}";
            }
            std::string v = innerVar(depth);
            return "\\prod_{" + v + "=" + std::to_string(p.lower) + "}^{" + var + "} " +
                   latexFrac(ratParts(p.ratio), v, {});
        }
        case Expr::Kind::Sum: {
            if (auto idx = harmonicIndex(e)) return "S_{" + indexText(*idx) + "}(" + var + ")";
            std::string v = innerVar(depth);
            return "\\sum_{" + v + "=" + std::to_string(e.sumLower()) + "}^{" + (e.sumInfinite() ? "\\infty" : var) +
                   "} \\left(" + latex(e.sumBody(), v, depth + 1) + "\\right)";
        }
        default: return "\\left(" + latex(e, var, depth) + "\\right)";
    }
}

std::string latex(const Expr& e, const std::string& var, int depth) {
    switch (e.kind()) {
        case Expr::Kind::Rat: {
            if (e.rat().isZero()) return "0";
            return latexFrac(ratParts(e.rat()), var, {});
        }
        case Expr::Kind::Mul: {
            const auto& ch = e.children();
            URatFun coeff(1);
            size_t start = 0;
            if (ch[0].kind() == Expr::Kind::Rat) {
                coeff = ch[0].rat();
                start = 1;
            }
            std::vector<std::string> extra;
            for (size_t i = start; i < ch.size(); ++i) extra.push_back(latexAtom(ch[i], var, depth));
            return latexFrac(ratParts(coeff), var, extra);
        }
        case Expr::Kind::Add: {
            std::string out;
            for (size_t i = 0; i < e.children().size(); ++i) {
                const Expr& c = e.children()[i];
                if (i == 0)
                    out = latex(c, var, depth);
                else if (isNegativeTerm(c))
                    out += " - " + latex(-c, var, depth);
                else
                    out += " + " + latex(c, var, depth);
            }
            return out;
        }
        default: return latexAtom(e, var, depth);
    }
}

// ---------------------------------------------------------------- parser

struct Token {
    enum Kind { Num, Ident, Sym, End } kind = End;
    std::string text;
    size_t pos = 0;
};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) { lex(); }

    Expr parseTop(const std::string& var) {
        vars_.push_back(var);
        Expr e = parseSum();
        if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'");
        return e;
    }

private:
    void lex() {
        size_t i = 0;
        while (i < src_.size()) {
            unsigned char c = static_cast<unsigned char>(src_[i]);
            if (std::isspace(c)) {
                ++i;
                continue;
            }
            Token t;
            t.pos = i;
            if (src_.compare(i, 3, "\xE2\x88\x92") == 0) {  // unicode minus
                t.kind = Token::Sym;
                t.text = "-";
                i += 3;
            } else if (src_.compare(i, 2, "\xCE\xB6") == 0) {  // zeta letter
                t.kind = Token::Ident;
                t.text = "zeta";
                i += 2;
            } else if (std::isdigit(c)) {
                t.kind = Token::Num;
                while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) t.text += src_[i++];
            } else if (std::isalpha(c) || c == '_') {
                t.kind = Token::Ident;
                while (i < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[i])) || src_[i] == '_'))
                    t.text += src_[i++];
            } else if (src_.compare(i, 2, "..") == 0) {
                t.kind = Token::Sym;
                t.text = "..";
                i += 2;
            } else if (std::string_view("+-*/^()[],=").find(static_cast<char>(c)) != std::string_view::npos) {
                t.kind = Token::Sym;
                t.text = std::string(1, static_cast<char>(c));
                ++i;
            } else {
                failAt(i, "unexpected character");
            }
            toks_.push_back(t);
        }
        Token end;
        end.pos = src_.size();
        toks_.push_back(end);
    }

    [[noreturn]] void failAt(size_t pos, const std::string& msg) const {
        size_t line = 1, col = 1;
        for (size_t i = 0; i < pos && i < src_.size(); ++i) {
            if (src_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }
    [[noreturn]] void fail(const std::string& msg) const { failAt(peek().pos, msg); }

    const Token& peek() const { return toks_[idx_]; }
    Token next() { return toks_[idx_++]; }
    bool isSym(const char* s) const { return peek().kind == Token::Sym && peek().text == s; }
    void expect(const char* s) {
        if (!isSym(s)) fail(std::string("expected '") + s + "'");
        ++idx_;
    }
    const std::string& var() const { return vars_.back(); }

    long parseInt() {
        bool neg = false;
        if (isSym("-")) {
            neg = true;
            ++idx_;
        }
        if (peek().kind != Token::Num) fail("expected an integer");
        BigInt v(next().text);
        if (!v.fits_slong_p()) fail("integer out of range");
        return neg ? -v.get_si() : v.get_si();
    }

    Expr parseSum() {
        Expr e = parseTerm();
        while (isSym("+") || isSym("-")) {
            bool minus = next().text == "-";
            Expr t = parseTerm();
            e = minus ? e - t : e + t;
        }
        return e;
    }

    bool startsPrimary() const {
        const Token& t = peek();
        return t.kind == Token::Num || t.kind == Token::Ident || (t.kind == Token::Sym && t.text == "(");
    }

    Expr parseTerm() {
        Expr e = parseUnary();
        for (;;) {
            if (isSym("*")) {
                ++idx_;
                e = e * parseUnary();
            } else if (isSym("/")) {
                size_t pos = next().pos;
                Expr d = parsePower();
                if (!d.isRational() || d.rat().isZero()) failAt(pos, "division by a non-rational or zero expression");
                e = e * Expr(d.rat().inverse());
            } else if (startsPrimary()) {
                e = e * parsePower();
            } else {
                return e;
            }
        }
    }

    Expr parseUnary() {
        if (isSym("-")) {
            ++idx_;
            return -parseUnary();
        }
        if (isSym("+")) {
            ++idx_;
            return parseUnary();
        }
        return parsePower();
    }

    Expr parsePower() {
        Expr base = parsePrimary();
        if (!isSym("^")) return base;
        size_t pos = next().pos;
        if (peek().kind == Token::Ident && peek().text == var()) {
            ++idx_;
            if (!base.isRational() || !base.rat().isConstant() || base.rat().isZero())
                failAt(pos, "only nonzero constants can be raised to the power " + var());
            return Expr::power(base.rat().constantValue());
        }
        long k;
        if (isSym("(")) {
            ++idx_;
            k = parseInt();
            expect(")");
        } else {
            k = parseInt();
        }
        if (base.isRational()) {
            if (base.rat().isZero() && k < 0) failAt(pos, "zero to a negative power");
            return Expr(base.rat().pow(static_cast<int>(k)));
        }
        if (k < 0) failAt(pos, "negative power of a non-rational expression");
        Expr r(1);
        for (long i = 0; i < k; ++i) r = r * base;
        return r;
    }

    Expr parseBound(std::string& bound, long& lower) {
        Token v = next();
        if (v.kind != Token::Ident) failAt(v.pos, "expected a summation variable");
        expect("=");
        lower = parseInt();
        expect("..");
        Token up = next();
        if (up.kind != Token::Ident || (up.text != var() && up.text != "inf"))
            failAt(up.pos, "upper bound must be " + var() + " or inf");
        bound = up.text;
        expect(",");
        vars_.push_back(v.text);
        Expr body = parseSum();
        vars_.pop_back();
        expect(")");
        return body;
    }

    Expr parsePrimary() {
        Token t = next();
        if (t.kind == Token::Num) return Expr(BigRational(BigInt(t.text)));
        if (t.kind == Token::Sym && t.text == "(") {
            Expr e = parseSum();
            expect(")");
            return e;
        }
        if (t.kind != Token::Ident) failAt(t.pos, t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
        if (t.text == var()) return Expr::var();
        if (t.text == "S" && isSym("[")) {
            ++idx_;
            std::vector<int> idx;
            do {
                size_t pos = peek().pos;
                long a = parseInt();
                if (a == 0) failAt(pos, "harmonic sum index 0");
                idx.push_back(static_cast<int>(a));
            } while (isSym(",") && (++idx_, true));
            expect("]");
            expect("(");
            Token v = next();
            if (v.kind != Token::Ident || v.text != var()) failAt(v.pos, "harmonic sum argument must be " + var());
            expect(")");
            return Expr::harmonic(idx);
        }
        if (t.text == "zeta") {
            expect("(");
            size_t pos = peek().pos;
            long w = parseInt();
            if (w < 2) failAt(pos, "zeta weight must be at least 2");
            expect(")");
            return Expr::zeta(static_cast<int>(w));
        }
        if (t.text == "sum" && isSym("(")) {
            ++idx_;
            std::string bound;
            long lower;
            Expr body = parseBound(bound, lower);
            return Expr::sum(lower, body, bound == "inf");
        }
        if (t.text == "prod" && isSym("(")) {
            ++idx_;
            size_t pos = peek().pos;
            std::string bound;
            long lower;
            Expr body = parseBound(bound, lower);
            if (bound == "inf") failAt(pos, "infinite products are not supported");
            if (!body.isRational() || body.rat().isZero()) failAt(pos, "product ratio must be a nonzero rational function");
            return Expr::product(HGProduct{lower, body.rat(), std::nullopt});
        }
        failAt(t.pos, "unknown identifier '" + t.text + "'");
    }

    std::string_view src_;
    std::vector<Token> toks_;
    size_t idx_ = 0;
    std::vector<std::string> vars_;
};

URatFun parseRat(const std::string& s) {
    RationalFunction r = parseRationalFunction(s);
    for (const auto& v : r.vars())
        if (v != "n") throw std::invalid_argument("rational leaf may only use the variable n: " + s);
    return URatFun::fromMulti(r, "n");
}

}  // namespace

std::string renderRational(const URatFun& r, const std::string& var) { return ratText(r, var); }

std::string renderText(const Expr& e, const std::string& var) { return text(e, var, 0); }

std::string renderLatex(const Expr& e, const std::string& var) { return latex(e, var, 0); }

std::string renderExpr(const Expr& e, ExprFormat f, const std::string& var) {
    switch (f) {
        case ExprFormat::Text: return renderText(e, var);
        case ExprFormat::Latex: return renderLatex(e, var);
        case ExprFormat::Json: return exprToJson(e).dump();
    }
    return {};
}

Expr parseExpr(std::string_view src, const std::string& var) { return Parser(src).parseTop(var); }

nlohmann::json exprToJson(const Expr& e) {
    using nlohmann::json;
    switch (e.kind()) {
        case Expr::Kind::Rat: return json{{"rat", renderRational(e.rat(), "n")}};
        case Expr::Kind::Zeta: return json{{"zeta", e.zetaWeight()}};
        case Expr::Kind::Prod:
            return json{{"prod", {{"lower", e.prod().lower}, {"ratio", renderRational(e.prod().ratio, "n")}}}};
        case Expr::Kind::Sum:
            return json{{"sum", {{"lower", e.sumLower()}, {"body", exprToJson(e.sumBody())}, {"infinite", e.sumInfinite()}}}};
        case Expr::Kind::Add:
        case Expr::Kind::Mul: {
            json arr = json::array();
            for (const auto& c : e.children()) arr.push_back(exprToJson(c));
            return json{{e.kind() == Expr::Kind::Add ? "add" : "mul", arr}};
        }
    }
    return nullptr;
}

Expr exprFromJson(const nlohmann::json& j) {
    if (j.is_string()) return parseExpr(j.get<std::string>());
    if (j.is_number_integer()) return Expr(BigRational(j.get<long>()));
    if (!j.is_object() || j.size() != 1) throw std::invalid_argument("expression node must be an object with one key");
    const auto& [key, v] = *j.items().begin();
    if (key == "rat") {
        if (v.is_number_integer()) return Expr(BigRational(v.get<long>()));
        return Expr(parseRat(v.get<std::string>()));
    }
    if (key == "zeta") return Expr::zeta(v.get<int>());
    if (key == "S") return Expr::harmonic(v.get<std::vector<int>>());
    if (key == "prod") {
        long lower = v.value("lower", 1L);
        const auto& ratio = v.at("ratio");
        URatFun r = ratio.is_number_integer() ? URatFun(BigRational(ratio.get<long>())) : parseRat(ratio.get<std::string>());
        return Expr::product(HGProduct{lower, r, std::nullopt});
    }
    if (key == "sum")
        return Expr::sum(v.value("lower", 1L), exprFromJson(v.at("body")), v.value("infinite", false));
    if (key == "add" || key == "mul") {
        std::vector<Expr> parts;
        for (const auto& c : v) parts.push_back(exprFromJson(c));
        return key == "add" ? Expr::add(parts) : Expr::mul(parts);
    }
    throw std::invalid_argument("unknown expression node '" + key + "'");
}

}  // namespace epschain
