#include "epschain/problem.hpp"

#include "epschain/coupled.hpp"
#include "epschain/eps_solve.hpp"
#include "epschain/guess.hpp"
#include "epschain/telescope.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

namespace epschain {

using nlohmann::json;

namespace {

const std::vector<std::string> kPayloadKeys = {"telescope", "rec", "epsrec", "system", "guess", "eval"};

struct ConstructiveFailure {
    std::string stage;
    std::optional<int> order;
    std::optional<std::string> component;
    std::string reason;
    json partial;
};

// every problem-independent failure inside a field becomes a SchemaError
template <class F>
auto inField(const std::string& field, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const SchemaError&) {
        throw;
    } catch (const ParseError& e) {
        throw SchemaError(field, e.what());
    } catch (const std::invalid_argument& e) {
        throw SchemaError(field, e.what());
    } catch (const json::exception& e) {
        throw SchemaError(field, e.what());
    }
}

std::string sub(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string sub(const std::string& path, size_t i) { return path + "/" + std::to_string(i); }

const json& required(const json& o, const std::string& key, const std::string& path) {
    if (!o.is_object()) throw SchemaError(path, "must be an object");
    auto it = o.find(key);
    if (it == o.end()) throw SchemaError(sub(path, key), "required field is missing");
    return *it;
}

long toLong(const json& j, const std::string& field) {
    if (j.is_number_integer()) return j.get<long>();
    if (j.is_string()) {
        return inField(field, [&] {
            BigRational q = parseRational(j.get<std::string>());
            if (q.get_den() != 1 || !q.get_num().fits_slong_p()) throw std::invalid_argument("not a machine integer");
            return q.get_num().get_si();
        });
    }
    throw SchemaError(field, "must be an integer");
}

int toInt(const json& j, const std::string& field) {
    long v = toLong(j, field);
    if (v < INT32_MIN || v > INT32_MAX) throw SchemaError(field, "out of range");
    return static_cast<int>(v);
}

BigRational toRational(const json& j, const std::string& field) {
    if (j.is_number_integer()) return BigRational(j.get<long>());
    if (j.is_string()) return inField(field, [&] { return parseRational(j.get<std::string>()); });
    throw SchemaError(field, "numbers must be exact integers or \"p/q\" strings");
}

ZetaValue toValue(const json& j, const std::string& field) {
    if (j.is_number_integer()) return ZetaValue(j.get<long>());
    if (j.is_string()) return inField(field, [&] { return ZetaValue::parse(j.get<std::string>()); });
    throw SchemaError(field, "values must be exact integers or strings");
}

RationalFunction toRatFun(const json& j, const std::string& field) {
    if (j.is_number_integer()) return RationalFunction(BigRational(j.get<long>()));
    if (j.is_string()) return inField(field, [&] { return parseRationalFunction(j.get<std::string>()); });
    if (j.is_object() && j.contains("num")) {
        MultiPoly num = polyFromJson(j.at("num"), sub(field, "num"));
        MultiPoly den = j.contains("den") ? polyFromJson(j.at("den"), sub(field, "den")) : MultiPoly(1);
        return inField(field, [&] { return RationalFunction(num, den); });
    }
    throw SchemaError(field, "must be a rational function");
}

Expr toExpr(const json& j, const std::string& var, const std::string& field) {
    if (j.is_string()) return inField(field, [&] { return parseExpr(j.get<std::string>(), var); });
    return inField(field, [&] { return exprFromJson(j); });
}

std::pair<int, int> toOrders(const json& j, const std::string& field) {
    if (j.is_array() && j.size() == 2) return {toInt(j[0], sub(field, 0)), toInt(j[1], sub(field, 1))};
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        auto c = s.find(':');
        if (c != std::string::npos)
            return inField(field, [&] { return std::pair<int, int>{std::stoi(s.substr(0, c)), std::stoi(s.substr(c + 1))}; });
    }
    throw SchemaError(field, "must be [l, r] or \"l:r\"");
}

std::string str(const BigRational& q) { return toString(q); }

json ratFunToJson(const RationalFunction& r) {
    return json{{"num", polyToJson(r.num())}, {"den", polyToJson(r.den())}, {"text", r.toString()}};
}

json exprOut(const Expr& e, ExprFormat f, const std::string& var) {
    if (f == ExprFormat::Json) return exprToJson(e);
    return renderExpr(e, f, var);
}

json seqOut(const Sequence& s, ExprFormat f, const std::string& var) {
    json vals = json::object();
    for (const auto& [n, v] : s.values) vals[std::to_string(n)] = v.toString();
    return json{{"expr", exprOut(s.expr, f, var)}, {"validFrom", s.validFrom}, {"values", vals}};
}

json polysOut(const std::vector<MultiPoly>& ps) {
    json a = json::array();
    for (const auto& p : ps) a.push_back(polyToJson(p));
    return a;
}

json recOut(const LinearRecurrence& r, ExprFormat f) {
    return json{{"coeffs", polysOut(r.coeffs)}, {"rhs", seqOut(r.rhs, f, "n")}, {"delta", r.delta()},
                {"text", r.toString()}};
}

json basisOut(const SolutionBasis& b, ExprFormat f, const std::string& var) {
    json h = json::array();
    for (const auto& e : b.homogeneous) h.push_back(exprOut(e, f, var));
    return json{{"homogeneous", h},
                {"particular", b.particular ? exprOut(*b.particular, f, var) : json(nullptr)},
                {"validFrom", b.validFrom},
                {"complete", b.complete}};
}

json certOut(const TelescopeCertificate& c) {
    json parts = json::array();
    for (const auto& p : c.parts) parts.push_back(certOut(p));
    return json{{"kind", c.kind == TelescopeCertificate::Kind::Discrete ? "discrete" : "continuous"},
                {"outer", c.outer},
                {"inner", c.inner},
                {"order", c.order()},
                {"coeffs", polysOut(c.coeffs)},
                {"certificate", ratFunToJson(c.certificate)},
                {"boundary", ratFunToJson(c.boundary)},
                {"validFrom", c.validFrom},
                {"parts", parts}};
}

// verification report under construction
struct Report {
    long window = 0;
    json checks = json::array();
    bool passed = true;

    template <class F>
    void check(const std::string& name, F&& f) {
        bool ok;
        std::string note;
        try {
            ok = f();
        } catch (const std::exception& e) {
            ok = false;
            note = e.what();
        }
        json c{{"name", name}, {"passed", ok}};
        if (!note.empty()) c["note"] = note;
        checks.push_back(c);
        passed = passed && ok;
    }
    json toJson() const {
        return json{{"window", window}, {"passed", window > 0 ? json(passed) : json(nullptr)}, {"checks", checks}};
    }
};

// one problem in flight
struct Context {
    const json& root;
    const json& payload;
    std::string path;  // of the payload
    const RunOptions& flags;
    ExprFormat format = ExprFormat::Json;
    Report report;
    std::string csv;
    json out = json::object();
    std::optional<ConstructiveFailure> failure;

    Context(const json& r, const json& p, std::string pth, const RunOptions& f)
        : root(r), payload(p), path(std::move(pth)), flags(f) {}

    const json* options() const {
        auto it = root.find("options");
        return it == root.end() ? nullptr : &*it;
    }
    // payload field, else the problem root for fields shared with it
    const json* field(const std::string& key, bool rootToo = false) const {
        if (payload.is_object()) {
            auto it = payload.find(key);
            if (it != payload.end()) return &*it;
        }
        if (rootToo) {
            auto it = root.find(key);
            if (it != root.end()) return &*it;
        }
        return nullptr;
    }
    std::string fieldPath(const std::string& key) const {
        return payload.is_object() && payload.contains(key) ? sub(path, key) : "/" + key;
    }
    const json* option(const std::string& key) const {
        const json* o = options();
        if (!o || !o->contains(key)) return nullptr;
        return &o->at(key);
    }

    int maxOrder(int def) const {
        if (flags.maxOrder) return *flags.maxOrder;
        if (auto j = field("maxOrder")) return toInt(*j, sub(path, "maxOrder"));
        if (auto j = option("maxOrder")) return toInt(*j, "/options/maxOrder");
        return def;
    }
    std::optional<std::pair<int, int>> orders(bool rootToo) const {
        if (flags.orders) return flags.orders;
        if (auto j = field("orders", rootToo)) return toOrders(*j, fieldPath("orders"));
        if (auto j = option("orders")) return toOrders(*j, "/options/orders");
        return std::nullopt;
    }
    std::pair<int, int> requiredOrders(bool rootToo) const {
        auto o = orders(rootToo);
        if (!o) throw SchemaError(sub(path, "orders"), "required field is missing");
        if (o->second < o->first) throw SchemaError(sub(path, "orders"), "empty order range");
        return *o;
    }
    std::optional<long> mu(bool rootToo) const {
        if (flags.mu) return flags.mu;
        if (auto j = field("mu", rootToo)) return toLong(*j, fieldPath("mu"));
        if (auto j = option("mu")) return toLong(*j, "/options/mu");
        return std::nullopt;
    }
};

long verifyWindow(const json& root, const RunOptions& flags) {
    if (flags.verify) return *flags.verify;
    auto o = root.find("options");
    if (o != root.end() && o->contains("verifyWindow")) return toLong(o->at("verifyWindow"), "/options/verifyWindow");
    return 25;
}

ExprFormat chooseFormat(const json& root, const RunOptions& flags) {
    if (flags.format) return *flags.format;
    auto o = root.find("options");
    if (o != root.end() && o->contains("format")) {
        std::string f = o->at("format").is_string() ? o->at("format").get<std::string>() : "";
        if (f == "json") return ExprFormat::Json;
        if (f == "text") return ExprFormat::Text;
        if (f == "latex") return ExprFormat::Latex;
        throw SchemaError("/options/format", "must be json, text or latex");
    }
    return ExprFormat::Json;
}

// ---- telescope

HypergeometricTerm termFromPayload(Context& c, const std::vector<std::string>& discrete,
                                   const std::vector<std::string>& continuous) {
    if (auto t = c.field("term")) {
        if (!t->is_string()) throw SchemaError(sub(c.path, "term"), "must be a string");
        return inField(sub(c.path, "term"),
                       [&] { return HypergeometricTerm::parse(t->get<std::string>(), discrete, continuous); });
    }
    const json& ratios = required(c.payload, "ratios", c.path);
    if (!ratios.is_object()) throw SchemaError(sub(c.path, "ratios"), "must be an object");
    HypergeometricTerm t;
    for (const auto& [v, r] : ratios.items()) {
        RationalFunction q = toRatFun(r, sub(sub(c.path, "ratios"), v));
        if (std::find(continuous.begin(), continuous.end(), v) != continuous.end())
            t.derivativeRatios[v] = q;
        else if (std::find(discrete.begin(), discrete.end(), v) != discrete.end())
            t.shiftRatios[v] = q;
        else
            throw SchemaError(sub(sub(c.path, "ratios"), v), "not a variable of the problem");
    }
    for (const auto& v : discrete)
        if (!t.shiftRatios.count(v)) throw SchemaError(sub(c.path, "ratios"), "missing ratio for " + v);
    for (const auto& v : continuous)
        if (!t.derivativeRatios.count(v)) throw SchemaError(sub(c.path, "ratios"), "missing ratio for " + v);
    if (auto b = c.field("base")) t.baseValue = toRational(*b, sub(c.path, "base"));
    if (auto bp = c.field("basePoint")) {
        if (!bp->is_object()) throw SchemaError(sub(c.path, "basePoint"), "must be an object");
        for (const auto& [v, n] : bp->items()) t.basePoint[v] = toLong(n, sub(sub(c.path, "basePoint"), v));
    }
    if (!t.compatible()) throw SchemaError(sub(c.path, "ratios"), "ratios are not compatible");
    return t;
}

void runTelescope(Context& c) {
    std::string kind = "sum";
    if (auto k = c.field("kind")) {
        if (!k->is_string()) throw SchemaError(sub(c.path, "kind"), "must be a string");
        kind = k->get<std::string>();
    }
    int maxOrder = c.maxOrder(8);
    const json* vars = c.field("vars");
    std::string varsPath = sub(c.path, "vars");
    if (kind == "sum") {
        std::string outer = "n", inner = "k";
        if (vars) {
            if (!vars->is_object()) throw SchemaError(varsPath, "must be {\"outer\": .., \"inner\": ..}");
            if (vars->contains("outer")) outer = vars->at("outer").get<std::string>();
            if (vars->contains("inner")) inner = vars->at("inner").get<std::string>();
        }
        DefiniteSum ds;
        ds.term = termFromPayload(c, {outer, inner}, {});
        ds.n = outer;
        ds.k = inner;
        ds.lower = MultiPoly(0);
        ds.upper = MultiPoly::variable(outer);
        if (auto b = c.field("bounds")) {
            std::string bp = sub(c.path, "bounds");
            if (!b->is_object()) throw SchemaError(bp, "must be an object");
            if (b->contains("lower")) ds.lower = polyFromJson(b->at("lower"), sub(bp, "lower"));
            if (b->contains("upper")) ds.upper = polyFromJson(b->at("upper"), sub(bp, "upper"));
        }
        SumRecurrence res;
        try {
            res = sumToRecurrence(ds, maxOrder);
        } catch (const NoCertificateError& e) {
            c.failure = ConstructiveFailure{"telescope", std::nullopt, std::nullopt, e.what(),
                                            json{{"maxOrder", e.maxOrder()}}};
            return;
        }
        c.out = json{{"kind", "sum"}, {"recurrence", recOut(res.recurrence, c.format)},
                     {"certificate", certOut(res.certificate)}};
        if (c.report.window > 0) {
            c.report.check("certificate identity", [&] { return checkCertificate(ds.term, res.certificate); });
            c.report.check("recurrence annihilates the summed values", [&] {
                const auto& rec = res.recurrence;
                std::vector<BigRational> F;
                for (long n = 0; n <= c.report.window + rec.order(); ++n) F.push_back(sumValue(ds, n));
                for (long n = rec.rhs.validFrom; n <= c.report.window; ++n)
                    if (!rec.residual([&](long m) { return ZetaValue(F[static_cast<size_t>(m)]); }, n).isZero())
                        return false;
                return true;
            });
        }
        return;
    }
    if (kind != "integral") throw SchemaError(sub(c.path, "kind"), "must be \"sum\" or \"integral\"");
    std::string outer = "n";
    std::vector<std::string> xs = {"x"};
    if (vars) {
        if (vars->is_array()) {
            xs = inField(varsPath, [&] { return vars->get<std::vector<std::string>>(); });
        } else if (vars->is_object()) {
            if (vars->contains("outer")) outer = vars->at("outer").get<std::string>();
            if (vars->contains("integration"))
                xs = inField(varsPath, [&] { return vars->at("integration").get<std::vector<std::string>>(); });
        } else {
            throw SchemaError(varsPath, "must list the integration variables");
        }
        if (xs.empty()) throw SchemaError(varsPath, "no integration variable");
    }
    HypergeometricTerm t = termFromPayload(c, {outer}, xs);
    TelescopeCertificate cert;
    try {
        cert = xs.size() == 1 ? almkvistZeilberger(t, maxOrder, outer, xs[0]) : iterateAZ(t, xs, maxOrder, outer);
    } catch (const NoCertificateError& e) {
        c.failure = ConstructiveFailure{"telescope", std::nullopt, std::nullopt, e.what(),
                                        json{{"maxOrder", e.maxOrder()}}};
        return;
    }
    c.out = json{{"kind", "integral"},
                 {"recurrence", json{{"coeffs", polysOut(cert.coeffs)}, {"rhs", ratFunToJson(cert.boundary)}}},
                 {"certificate", certOut(cert)}};
    if (c.report.window > 0) c.report.check("certificate identity", [&] { return checkCertificate(t, cert); });
}

// ---- rec

std::vector<MultiPoly> coeffList(const Context& c) {
    const json& a = required(c.payload, "coeffs", c.path);
    std::string p = sub(c.path, "coeffs");
    if (!a.is_array() || a.empty()) throw SchemaError(p, "must be a nonempty array");
    std::vector<MultiPoly> out;
    for (size_t i = 0; i < a.size(); ++i) out.push_back(polyFromJson(a[i], sub(p, i)));
    return out;
}

// {"n": value} sorted by n
std::map<long, ZetaValue> indexedValues(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "must be an object keyed by index");
    std::map<long, ZetaValue> out;
    for (const auto& [k, v] : j.items()) {
        long n = toLong(json(k), sub(path, k));
        out[n] = toValue(v, sub(path, k));
    }
    return out;
}

void runRec(Context& c) {
    std::vector<MultiPoly> coeffs = coeffList(c);
    for (size_t i = 0; i < coeffs.size(); ++i)
        for (const auto& v : coeffs[i].vars())
            if (v != "n") throw SchemaError(sub(sub(c.path, "coeffs"), i), "coefficients are polynomials in n");
    Sequence rhs;
    if (auto r = c.field("rhs")) {
        rhs = Sequence(toExpr(*r, "n", sub(c.path, "rhs")));
        if (auto f = c.field("rhsValidFrom")) rhs.validFrom = toLong(*f, sub(c.path, "rhsValidFrom"));
    }
    LinearRecurrence rec = inField(sub(c.path, "coeffs"), [&] { return LinearRecurrence(coeffs, rhs); });
    if (rec.coeffs.back().isZero()) throw SchemaError(sub(c.path, "coeffs"), "leading coefficient is zero");
    int d = rec.order();
    const json* init = c.field("initial");
    if (!init) {
        SolutionBasis b = dalembertSolutions(rec);
        c.out = json{{"recurrence", recOut(rec, c.format)}, {"basis", basisOut(b, c.format, "n")}};
        bool complete = b.complete && (rec.homogeneous() || b.particular);
        if (!complete) {
            c.failure = ConstructiveFailure{"rec-solve", std::nullopt, std::nullopt,
                                            "solution space is not spanned by d'Alembertian solutions",
                                            basisOut(b, c.format, "n")};
            return;
        }
        if (c.report.window > 0) {
            LinearRecurrence hom(rec.coeffs);
            for (size_t i = 0; i < b.homogeneous.size(); ++i)
                c.report.check("homogeneous solution " + std::to_string(i), [&] {
                    for (long n = b.validFrom; n <= b.validFrom + c.report.window; ++n)
                        if (!hom.residual([&](long m) { return eval(b.homogeneous[i], m); }, n).isZero()) return false;
                    return true;
                });
            if (b.particular)
                c.report.check("particular solution", [&] {
                    for (long n = std::max(b.validFrom, rec.rhs.validFrom); n <= b.validFrom + c.report.window; ++n)
                        if (!rec.residual([&](long m) { return eval(*b.particular, m); }, n).isZero()) return false;
                    return true;
                });
        }
        return;
    }
    std::string ip = sub(c.path, "initial");
    auto values = indexedValues(*init, ip);
    if (static_cast<int>(values.size()) < d) throw SchemaError(ip, "needs " + std::to_string(d) + " values");
    long start = values.begin()->first;
    std::vector<ZetaValue> iv;
    for (long n = start; n < start + d; ++n) {
        auto it = values.find(n);
        if (it == values.end()) throw SchemaError(ip, "initial values must be consecutive");
        iv.push_back(it->second);
    }
    if (start < rec.delta())
        throw SchemaError(ip, "initial values must start at n >= " + std::to_string(rec.delta()));
    auto sol = solveWithInitialValues(rec, iv, start);
    if (!sol) {
        c.out = json{{"recurrence", recOut(rec, c.format)}};
        c.failure = ConstructiveFailure{"rec-solve", std::nullopt, std::nullopt,
                                        "no closed form in indefinite nested sums",
                                        basisOut(dalembertSolutions(rec), c.format, "n")};
        return;
    }
    c.out = json{{"recurrence", recOut(rec, c.format)}, {"solution", seqOut(*sol, c.format, "n")}};
    if (c.report.window > 0) {
        long to = start + c.report.window;
        c.report.check("recurrence residual", [&] {
            for (long n = start; n <= to; ++n)
                if (n >= rec.rhs.validFrom && !rec.residual([&](long m) { return sol->at(m); }, n).isZero())
                    return false;
            return true;
        });
        c.report.check("unrolled values", [&] {
            auto direct = rec.unroll(iv, start, to);
            for (long n = start; n <= to; ++n)
                if (direct[static_cast<size_t>(n - start)] != sol->at(n)) return false;
            return true;
        });
        c.report.check("given initial values", [&] {
            for (const auto& [n, v] : values)
                if (sol->at(n) != v) return false;
            return true;
        });
    }
}

// ---- epsrec

void runEpsRec(Context& c) {
    EpsRecurrence rec;
    rec.coeffs = coeffList(c);
    for (size_t i = 0; i < rec.coeffs.size(); ++i)
        for (const auto& v : rec.coeffs[i].vars())
            if (v != "n" && v != "eps")
                throw SchemaError(sub(sub(c.path, "coeffs"), i), "coefficients are polynomials in n and eps");
    if (auto r = c.field("rhs")) {
        std::string rp = sub(c.path, "rhs");
        if (!r->is_object()) throw SchemaError(rp, "must map eps-orders to expressions");
        for (const auto& [j, e] : r->items())
            rec.rhs[toInt(json(j), sub(rp, j))] = Sequence(toExpr(e, "n", sub(rp, j)));
    }
    if (auto p = c.field("rhsPrecision")) rec.rhsPrecision = toInt(*p, sub(c.path, "rhsPrecision"));
    auto [l, r] = c.requiredOrders(false);
    LeadingData ld = inField(sub(c.path, "coeffs"), [&] { return leadingData(normalizeEps(rec)); });

    std::string ip = sub(c.path, "initial");
    InitialGrid grid;
    std::map<int, std::map<long, ZetaValue>> given;
    if (auto init = c.field("initial")) {
        if (!init->is_object()) throw SchemaError(ip, "must map eps-orders to {n: value}");
        for (const auto& [js, vals] : init->items()) {
            int j = toInt(json(js), sub(ip, js));
            given[j] = indexedValues(vals, sub(ip, js));
        }
    }
    for (int j = l; j <= r; ++j) {
        auto it = given.find(j);
        if (it == given.end()) {
            if (ld.o > 0) throw SchemaError(sub(ip, std::to_string(j)), "initial values are missing");
            continue;
        }
        std::vector<ZetaValue> v;
        for (long n = ld.delta; it->second.count(n); ++n) v.push_back(it->second.at(n));
        if (static_cast<int>(v.size()) < ld.o)
            throw SchemaError(sub(ip, std::to_string(j)), "needs values at n = " + std::to_string(ld.delta) + ".." +
                                                              std::to_string(ld.delta + ld.o - 1));
        if (static_cast<int>(v.size()) > ld.o + 1) v.resize(static_cast<size_t>(ld.o + 1));
        grid[j] = std::move(v);
    }
    EpsSolveResult res = epsExpandSolve(rec, grid, l, r);
    json orders = json::object();
    for (int j = res.expansion.startOrder; j <= res.expansion.endOrder(); ++j)
        orders[std::to_string(j)] = seqOut(res.expansion.at(j), c.format, "n");
    c.out = json{{"orders", orders}, {"delta", ld.delta}, {"o", ld.o}, {"validFrom", res.expansion.validFrom}};
    if (!res.ok()) {
        json partial{{"solvedOrders", orders}, {"basis", basisOut(res.failure->partial, c.format, "n")}};
        c.failure = ConstructiveFailure{"eps-solve", res.failure->order, std::nullopt, res.failure->reason, partial};
        return;
    }
    if (c.report.window > 0) {
        c.report.check("expansion satisfies the recurrence",
                       [&] { return verifyExpansion(rec, res.expansion, c.report.window); });
        c.report.check("given initial values", [&] {
            for (const auto& [j, vals] : given)
                if (j >= l && j <= r)
                    for (const auto& [n, v] : vals)
                        if (n >= ld.delta && res.expansion.at(j).at(n) != v) return false;
            return true;
        });
    }
}

// ---- system

int componentIndex(const json& j, int lam, const std::string& path) {
    int i = -1;
    if (j.is_number_integer()) i = j.get<int>() - 1;
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        for (int c = 0; c < lam; ++c)
            if (componentName(c) == s) i = c;
    }
    if (i < 0 || i >= lam) throw SchemaError(path, "unknown component");
    return i;
}

KnownFunction knownFromJson(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "must be an object");
    KnownFunction h;
    if (j.contains("coefficients")) {
        std::string cp = sub(path, "coefficients");
        if (!j.at("coefficients").is_object()) throw SchemaError(cp, "must map eps-orders to expressions in k");
        for (const auto& [os, e] : j.at("coefficients").items()) {
            Sequence s(toExpr(e, "k", sub(cp, os)));
            h.coefficients[toInt(json(os), sub(cp, os))] = s;
        }
    }
    if (j.contains("validFrom")) {
        std::string vp = sub(path, "validFrom");
        for (const auto& [os, v] : j.at("validFrom").items()) {
            int o = toInt(json(os), sub(vp, os));
            auto it = h.coefficients.find(o);
            if (it == h.coefficients.end()) throw SchemaError(sub(vp, os), "no such coefficient");
            it->second.validFrom = toLong(v, sub(vp, os));
        }
    }
    if (j.contains("precision")) h.precision = toInt(j.at("precision"), sub(path, "precision"));
    if (j.contains("moments")) {
        std::string mp = sub(path, "moments");
        const json& m = j.at("moments");
        int start = m.contains("start") ? toInt(m.at("start"), sub(mp, "start")) : 0;
        const json& table = required(m, "table", mp);
        if (!table.is_array()) throw SchemaError(sub(mp, "table"), "must be an array over k");
        for (size_t k = 0; k < table.size(); ++k) {
            std::string tp = sub(sub(mp, "table"), k);
            if (!table[k].is_array()) throw SchemaError(tp, "must be an array over eps-orders");
            std::vector<BigRational> v;
            for (size_t o = 0; o < table[k].size(); ++o) v.push_back(toRational(table[k][o], sub(tp, o)));
            h.moments.push_back(RationalEpsSeries(start, std::move(v)));
        }
    }
    if (!h.hasSymbolic() && h.moments.empty()) throw SchemaError(path, "needs coefficients or moments");
    return h;
}

void runSystem(Context& c, bool forceMoments) {
    const std::string& p = c.path;
    if (!c.payload.is_object()) throw SchemaError(p, "must be an object");
    int lam = toInt(required(c.payload, "lambda", p), sub(p, "lambda"));
    if (lam < 1) throw SchemaError(sub(p, "lambda"), "must be positive");
    CoupledODESystem s;
    const json& A = required(c.payload, "A", p);
    if (!A.is_array() || static_cast<int>(A.size()) != lam) throw SchemaError(sub(p, "A"), "must have lambda rows");
    for (size_t i = 0; i < A.size(); ++i) {
        std::string rp = sub(sub(p, "A"), i);
        if (!A[i].is_array() || static_cast<int>(A[i].size()) != lam) throw SchemaError(rp, "must have lambda entries");
        std::vector<RationalFunction> row;
        for (size_t k = 0; k < A[i].size(); ++k) {
            RationalFunction q = toRatFun(A[i][k], sub(rp, k));
            for (const auto& v : unionVars(q.num().vars(), q.den().vars()))
                if (v != "x" && v != "eps") throw SchemaError(sub(rp, k), "entries are rational in x and eps");
            row.push_back(q);
        }
        s.A.push_back(std::move(row));
    }
    if (const json* known = c.field("known", true)) {
        std::string kp = c.fieldPath("known");
        if (!known->is_object()) throw SchemaError(kp, "must map names to known functions");
        for (const auto& [name, h] : known->items()) {
            if (name.size() > 1 && name[0] == 'f' && std::all_of(name.begin() + 1, name.end(), ::isdigit))
                throw SchemaError(sub(kp, name), "names f1, f2, ... are reserved for the components");
            s.known[name] = knownFromJson(h, sub(kp, name));
        }
    }
    s.g.assign(static_cast<size_t>(lam), {});
    if (const json* g = c.field("g")) {
        std::string gp = sub(p, "g");
        if (!g->is_array()) throw SchemaError(gp, "must be an array");
        auto term = [&](const json& t, const std::string& tp) {
            const json& h = required(t, "h", tp);
            if (!h.is_string() || !s.known.count(h.get<std::string>()))
                throw SchemaError(sub(tp, "h"), "must name a known function");
            return InhomogeneousTerm{h.get<std::string>(), toRatFun(required(t, "coef", tp), sub(tp, "coef"))};
        };
        bool perRow = !g->empty() && std::all_of(g->begin(), g->end(), [](const json& e) { return e.is_array(); });
        if (perRow) {
            if (static_cast<int>(g->size()) != lam) throw SchemaError(gp, "must have lambda rows");
            for (size_t i = 0; i < g->size(); ++i)
                for (size_t k = 0; k < (*g)[i].size(); ++k)
                    s.g[i].push_back(term((*g)[i][k], sub(sub(gp, i), k)));
        } else {
            for (size_t k = 0; k < g->size(); ++k) {
                std::string tp = sub(gp, k);
                bool named = (*g)[k].is_object() && (*g)[k].contains("component");
                if (!named && lam > 1) throw SchemaError(sub(tp, "component"), "required for lambda > 1");
                int row = named ? componentIndex((*g)[k].at("component"), lam, sub(tp, "component")) : 0;
                s.g[static_cast<size_t>(row)].push_back(term((*g)[k], tp));
            }
        }
    }

    std::string mode = "symbolic";
    if (const json* m = c.field("mode", true)) {
        if (!m->is_string()) throw SchemaError(c.fieldPath("mode"), "must be a string");
        mode = m->get<std::string>();
        if (mode != "symbolic" && mode != "moments")
            throw SchemaError(c.fieldPath("mode"), "must be \"symbolic\" or \"moments\"");
    }
    if (forceMoments) mode = "moments";
    auto [l, r] = c.requiredOrders(true);

    SystemInitial initial;
    if (const json* init = c.field("initial", true)) {
        std::string ip = c.fieldPath("initial");
        if (!init->is_object()) throw SchemaError(ip, "must map components to {order: [values from k = 0]}");
        for (const auto& [name, orders] : init->items()) {
            int i = componentIndex(json(name), lam, sub(ip, name));
            if (!orders.is_object()) throw SchemaError(sub(ip, name), "must map eps-orders to value arrays");
            for (const auto& [os, vals] : orders.items()) {
                std::string vp = sub(sub(ip, name), os);
                if (!vals.is_array()) throw SchemaError(vp, "must be an array from k = 0");
                auto& v = initial[i][toInt(json(os), vp)];
                for (size_t k = 0; k < vals.size(); ++k) v.push_back(toValue(vals[k], sub(vp, k)));
            }
        }
    } else if (const json* f0 = c.field("f0", true)) {
        std::string fp = c.fieldPath("f0");
        if (!f0->is_object()) throw SchemaError(fp, "must map components to {order: value}");
        std::vector<std::map<int, BigRational>> at0(static_cast<size_t>(lam));
        for (const auto& [name, orders] : f0->items()) {
            int i = componentIndex(json(name), lam, sub(fp, name));
            if (!orders.is_object()) throw SchemaError(sub(fp, name), "must map eps-orders to values");
            for (const auto& [os, v] : orders.items())
                at0[static_cast<size_t>(i)][toInt(json(os), sub(sub(fp, name), os))] =
                    toRational(v, sub(sub(fp, name), os));
        }
        initial = initialFromOrigin(s, at0, l, r);
    } else {
        throw SchemaError(sub(p, "initial"), "either initial or f0 is required");
    }

    long window = c.report.window;
    if (mode == "symbolic") {
        SystemExpansion e = solveSystemExpansion(s, initial, l, r);
        UncoupledForm u = uncouple(s);
        json blocks = json::array();
        for (const auto& b : u.blocks)
            blocks.push_back(json{{"component", componentName(b.component)}, {"order", b.order()},
                                  {"coeffs", polysOut(b.coeffs)}});
        json comps = json::object();
        for (size_t i = 0; i < e.components.size(); ++i) {
            json orders = json::object();
            for (int j = l; j <= r; ++j)
                orders[std::to_string(j)] = seqOut(e.components[i].at(j), c.format, "k");
            comps[componentName(static_cast<int>(i))] = orders;
        }
        c.out = json{{"mode", "symbolic"}, {"blocks", blocks}, {"components", comps}};
        if (!e.ok()) {
            c.failure = ConstructiveFailure{"eps-solve", e.failure->order, componentName(e.failedComponent),
                                            e.failure->reason, basisOut(e.failure->partial, c.format, "k")};
            return;
        }
        if (window > 0)
            c.report.check("coefficients satisfy the system", [&] {
                return satisfiesSystem(
                    s, [&](int i, int j, long k) { return e.components[static_cast<size_t>(i)].at(j).at(k); }, l, r,
                    window);
            });
        return;
    }
    auto mu = c.mu(true);
    if (!mu) throw SchemaError(sub(p, "mu"), "required in moments mode");
    if (*mu < 0) throw SchemaError(sub(p, "mu"), "must be nonnegative");
    MomentTable m = largeMoments(s, *mu, initial, l, r);
    json comps = json::object();
    std::ostringstream csv;
    csv << "component,order,k,value\n";
    for (int i = 0; i < lam; ++i) {
        json orders = json::array();
        for (int j = l; j <= r; ++j) {
            json vals = json::array();
            const auto& v = m.at(i, j);
            for (size_t k = 0; k < v.size(); ++k) {
                vals.push_back(str(v[k]));
                csv << componentName(i) << ',' << j << ',' << k << ',' << str(v[k]) << '\n';
            }
            orders.push_back(vals);
        }
        comps[componentName(i)] = orders;
    }
    c.csv = csv.str();
    c.out = json{{"mode", "moments"}, {"mu", *mu}, {"startOrder", l}, {"moments", comps}};
    if (window > 0 && *mu > 0)
        c.report.check("moments satisfy the system", [&] {
            return satisfiesSystem(
                s, [&](int i, int j, long k) { return ZetaValue(m.at(i, j)[static_cast<size_t>(k)]); }, l, r,
                std::min(window, *mu - 1));
        });
}

// ---- guess

void runGuess(Context& c) {
    const json& seq = required(c.payload, "sequence", c.path);
    std::string sp = sub(c.path, "sequence");
    if (!seq.is_array()) throw SchemaError(sp, "must be an array");
    std::vector<BigRational> v;
    for (size_t i = 0; i < seq.size(); ++i) v.push_back(toRational(seq[i], sub(sp, i)));
    long offset = c.field("offset") ? toLong(*c.field("offset"), sub(c.path, "offset")) : 0;
    int maxOrder = c.maxOrder(2);
    int maxDegree = c.field("maxDegree") ? toInt(*c.field("maxDegree"), sub(c.path, "maxDegree")) : 2;
    bool solve = c.field("solve") ? c.field("solve")->get<bool>() : true;
    auto rec = inField(sp, [&] { return guessRecurrence(v, maxOrder, maxDegree, offset); });
    if (!rec) {
        c.failure = ConstructiveFailure{"guess", std::nullopt, std::nullopt,
                                        "no recurrence up to order " + std::to_string(maxOrder) + " and degree " +
                                            std::to_string(maxDegree),
                                        json{{"maxOrder", maxOrder}, {"maxDegree", maxDegree}}};
        return;
    }
    c.out = json{{"recurrence", recOut(*rec, c.format)}};
    long last = offset + static_cast<long>(v.size()) - 1;
    auto value = [&](long n) { return ZetaValue(v[static_cast<size_t>(n - offset)]); };
    if (c.report.window > 0)
        c.report.check("recurrence annihilates the sequence", [&] {
            for (long n = offset; n + rec->order() <= last; ++n)
                if (!rec->residual(value, n).isZero()) return false;
            return true;
        });
    if (!solve) return;
    long start = std::max(offset, rec->delta());
    if (start + rec->order() - 1 > last) throw SchemaError(sp, "too short to fix initial values");
    std::vector<ZetaValue> iv;
    for (long n = start; n < start + rec->order(); ++n) iv.push_back(value(n));
    auto sol = solveWithInitialValues(*rec, iv, start);
    if (!sol) {
        c.failure = ConstructiveFailure{"rec-solve", std::nullopt, std::nullopt,
                                        "no closed form in indefinite nested sums",
                                        basisOut(dalembertSolutions(*rec), c.format, "n")};
        return;
    }
    c.out["solution"] = seqOut(*sol, c.format, "n");
    if (c.report.window > 0)
        c.report.check("solution reproduces the sequence", [&] {
            for (long n = start; n <= last; ++n)
                if (sol->at(n) != value(n)) return false;
            return true;
        });
}

// ---- eval

void runEval(Context& c) {
    std::string var = "n";
    if (auto v = c.field("var")) var = v->get<std::string>();
    Expr e = toExpr(required(c.payload, "expr", c.path), var, sub(c.path, "expr"));
    long from, to;
    if (auto a = c.field("at")) {
        from = to = toLong(*a, sub(c.path, "at"));
    } else {
        from = toLong(required(c.payload, "from", c.path), sub(c.path, "from"));
        to = toLong(required(c.payload, "to", c.path), sub(c.path, "to"));
        if (to < from) throw SchemaError(sub(c.path, "to"), "empty range");
    }
    json vals = json::object();
    auto r = evalRange(e, from, to);
    for (long n = from; n <= to; ++n) {
        const auto& x = r[static_cast<size_t>(n - from)];
        vals[std::to_string(n)] = x ? json(x->toString()) : json(nullptr);
    }
    c.out = json{{"expr", exprOut(e, c.format, var)}, {"values", vals}};
    if (c.report.window > 0)
        c.report.check("text rendering parses back", [&] { return Expr::structurallyEqual(parseExpr(renderText(e, var), var), e); });
}

void validateRoot(const json& root, Command cmd, std::string& key) {
    if (!root.is_object()) throw SchemaError("/", "problem must be a JSON object");
    if (root.contains("version") && !(root.at("version").is_number_integer() && root.at("version").get<int>() == 1))
        throw SchemaError("/version", "only version 1 is supported");
    std::vector<std::string> present;
    for (const auto& k : kPayloadKeys)
        if (root.contains(k)) present.push_back(k);
    if (present.size() != 1) throw SchemaError("/", "exactly one payload is required");
    key = present[0];
    if (cmd != Command::Run) {
        std::string want = payloadKey(cmd);
        if (key != want) throw SchemaError("/" + want, "command " + commandName(cmd) + " needs a " + want + " payload");
    }
    static const std::set<std::string> common = {"version", "options", "name", "description"};
    static const std::set<std::string> systemRoot = {"known", "mode", "mu", "orders", "initial", "f0"};
    for (const auto& [k, v] : root.items()) {
        if (k == key || common.count(k)) continue;
        if (key == "system" && systemRoot.count(k)) continue;
        throw SchemaError("/" + k, "unknown field");
    }
    if (root.contains("options")) {
        static const std::set<std::string> opts = {"maxOrder", "orders", "mu", "verifyWindow", "format"};
        if (!root.at("options").is_object()) throw SchemaError("/options", "must be an object");
        for (const auto& [k, v] : root.at("options").items())
            if (!opts.count(k)) throw SchemaError("/options/" + k, "unknown option");
    }
}

long maxRssKb() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return u.ru_maxrss;
}

std::pair<size_t, size_t> lineColumn(std::string_view text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json errorEnvelope(const std::string& command, const std::string& kind, const std::string& message) {
    return json{{"status", "error"}, {"command", command}, {"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

std::optional<Command> commandFromName(std::string_view name) {
    static const std::map<std::string, Command, std::less<>> m = {
        {"telescope", Command::Telescope}, {"solve-rec", Command::SolveRec},      {"eps-expand", Command::EpsExpand},
        {"solve-system", Command::SolveSystem}, {"moments", Command::Moments}, {"guess", Command::Guess},
        {"eval", Command::Eval},           {"run", Command::Run}};
    auto it = m.find(name);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

std::string commandName(Command c) {
    switch (c) {
        case Command::Telescope: return "telescope";
        case Command::SolveRec: return "solve-rec";
        case Command::EpsExpand: return "eps-expand";
        case Command::SolveSystem: return "solve-system";
        case Command::Moments: return "moments";
        case Command::Guess: return "guess";
        case Command::Eval: return "eval";
        case Command::Run: return "run";
    }
    return "";
}

std::string payloadKey(Command c) {
    switch (c) {
        case Command::Telescope: return "telescope";
        case Command::SolveRec: return "rec";
        case Command::EpsExpand: return "epsrec";
        case Command::SolveSystem:
        case Command::Moments: return "system";
        case Command::Guess: return "guess";
        case Command::Eval: return "eval";
        case Command::Run: return "";
    }
    return "";
}

json polyToJson(const MultiPoly& p) {
    json a = json::array();
    for (const auto& [e, c] : p.terms()) {
        json ex = json::object();
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) ex[p.vars()[i]] = e[i];
        a.push_back(json{{"exponents", ex}, {"coefficient", str(c)}});
    }
    return a;
}

MultiPoly polyFromJson(const json& j, const std::string& field) {
    if (j.is_number_integer()) return MultiPoly(BigRational(j.get<long>()));
    if (j.is_string()) return inField(field, [&] { return parsePolynomial(j.get<std::string>()); });
    if (!j.is_array()) throw SchemaError(field, "must be a polynomial string or a list of term records");
    MultiPoly out;
    for (size_t i = 0; i < j.size(); ++i) {
        std::string tp = sub(field, i);
        const json& t = j[i];
        MultiPoly m(toRational(required(t, "coefficient", tp), sub(tp, "coefficient")));
        if (t.contains("exponents")) {
            const json& ex = t.at("exponents");
            if (!ex.is_object()) throw SchemaError(sub(tp, "exponents"), "must map variables to exponents");
            for (const auto& [v, e] : ex.items()) {
                int k = toInt(e, sub(sub(tp, "exponents"), v));
                if (k < 0) throw SchemaError(sub(sub(tp, "exponents"), v), "must be nonnegative");
                m *= MultiPoly::variable(v).pow(static_cast<unsigned>(k));
            }
        }
        out += m;
    }
    return out;
}

json parseProblemText(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        auto [line, col] = lineColumn(text, byte);
        std::string msg = e.what();
        auto pos = msg.find(": ");
        throw ParseError(pos == std::string::npos ? msg : msg.substr(pos + 2), line, col);
    }
}

RunResult runProblem(Command cmd, const json& root, const RunOptions& flags) {
    auto t0 = std::chrono::steady_clock::now();
    RunResult res;
    std::string command = commandName(cmd);
    try {
        std::string key;
        validateRoot(root, cmd, key);
        Command effective = cmd == Command::Run ? *commandFromName(key == "rec"      ? "solve-rec"
                                                                   : key == "epsrec" ? "eps-expand"
                                                                   : key == "system" ? "solve-system"
                                                                                     : key)
                                                : cmd;
        command = commandName(effective);
        Context c{root, root.at(key), "/" + key, flags};
        c.format = chooseFormat(root, flags);
        c.report.window = verifyWindow(root, flags);
        if (c.report.window < 0) throw SchemaError("/options/verifyWindow", "must be nonnegative");
        switch (effective) {
            case Command::Telescope: runTelescope(c); break;
            case Command::SolveRec: runRec(c); break;
            case Command::EpsExpand: runEpsRec(c); break;
            case Command::SolveSystem: runSystem(c, false); break;
            case Command::Moments: runSystem(c, true); break;
            case Command::Guess: runGuess(c); break;
            case Command::Eval: runEval(c); break;
            case Command::Run: break;
        }
        json env{{"command", command}, {"payload", c.out}};
        if (c.failure) {
            env["status"] = "constructive-failure";
            env["failure"] = json{{"stage", c.failure->stage},
                                  {"order", c.failure->order ? json(*c.failure->order) : json(nullptr)},
                                  {"component", c.failure->component ? json(*c.failure->component) : json(nullptr)},
                                  {"reason", c.failure->reason},
                                  {"partial", c.failure->partial}};
            res.exitCode = 2;
        } else if (c.report.window > 0 && !c.report.passed) {
            env["status"] = "error";
            env["error"] = json{{"kind", "verification"}, {"message", "verification failed"}};
            res.exitCode = 1;
        } else {
            env["status"] = "ok";
            res.exitCode = 0;
        }
        env["verification"] = c.report.toJson();
        res.envelope = std::move(env);
        res.csv = std::move(c.csv);
    } catch (const SchemaError& e) {
        res.envelope = errorEnvelope(command, "schema", e.what());
        res.envelope["error"]["field"] = e.field();
        res.exitCode = 1;
    } catch (const std::exception& e) {
        res.envelope = errorEnvelope(command, "input", e.what());
        res.exitCode = 1;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.envelope["timing"] = json{{"seconds", secs}, {"maxRssKb", maxRssKb()}};
    return res;
}

RunResult runProblemText(Command cmd, std::string_view text, const RunOptions& flags) {
    json root;
    try {
        root = parseProblemText(text);
    } catch (const ParseError& e) {
        RunResult res;
        res.envelope = errorEnvelope(commandName(cmd), "parse", e.what());
        res.envelope["error"]["line"] = e.line();
        res.envelope["error"]["column"] = e.column();
        res.envelope["timing"] = json{{"seconds", 0.0}, {"maxRssKb", maxRssKb()}};
        res.exitCode = 1;
        return res;
    }
    return runProblem(cmd, root, flags);
}

json stableEnvelope(const json& envelope) {
    json e = envelope;
    e.erase("timing");
    return e;
}

}  // namespace epschain
