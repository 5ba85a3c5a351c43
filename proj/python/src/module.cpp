#include "epschain/guess.hpp"
#include "epschain/problem.hpp"
#include "epschain/rec_solve.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace epschain;

namespace {

ExprFormat formatFromName(const std::string& f) {
    if (f == "text") return ExprFormat::Text;
    if (f == "latex") return ExprFormat::Latex;
    if (f == "json") return ExprFormat::Json;
    throw std::invalid_argument("format must be text, latex or json");
}

BigRational rational(const py::handle& h) {
    if (py::isinstance<py::int_>(h)) return parseRational(py::str(h).cast<std::string>());
    return parseRational(h.cast<std::string>());
}

std::pair<std::string, int> runText(const std::string& command, const std::string& text,
                                           std::optional<long> verify, std::optional<int> maxOrder,
                                           std::optional<std::pair<int, int>> orders, std::optional<long> mu,
                                           std::optional<std::string> format) {
    auto cmd = commandFromName(command);
    if (!cmd) throw std::invalid_argument("unknown command " + command);
    RunOptions o;
    o.verify = verify;
    o.maxOrder = maxOrder;
    o.orders = orders;
    o.mu = mu;
    if (format) o.format = formatFromName(*format);
    RunResult r;
    {
        py::gil_scoped_release release;
        r = epschain::runProblemText(*cmd, text, o);
    }
    return {r.envelope.dump(), r.exitCode};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact nested-sum arithmetic, recurrence solving and eps-expansions";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("run_problem_text", &runText, py::arg("command"), py::arg("text"), py::arg("verify") = py::none(),
          py::arg("max_order") = py::none(), py::arg("orders") = py::none(), py::arg("mu") = py::none(),
          py::arg("format") = py::none(),
          "run a problem document; returns (envelope JSON, exit code)");

    m.def(
        "eval_expr",
        [](const std::string& text, long n, const std::string& var) { return eval(parseExpr(text, var), n).toString(); },
        py::arg("expr"), py::arg("n"), py::arg("var") = "n");

    m.def(
        "eval_range",
        [](const std::string& text, long lo, long hi, const std::string& var) {
            std::vector<std::optional<std::string>> out;
            for (const auto& v : evalRange(parseExpr(text, var), lo, hi))
                out.push_back(v ? std::optional<std::string>(v->toString()) : std::nullopt);
            return out;
        },
        py::arg("expr"), py::arg("lo"), py::arg("hi"), py::arg("var") = "n");

    m.def(
        "render",
        [](const std::string& text, const std::string& format, const std::string& var) {
            Expr e = parseExpr(text, var);
            if (format == "json") return exprToJson(e).dump();
            return renderExpr(e, formatFromName(format), var);
        },
        py::arg("expr"), py::arg("format") = "text", py::arg("var") = "n");

    m.def(
        "canonicalize",
        [](const std::string& text, const std::string& var) { return renderText(canonicalize(parseExpr(text, var)), var); },
        py::arg("expr"), py::arg("var") = "n");

    m.def(
        "equal",
        [](const std::string& a, const std::string& b, const std::string& var) {
            return equalCanonical(parseExpr(a, var), parseExpr(b, var));
        },
        py::arg("a"), py::arg("b"), py::arg("var") = "n");

    m.def(
        "guess_recurrence",
        [](const py::sequence& values, int maxOrder, int maxDegree, long offset) -> std::optional<std::vector<std::string>> {
            std::vector<BigRational> seq;
            for (const auto& v : values) seq.push_back(rational(v));
            auto rec = guessRecurrence(seq, maxOrder, maxDegree, offset);
            if (!rec) return std::nullopt;
            std::vector<std::string> out;
            for (const auto& c : rec->coeffs) out.push_back(c.toString());
            return out;
        },
        py::arg("values"), py::arg("max_order") = 2, py::arg("max_degree") = 2, py::arg("offset") = 0,
        "coefficients a_0(n)..a_d(n) of a guessed recurrence, or None");

    m.def(
        "solve_rec",
        [](const std::vector<std::string>& coeffs, const py::sequence& initial, long start,
           const std::string& rhs) -> std::optional<std::string> {
            std::vector<MultiPoly> cs;
            for (const auto& c : coeffs) cs.push_back(parsePolynomial(c));
            LinearRecurrence rec(cs, Sequence(parseExpr(rhs)));
            std::vector<ZetaValue> init;
            for (const auto& v : initial)
                init.push_back(py::isinstance<py::int_>(v) ? ZetaValue(rational(v))
                                                           : ZetaValue::parse(v.cast<std::string>()));
            auto sol = solveWithInitialValues(rec, init, start);
            if (!sol) return std::nullopt;
            return renderText(sol->expr);
        },
        py::arg("coeffs"), py::arg("initial"), py::arg("start"), py::arg("rhs") = "0",
        "closed form of the solution with F(start + i) = initial[i], or None");

    m.def(
        "quasi_shuffle",
        [](const std::vector<int>& a, const std::vector<int>& b) {
            std::vector<std::pair<std::vector<int>, std::string>> out;
            for (const auto& [idx, c] : quasiShuffle(a, b)) out.emplace_back(idx, toString(c));
            return out;
        },
        py::arg("a"), py::arg("b"), "S_a S_b as a list of (index, integer coefficient as string)");
}
