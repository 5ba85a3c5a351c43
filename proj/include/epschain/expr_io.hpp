#pragma once

#include "epschain/nested_sums.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace epschain {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, size_t line, size_t column)
        : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line),
          column_(column) {}
    size_t line() const { return line_; }
    size_t column() const { return column_; }

private:
    size_t line_, column_;
};

enum class ExprFormat { Text, Latex, Json };

// Text grammar: rational functions of the active variable, S[a,b](n),
// zeta(w), c^n, prod(j=l..n, r(j)), sum(j=l..n, body), sum(j=l..inf, body).
std::string renderText(const Expr& e, const std::string& var = "n");
std::string renderLatex(const Expr& e, const std::string& var = "n");
std::string renderExpr(const Expr& e, ExprFormat f, const std::string& var = "n");
Expr parseExpr(std::string_view text, const std::string& var = "n");

// rational function in factored form, e.g. 8(2n+3)/(3(n+1)^2(n+2))
std::string renderRational(const URatFun& r, const std::string& var = "n");

// JSON tree; rational leaves are strings in the variable n
nlohmann::json exprToJson(const Expr& e);
// accepts the tree form, {"S": [..]} shorthand, or a text string
Expr exprFromJson(const nlohmann::json& j);

}  // namespace epschain
