#pragma once

#include "epschain/expr_io.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace epschain {

// problem file violates the schema; field is a JSON-pointer-like path
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string field, const std::string& msg)
        : std::runtime_error(field + ": " + msg), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class Command { Telescope, SolveRec, EpsExpand, SolveSystem, Moments, Guess, Eval, Run };

std::optional<Command> commandFromName(std::string_view name);
std::string commandName(Command c);
// payload key a command expects; Run accepts any
std::string payloadKey(Command c);

struct RunOptions {
    std::optional<int> maxOrder;
    std::optional<std::pair<int, int>> orders;
    std::optional<long> mu;
    std::optional<long> verify;  // window; 0 disables
    std::optional<ExprFormat> format;
};

struct RunResult {
    nlohmann::json envelope;
    int exitCode = 0;  // 0 ok, 2 constructive failure, 1 error
    std::string csv;   // moment tables
};

// JSON with parse errors reported by line and column
nlohmann::json parseProblemText(std::string_view text);

RunResult runProblem(Command c, const nlohmann::json& problem, const RunOptions& flags);
RunResult runProblemText(Command c, std::string_view text, const RunOptions& flags);

// the envelope without timing, for comparisons
nlohmann::json stableEnvelope(const nlohmann::json& envelope);

// polynomial records [{"exponents": {"n": 1}, "coefficient": "p/q"}, ...]
nlohmann::json polyToJson(const MultiPoly& p);
MultiPoly polyFromJson(const nlohmann::json& j, const std::string& field);

}  // namespace epschain
