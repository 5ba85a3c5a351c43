#include "epschain/problem.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using epschain::Command;
using nlohmann::json;

namespace {

struct Flags {
    std::string path;
    std::string out;
    long verify = -1;
    int maxOrder = -1;
    std::string orders;
    long mu = -1;
    std::string format;
    int jobs = 1;
};

epschain::RunOptions runOptions(const Flags& f) {
    epschain::RunOptions o;
    if (f.verify >= 0) o.verify = f.verify;
    if (f.maxOrder >= 0) o.maxOrder = f.maxOrder;
    if (f.mu >= 0) o.mu = f.mu;
    if (!f.orders.empty()) {
        auto c = f.orders.find(':');
        o.orders = {std::stoi(f.orders.substr(0, c)), std::stoi(f.orders.substr(c + 1))};
    }
    if (f.format == "json") o.format = epschain::ExprFormat::Json;
    if (f.format == "text") o.format = epschain::ExprFormat::Text;
    if (f.format == "latex") o.format = epschain::ExprFormat::Latex;
    return o;
}

void writeAtomic(const fs::path& target, const std::string& content) {
    std::ostringstream tmpName;
    tmpName << target.filename().string() << ".tmp." << ::getpid() << '.' << std::this_thread::get_id();
    fs::path tmp = target.parent_path() / tmpName.str();
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << content;
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string readAll(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

epschain::RunResult runFile(Command cmd, const std::string& path, const epschain::RunOptions& opts) {
    spdlog::info("{} {}", epschain::commandName(cmd), path);
    std::string text;
    try {
        text = readAll(path);
    } catch (const std::exception& e) {
        epschain::RunResult r;
        r.envelope = json{{"status", "error"},
                          {"command", epschain::commandName(cmd)},
                          {"error", {{"kind", "io"}, {"message", e.what()}}}};
        r.exitCode = 1;
        return r;
    }
    auto r = epschain::runProblemText(cmd, text, opts);
    spdlog::info("{}: {} in {:.3f} s", path, r.envelope.value("status", ""),
                 r.envelope["timing"].value("seconds", 0.0));
    if (r.exitCode == 1) spdlog::warn("{}: {}", path, r.envelope["error"].value("message", ""));
    return r;
}

int runSingle(Command cmd, const Flags& f) {
    auto r = runFile(cmd, f.path, runOptions(f));
    std::string doc = r.envelope.dump(2) + "\n";
    if (f.out.empty()) {
        std::cout << doc;
    } else {
        fs::path out(f.out);
        writeAtomic(out, doc);
        if (!r.csv.empty()) writeAtomic(fs::path(out).replace_extension(".csv"), r.csv);
    }
    return r.exitCode;
}

bool isProblemFile(const fs::path& p) {
    std::string name = p.filename().string();
    auto ends = [&](const std::string& s) {
        return name.size() >= s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0;
    };
    return ends(".json") && !ends(".result.json");
}

int runBatch(Command cmd, const Flags& f) {
    fs::path dir(f.path);
    fs::path outDir = f.out.empty() ? dir : fs::path(f.out);
    fs::create_directories(outDir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && isProblemFile(e.path())) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    auto opts = runOptions(f);

    std::vector<int> codes(files.size(), 1);
    std::vector<std::string> statuses(files.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < files.size(); i = next++) {
            auto r = runFile(cmd, files[i].string(), opts);
            fs::path stem = outDir / files[i].stem();
            try {
                writeAtomic(stem.string() + ".result.json", r.envelope.dump(2) + "\n");
                if (!r.csv.empty()) writeAtomic(stem.string() + ".moments.csv", r.csv);
                codes[i] = r.exitCode;
                statuses[i] = r.envelope.value("status", "error");
            } catch (const std::exception& e) {
                spdlog::error("{}", e.what());
                statuses[i] = "error";
            }
        }
    };
    int jobs = std::max(1, std::min<int>(f.jobs, static_cast<int>(files.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    json summary = json::array();
    int code = 0;
    for (size_t i = 0; i < files.size(); ++i) {
        summary.push_back(json{{"file", files[i].filename().string()}, {"status", statuses[i]}, {"exit", codes[i]}});
        if (codes[i] == 1)
            code = 1;
        else if (codes[i] == 2 && code == 0)
            code = 2;
    }
    std::cout << json{{"results", summary}}.dump(2) << "\n";
    return code;
}

void setupLogging() {
    auto logger = spdlog::stderr_color_mt("epschain");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* lv = std::getenv("EPSCHAIN_LOG")) spdlog::set_level(spdlog::level::from_str(lv));
}

}  // namespace

int main(int argc, char** argv) {
    setupLogging();
    CLI::App app{"Exact symbolic summation, recurrence solving and eps-expansions"};
    app.require_subcommand(1);
    Flags f;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"telescope", "creative telescoping for a definite sum or integral"},
        {"solve-rec", "solve a linear recurrence in nested sums"},
        {"eps-expand", "eps-expansion of a recurrence solution"},
        {"solve-system", "eps-expansion of a coupled ODE system's series coefficients"},
        {"moments", "large moment tables of a coupled ODE system"},
        {"guess", "guess a recurrence for a sequence and solve it"},
        {"eval", "evaluate a nested-sum expression"},
        {"run", "dispatch on the payload of the problem file"}};
    for (const auto& [name, help] : commands) {
        auto* sc = app.add_subcommand(name, help);
        sc->add_option("path", f.path, "problem file, '-' for stdin, or a directory of problems")->required();
        sc->add_option("--out", f.out, "output file (directory in batch mode)");
        sc->add_option("--verify", f.verify, "verification window, 0 disables (default 25)")
            ->check(CLI::NonNegativeNumber);
        sc->add_option("--max-order", f.maxOrder, "maximal recurrence order")->check(CLI::NonNegativeNumber);
        sc->add_option("--orders", f.orders, "eps-orders l:r")
            ->check([](const std::string& s) -> std::string {
                auto c = s.find(':');
                if (c == std::string::npos) return "expected l:r";
                try {
                    size_t a, b;
                    int l = std::stoi(s.substr(0, c), &a);
                    int r = std::stoi(s.substr(c + 1), &b);
                    if (a != c || b != s.size() - c - 1) return "expected l:r";
                    if (r < l) return "empty order range";
                } catch (const std::exception&) {
                    return "expected l:r";
                }
                return "";
            });
        sc->add_option("--mu", f.mu, "number of moments")->check(CLI::NonNegativeNumber);
        sc->add_option("--format", f.format, "expression format")
            ->check(CLI::IsMember({"json", "text", "latex"}));
        sc->add_option("--jobs", f.jobs, "workers in batch mode")->check(CLI::PositiveNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    Command cmd = *epschain::commandFromName(app.get_subcommands().front()->get_name());
    try {
        if (f.path != "-" && fs::is_directory(f.path)) return runBatch(cmd, f);
        return runSingle(cmd, f);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
}
