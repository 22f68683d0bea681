// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include <govsim/govsim.hpp>

namespace {

// exit codes: 0 all assertions held, 1 an assertion failed, 2 execution
// error, 3 unreadable or invalid scenario
constexpr int exit_exec_error = 2;
constexpr int exit_parse_error = 3;

std::string slurp(const std::string &path)
{
    std::ifstream in { path, std::ios::binary };
    if (!in)
        throw govsim::error { govsim::errc::syntax_error, "cannot open " + path };
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_command(const std::string &path, std::optional<uint64_t> seed, const std::string &report_path,
    const std::string &format)
{
    govsim::scenario_doc doc;
    try {
        doc = govsim::parse_scenario(slurp(path));
    } catch (const govsim::error &e) {
        std::cerr << path << ": " << e.what() << "\n";
        return exit_parse_error;
    }
    govsim::scenario_result result;
    try {
        result = govsim::run_scenario(doc, seed);
    } catch (const std::exception &e) {
        std::cerr << path << ": " << e.what() << "\n";
        return exit_exec_error;
    }
    const auto rendered = format == "text" ? govsim::render_text_report(result.report)
                                           : result.report.dump(2) + "\n";
    if (report_path.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out { report_path, std::ios::binary };
        if (!out) {
            std::cerr << "cannot write " << report_path << "\n";
            return exit_exec_error;
        }
        out << rendered;
    }
    return result.exit_code;
}

int validate_command(const std::string &path)
{
    try {
        const auto doc = govsim::parse_scenario(slurp(path));
        std::cout << "valid: " << doc.name << " (" << doc.actions.size() << " actions, "
                  << doc.assertions.size() << " assertions)\n";
        return 0;
    } catch (const govsim::error &e) {
        std::cerr << path << ": " << e.what() << "\n";
        return exit_parse_error;
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app { "governance pattern simulator" };
    app.require_subcommand(1);

    std::string run_path, report_path, format { "json" };
    std::optional<uint64_t> seed;
    auto *run = app.add_subcommand("run", "execute a scenario and emit its report");
    run->add_option("file", run_path, "scenario file")->required();
    run->add_option("--seed", seed, "override the scenario's seed");
    run->add_option("--report", report_path, "write the report here instead of stdout");
    run->add_option("--format", format, "report format")->check(CLI::IsMember({ "json", "text" }));

    std::string validate_path;
    auto *validate = app.add_subcommand("validate", "parse and check a scenario without running it");
    validate->add_option("file", validate_path, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    // the environment wins over the flag so wrappers can pin runs
    if (const char *env_seed = std::getenv("GOVSIM_SEED"); env_seed != nullptr) {
        char *end = nullptr;
        const auto v = std::strtoull(env_seed, &end, 10);
        if (end == env_seed || *end != '\0') {
            std::cerr << "GOVSIM_SEED is not a number: " << env_seed << "\n";
            return exit_parse_error;
        }
        seed = v;
    }

    if (run->parsed())
        return run_command(run_path, seed, report_path, format);
    return validate_command(validate_path);
}
