// wfsat: command-line front end for the workflow satisfiability solvers.
//
// Exit codes: 0 decision yes (or success), 1 decision no, 2 usage or input
// error, 3 size limit exceeded.

#include "wfsat/decide.hpp"
#include "wfsat/error.hpp"
#include "wfsat/oracle.hpp"
#include "wfsat/parser.hpp"
#include "wfsat/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;
constexpr int kSizeLimit = 3;

std::optional<wfsat::Rational> rational_flag(const std::string& text)
{
    if (text.empty()) {
        return std::nullopt;
    }
    return wfsat::parse_rational(text);
}

int answer_code(const std::optional<bool>& answer)
{
    return answer.value_or(true) ? kYes : kNo;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bounded and approximate strong satisfiability for constrained compositional workflows"};
    app.require_subcommand(1);

    std::string file;
    std::string mode;
    std::string budget_text;
    std::string prob_text;
    std::string what;
    unsigned jobs = 0;
    bool timings = false;
    std::size_t limit = 0;

    const std::map<std::string, wfsat::Problem> check_modes{{"strong", wfsat::Problem::strong},
                                                            {"bounded", wfsat::Problem::bounded},
                                                            {"expected", wfsat::Problem::expected},
                                                            {"approx", wfsat::Problem::approx}};
    const std::vector<std::string> check_names{"strong", "bounded", "expected", "approx"};

    auto* check = app.add_subcommand("check", "decide strong / bounded / expected / approx satisfiability");
    check->add_option("--mode", mode, "problem to decide")->required()->check(CLI::IsMember(check_names));
    check->add_option("--budget", budget_text, "budget B (\"N\" or \"N/D\"), overrides the file");
    check->add_option("--prob", prob_text, "probability p (\"N/D\"), overrides the file");
    check->add_option("--jobs", jobs, "worker threads (default: hardware concurrency)");
    check->add_flag("--timings", timings, "include wall-clock timings in the report");
    check->add_option("file", file, "instance file")->required();

    auto* solve = app.add_subcommand("solve", "minimum-cost plan for every execution arrangement");
    solve->add_option("--jobs", jobs, "worker threads");
    solve->add_flag("--timings", timings, "include wall-clock timings in the report");
    solve->add_option("file", file, "instance file")->required();

    auto* enumerate = app.add_subcommand("enumerate", "list xor-free instances, arrangements or sequences");
    enumerate->add_option("--what", what, "what to enumerate")
        ->required()
        ->check(CLI::IsMember({"instances", "arrangements", "sequences"}));
    enumerate->add_option("--limit", limit, "sequence cap per instance");
    enumerate->add_option("file", file, "instance file")->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force counterpart of check");
    oracle_cmd->add_option("--mode", mode, "problem to decide")->required()->check(CLI::IsMember(check_names));
    oracle_cmd->add_option("--budget", budget_text, "budget B, overrides the file");
    oracle_cmd->add_option("--prob", prob_text, "probability p, overrides the file");
    oracle_cmd->add_option("--limit", limit, "sequence cap");
    oracle_cmd->add_option("file", file, "instance file")->required();

    auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of the workflow");
    dot->add_option("file", file, "instance file")->required();

    auto* min_budget = app.add_subcommand("min-budget", "smallest budget for bounded or expected cost");
    min_budget->add_option("--mode", mode, "bounded or expected")
        ->required()
        ->check(CLI::IsMember({"bounded", "expected"}));
    min_budget->add_option("--jobs", jobs, "worker threads");
    min_budget->add_flag("--timings", timings, "include wall-clock timings in the report");
    min_budget->add_option("file", file, "instance file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        const wfsat::Schema schema = wfsat::load_ccws(file);
        const auto budget = rational_flag(budget_text);
        const auto prob = rational_flag(prob_text);

        if (*check) {
            const auto report = wfsat::decide(schema, check_modes.at(mode), budget, prob, jobs);
            std::cout << wfsat::decision_report_json(report, schema, timings);
            return answer_code(report.answer);
        }
        if (*solve) {
            const auto report = wfsat::decide(schema, wfsat::Problem::solve, budget, prob, jobs);
            std::cout << wfsat::decision_report_json(report, schema, timings);
            return kYes;
        }
        if (*min_budget) {
            const auto problem =
                mode == "bounded" ? wfsat::Problem::min_budget_bounded : wfsat::Problem::min_budget_expected;
            const auto report = wfsat::decide(schema, problem, std::nullopt, std::nullopt, jobs);
            std::cout << wfsat::decision_report_json(report, schema, timings);
            return kYes;
        }
        if (*enumerate) {
            const auto kind = what == "instances"      ? wfsat::EnumerateWhat::instances
                              : what == "arrangements" ? wfsat::EnumerateWhat::arrangements
                                                       : wfsat::EnumerateWhat::sequences;
            std::cout << wfsat::enumerate_report_json(schema, kind,
                                                      limit > 0 ? limit : wfsat::kDefaultSequenceLimit);
            return kYes;
        }
        if (*dot) {
            std::cout << wfsat::export_dot(*schema.workflow);
            return kYes;
        }
        if (*oracle_cmd) {
            const auto b = budget ? budget : schema.budget;
            const auto p = prob ? prob : schema.probability;
            const auto problem = check_modes.at(mode);
            if (problem != wfsat::Problem::strong && !b) {
                throw std::invalid_argument(mode + " needs a budget");
            }
            if (problem == wfsat::Problem::approx && !p) {
                throw std::invalid_argument("approx needs a probability");
            }
            wfsat::oracle::Limits limits;
            if (limit > 0) {
                limits.sequences = limit;
            }
            const auto report = wfsat::oracle::decide(schema, b, p, limits);
            std::optional<bool> answer;
            switch (problem) {
            case wfsat::Problem::strong:
                answer = report.strong;
                break;
            case wfsat::Problem::bounded:
                answer = report.bounded;
                break;
            case wfsat::Problem::expected:
                answer = report.expected;
                break;
            default:
                answer = report.approx;
                break;
            }
            std::cout << wfsat::oracle_report_json(report, schema, "oracle-" + mode, answer, b, p);
            return answer_code(answer);
        }
    } catch (const wfsat::SizeLimit& e) {
        std::cerr << "wfsat: size limit: " << e.what() << "\n";
        return kSizeLimit;
    } catch (const std::exception& e) {
        std::cerr << "wfsat: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
