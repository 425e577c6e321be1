#include <iostream>

#include "CLI11.hpp"
#include "schurlab/errors.hpp"
#include "schurlab/experiments.hpp"

using namespace schurlab;

namespace {

int cmd_run(const std::string& config_path, bool quiet) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    const Report rep = run(cfg);
    const auto path = report_path(cfg);
    try {
        emit(rep, path, Format::json);
        if (!rep.csv.empty()) {
            auto csv = path;
            csv.replace_extension(".csv");
            emit(rep, csv, Format::csv);
        }
    } catch (const error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (!quiet) {
        std::cout << cfg.kind << " " << cfg.name << ": " << (rep.passed ? "pass" : "FAIL");
        if (rep.summary.contains("checked"))
            std::cout << " (" << rep.summary["violations"] << "/" << rep.summary["checked"] << " violations)";
        std::cout << " -> " << path.string() << "\n";
        if (!rep.error.is_null()) std::cout << "error: " << rep.error["message"].get<std::string>() << "\n";
    }
    return exit_code(rep);
}

int cmd_selftest() {
    int failed = 0;
    for (const auto& c : selftest()) {
        std::cout << (c.ok ? "ok   " : "FAIL ") << c.name;
        if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
        std::cout << "\n";
        failed += c.ok ? 0 : 1;
    }
    std::cout << failed << " failed\n";
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-section experiments for multilinear Schur multipliers"};
    app.require_subcommand(1);

    std::string config_path;
    bool quiet = false;
    auto* run_cmd = app.add_subcommand("run", "run an experiment config and write its report");
    run_cmd->add_option("config", config_path, "config JSON")->required()->check(CLI::ExistingFile);
    run_cmd->add_flag("-q,--quiet", quiet, "no summary line");

    auto* list_cmd = app.add_subcommand("list-kinds", "list experiment kinds");

    std::string kind;
    auto* describe_cmd = app.add_subcommand("describe", "print the parameter schema of a kind");
    describe_cmd->add_option("kind", kind, "experiment kind")->required();

    auto* selftest_cmd = app.add_subcommand("selftest", "run the closed-form example corpus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (*run_cmd) return cmd_run(config_path, quiet);
    if (*list_cmd) {
        for (const auto& k : experiment_kinds()) std::cout << k.kind << "  " << k.summary << "\n";
        return 0;
    }
    if (*describe_cmd) {
        try {
            std::cout << dump_json(describe(kind));
        } catch (const error& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
        return 0;
    }
    if (*selftest_cmd) return cmd_selftest();
    return 2;
}
