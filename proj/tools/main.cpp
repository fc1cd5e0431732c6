#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entwit/io.hpp"

namespace {

struct Args {
    entwit::CliFlags flags;
    std::string command;
    std::string path1, path2;
    std::vector<int> dims;
    std::optional<double> p;
    int grid = 11;
};

int dispatch(const Args& args) {
    entwit::CmdResult result;
    if (args.command == "classify") {
        result = entwit::cmd_classify(args.path1, args.flags);
    } else if (args.command == "bsa") {
        result = entwit::cmd_bsa(args.path1, args.flags);
    } else if (args.command == "finer") {
        result = entwit::cmd_finer(args.path1, args.path2, args.flags);
    } else if (args.command == "family") {
        result = entwit::cmd_family(args.path1, args.path2, args.flags);
    } else if (args.command == "ces") {
        result = entwit::cmd_ces(args.dims, args.flags);
    } else if (args.command == "demo-werner") {
        result = entwit::cmd_demo_werner(args.p, args.grid, args.flags);
    } else {
        std::cerr << "unknown command\n";
        return 2;
    }
    std::cout << result.report.dump(2) << "\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Witness-hierarchy toolkit: classification, best separable "
                 "approximation, order relations, and completely entangled subspaces"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", entwit::kVersion);

    Args args;
    int restarts = 0;
    app.add_option("--seed", args.flags.seed, "Random seed (default 0)")->capture_default_str();
    CLI::Option* restarts_opt =
        app.add_option("--restarts", restarts, "Search restarts (default per command)");
    app.add_option("--tol", args.flags.tol, "Numerical tolerance (default 1e-6)")
        ->capture_default_str();

    CLI::App* classify = app.add_subcommand("classify", "Place an operator in the hierarchy");
    classify->add_option("file", args.path1, "Operator document")->required();

    CLI::App* bsa = app.add_subcommand("bsa", "Best separable approximation of a state");
    bsa->add_option("file", args.path1, "State document")->required();
    bsa->add_option("--max-iters", args.flags.max_iters, "Subtraction round budget")
        ->capture_default_str();

    CLI::App* finer = app.add_subcommand("finer", "Is the first state finer than the second?");
    finer->add_option("candidate", args.path1, "Finer-candidate state document")->required();
    finer->add_option("base", args.path2, "Base state document")->required();

    CLI::App* family = app.add_subcommand("family", "Do two states share a family?");
    family->add_option("first", args.path1, "State document")->required();
    family->add_option("second", args.path2, "State document")->required();

    CLI::App* ces = app.add_subcommand("ces", "Maximal completely-entangled-subspace dimension");
    ces->add_option("--dims", args.dims, "Local dimensions, e.g. --dims 2,3")
        ->required()
        ->delimiter(',');

    CLI::App* demo = app.add_subcommand("demo", "Worked reproductions");
    CLI::App* demo_werner = demo->add_subcommand("werner", "Werner-family boundary and BSA");
    double p_value = 0.0;
    CLI::Option* p_opt = demo_werner->add_option("--p", p_value, "Single mixing parameter")
                             ->check(CLI::Range(0.0, 1.0));
    CLI::Option* grid_opt =
        demo_werner->add_option("--grid", args.grid, "Grid points over [0,1] (default 11)")
            ->check(CLI::Range(2, 10000));
    p_opt->excludes(grid_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion") {
            return app.exit(e);
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (restarts_opt->count() > 0) args.flags.restarts = restarts;
    if (p_opt->count() > 0) args.p = p_value;

    if (classify->parsed()) args.command = "classify";
    if (bsa->parsed()) args.command = "bsa";
    if (finer->parsed()) args.command = "finer";
    if (family->parsed()) args.command = "family";
    if (ces->parsed()) args.command = "ces";
    if (demo->parsed() && demo_werner->parsed()) args.command = "demo-werner";
    if (demo->parsed() && !demo_werner->parsed()) {
        std::cerr << "demo needs a topic (werner)\n";
        return 2;
    }

    try {
        return dispatch(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return entwit::exit_code_for(e);
    }
}
