#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "conefock/commands.hpp"

namespace {

struct Args {
    std::string config_path;
    std::string out_path;
    bool has_seed = false;
    std::uint64_t seed = 0;
};

int run(const std::string& command, const Args& args) {
    conefock::Json config;
    {
        std::ifstream in(args.config_path);
        if (!in) {
            std::cerr << "config error at " << args.config_path << ": cannot open file\n";
            return conefock::kExitConfigError;
        }
        try {
            config = conefock::Json::parse(in);
        } catch (const std::exception& e) {
            std::cerr << "config error at " << args.config_path << ": " << e.what() << "\n";
            return conefock::kExitConfigError;
        }
    }
    if (args.has_seed) config["seed"] = args.seed;

    const conefock::CommandOutcome outcome = conefock::run_command(command, config);
    const std::string text = outcome.report.dump(2) + "\n";
    if (!args.out_path.empty()) {
        std::ofstream out(args.out_path);
        if (!out) {
            std::cerr << "cannot write report to " << args.out_path << "\n";
            return conefock::kExitConfigError;
        }
        out << text;
    } else {
        std::cout << text;
    }
    if (outcome.exit_code != conefock::kExitPass && outcome.report.contains("error"))
        std::cerr << outcome.report["error"]["message"].get<std::string>() << "\n";
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CCR/CAR flow toolkit over convex cones"};
    app.require_subcommand(1);

    const std::vector<std::string> names = {"verify-relations", "cocycles", "divisibility",
                                            "decomposables",    "proper-search", "witness"};
    std::map<std::string, Args> args;
    for (const std::string& name : names) {
        CLI::App* sub = app.add_subcommand(name);
        Args& a = args[name];
        sub->add_option("--config", a.config_path, "JSON config file")->required();
        sub->add_option("--out", a.out_path, "report output path (default: stdout)");
        sub->add_option("--seed", a.seed, "override the config seed")
            ->check(CLI::NonNegativeNumber);
    }

    CLI11_PARSE(app, argc, argv);

    for (const std::string& name : names) {
        CLI::App* sub = app.get_subcommand(name);
        if (sub->parsed()) {
            Args& a = args[name];
            a.has_seed = sub->count("--seed") > 0;
            return run(name, a);
        }
    }
    return conefock::kExitConfigError;
}
