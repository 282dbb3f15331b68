#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "schottky/cli.hpp"

namespace sc = schottky::cli;

int main(int argc, char** argv) {
    CLI::App app{"Decide whether a configuration of points on P^1 is good by the folding algorithm"};
    std::string input;
    bool use_stdin = false;
    sc::Options opt;
    std::string dot;
    std::size_t depth = 0;
    bool quiet = false;
    auto* in_opt = app.add_option("--input", input, "problem JSON file");
    auto* stdin_opt = app.add_flag("--stdin", use_stdin, "read the problem from standard input");
    in_opt->excludes(stdin_opt);
    app.add_flag("--trace", opt.trace, "include pre-fold points, witnesses and stage trees");
    auto* dot_opt = app.add_option("--dot", dot, "write <PREFIX>.stage<k>.dot per stage");
    auto* depth_opt = app.add_option("--verify-depth", depth, "audit words up to this length")->check(CLI::PositiveNumber);
    app.add_flag("--normalize-infinity", opt.normalize_infinity, "move the first point to infinity if none is given");
    app.add_flag("--quiet", quiet, "suppress the JSON report");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : sc::ExitInvalid;
    }
    if (*dot_opt) opt.dot = dot;
    if (*depth_opt) opt.verify_depth = depth;

    std::string text;
    if (use_stdin || input.empty()) {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(input);
        if (!in) {
            std::cerr << "error: cannot open " << input << "\n";
            return sc::ExitInvalid;
        }
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    sc::ProblemSpec spec;
    try {
        spec = sc::parse_problem(text);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sc::ExitInvalid;
    }

    auto res = sc::run(spec, opt);
    if (!res.report) {
        std::cerr << "error: " << res.diagnostic << "\n";
        return sc::ExitInvalid;
    }
    if (opt.dot) {
        for (std::size_t k = 0; k < res.report->trees.size(); ++k) {
            std::string path = *opt.dot + ".stage" + std::to_string(k) + ".dot";
            std::ofstream out(path);
            if (!out) {
                std::cerr << "error: cannot write " << path << "\n";
                return sc::ExitInvalid;
            }
            out << res.report->trees[k];
        }
    }
    if (!quiet) std::cout << nlohmann::json(*res.report).dump(2) << "\n";
    return res.exit_code;
}
