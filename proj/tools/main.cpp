#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Differential modules, flags and their resolutions"};
    std::string command, path;
    dmflag::cli::Flags flags;
    std::string order;
    int cap = 0, codim = 0, e = 0, k = 0;
    unsigned long long seed = 0;
    app.add_option("command", command,
                   "check | homology | ce-res | anchor | quasimin | lift | perturb | adams | trc | "
                   "tensor-test | frobenius")
        ->required();
    app.add_option("file", path, "problem file (JSON)")->required();
    auto* o_order = app.add_option("--ring-order", order, "grevlex or lex");
    auto* o_cap = app.add_option("--length-cap", cap, "resolution length cap");
    auto* o_codim = app.add_option("--codim", codim, "codimension of the homology support");
    auto* o_e = app.add_option("--e", e, "Frobenius exponent");
    auto* o_k = app.add_option("--k", k, "Adams operation index");
    auto* o_seed = app.add_option("--seed", seed, "seed for randomized inputs");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 2;
    }
    if (*o_order) flags.ring_order = order;
    if (*o_cap) flags.length_cap = cap;
    if (*o_codim) flags.codim = codim;
    if (*o_e) flags.e = e;
    if (*o_k) flags.k = k;
    if (*o_seed) flags.seed = seed;

    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot read " << path << "\n";
        return 2;
    }
    std::ostringstream text;
    text << in.rdbuf();
    dmflag::cli::Outcome out = dmflag::cli::run(command, text.str(), flags);
    std::cout << out.report.dump(2) << "\n";
    return out.exit_code;
}
