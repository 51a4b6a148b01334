#include <ddae/commands.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    ddae::cli::configure_logging();

    CLI::App app{"Linear delay-differential algebraic systems: checks, simulation, spectra"};
    app.require_subcommand(1);

    std::string file;
    std::optional<std::filesystem::path> dot;
    auto* check = app.add_subcommand("check", "classify well-posedness and causality");
    check->add_option("file", file, "system file")->required();

    auto* graph = app.add_subcommand("graph", "block diagram in DOT format");
    graph->add_option("file", file, "system file")->required();
    graph->add_option("--dot", dot, "output file (stdout if omitted)");

    ddae::cli::SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "method-of-steps simulation to CSV");
    simulate->add_option("file", file, "system file")->required();
    simulate->add_option("--step", sim.step, "step size (defaults to init h)");
    simulate->add_option("--horizon", sim.horizon, "final time")->required();
    simulate->add_option("--out", sim.out_file, "CSV file (stdout if omitted)");

    ddae::cli::SpectrumOptions spec;
    std::vector<double> window;
    auto* spectrum = app.add_subcommand("spectrum", "characteristic roots in a window to JSON");
    spectrum->add_option("file", file, "system file")->required();
    spectrum->add_option("--window", window, "re_min re_max im_max")->expected(3)->required();
    spectrum->add_option("--max-roots", spec.max_roots, "root budget")->capture_default_str();
    spectrum->add_option("--out", spec.out_file, "JSON file (stdout if omitted)");

    ddae::cli::FsaOptions fsa;
    auto* fsa_cmd = app.add_subcommand("fsa", "finite spectrum assignment system file");
    fsa_cmd->add_option("--E", fsa.e, "drift matrix literal")->required();
    fsa_cmd->add_option("--F", fsa.f, "input matrix literal (n x 1)")->required();
    fsa_cmd->add_option("--T", fsa.t, "input delay")->required();
    auto* poles = fsa_cmd->add_option("--poles", fsa.poles, "desired poles, e.g. [-1,-2]");
    auto* gain = fsa_cmd->add_option("--G", fsa.gain, "feedback gain literal (1 x n)");
    poles->excludes(gain);
    fsa_cmd->add_option("--out", fsa.out_file, "system file (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    if (check->parsed()) {
        return ddae::cli::cmd_check(file, std::cout, std::cerr);
    }
    if (graph->parsed()) {
        return ddae::cli::cmd_graph(file, dot, std::cout, std::cerr);
    }
    if (simulate->parsed()) {
        return ddae::cli::cmd_simulate(file, sim, std::cout, std::cerr);
    }
    if (spectrum->parsed()) {
        spec.re_min = window[0];
        spec.re_max = window[1];
        spec.im_max = window[2];
        return ddae::cli::cmd_spectrum(file, spec, std::cout, std::cerr);
    }
    return ddae::cli::cmd_fsa(fsa, std::cout, std::cerr);
}
