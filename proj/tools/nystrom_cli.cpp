#include "nystrom/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

int main(int argc, char** argv) {
    using namespace nystrom;
    CLI::App app{"Nystrom solver for 2D Helmholtz transmission problems"};

    std::string config_path, pattern_prefix;
    bool study = false;
    std::map<std::string, std::string> settings;
    const std::vector<std::pair<std::string, std::string>> flags = {
        {"geometry", "kite | petal | circle[:R] | file:PATH"},
        {"omega", "frequency"},
        {"eps1", "exterior permittivity"},
        {"eps2", "interior permittivity"},
        {"polarization", "E (nu = 1) or H (nu = eps1/eps2)"},
        {"formulations", "comma list of CFIESK,SCFIE,GCSIE,PSGCSIE"},
        {"unknowns", "comma list of unknown counts (4n)"},
        {"tol", "GMRES relative residual"},
        {"tol-cfiesk", "CFIESK tolerance, or auto"},
        {"kappa", "auto or re,im"},
        {"eta", "auto or value"},
        {"dirs", "number of far-field directions"},
        {"amplitude", "incident amplitude"},
        {"reference", "auto | scfie | analytic"},
        {"reference-factor", "reference resolution multiple"},
        {"reference-tol", "reference GMRES tolerance"},
        {"kappa-oversample", "auto or refinement factor for the complex-wavenumber operators"},
        {"out", "output path (stdout when empty)"},
        {"format", "csv or json"},
    };
    for (const auto& [name, help] : flags) app.add_option("--" + name, settings[name], help);
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_flag("--study", study, "convergence study over the unknowns ladder");
    app.add_option("--pattern-prefix", pattern_prefix, "write each far-field pattern to PREFIX_<form>_<unknowns>.csv");
    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : parse_config_file(config_path);
        for (const auto& [name, help] : flags)
            if (app.count("--" + name) > 0) apply_setting(config, name, settings[name]);
        validate(config);
        if (study) {
            std::vector<int> ladder = config.unknowns;
            std::sort(ladder.begin(), ladder.end());
            if (std::unique(ladder.begin(), ladder.end()) - ladder.begin() < 3)
                throw ConfigError("convergence study needs at least three unknown counts");
        }

        std::ofstream file;
        std::ostream* out = &std::cout;
        if (!config.out.empty()) {
            file.open(config.out);
            if (!file) throw ConfigError("cannot open " + config.out);
            out = &file;
        }

        const RunReport run = run_experiment(config);
        if (study) {
            const ConvergenceReport report = convergence_study(run);
            config.format == "json" ? write_json(*out, report) : write_csv(*out, report);
        } else {
            config.format == "json" ? write_json(*out, run) : write_csv(*out, run);
        }
        if (!pattern_prefix.empty()) {
            for (const Cell& cell : run.cells) {
                if (!cell.error.empty()) continue;
                std::ofstream pattern_file(pattern_prefix + "_" + to_string(cell.formulation) + "_" +
                                           std::to_string(cell.unknowns) + ".csv");
                write_pattern_csv(pattern_file, cell.pattern);
            }
        }
        int failures = 0;
        for (const Cell& cell : run.cells)
            if (!cell.error.empty() || !cell.converged) ++failures;
        return failures == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
