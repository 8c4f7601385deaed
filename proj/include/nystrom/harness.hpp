#pragma once

#include "nystrom/linsolve.hpp"
#include "nystrom/postprocess.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nystrom {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr const char* version_string = "nystrom 1.0.0";

struct ExperimentConfig {
    std::string geometry = "kite";
    double omega = 8.0;
    double eps1 = 1.0, eps2 = 4.0;
    Polarization polarization = Polarization::H;
    std::vector<Formulation> formulations{Formulation::CFIESK, Formulation::SCFIE, Formulation::GCSIE,
                                          Formulation::PSGCSIE};
    /// "Unknowns" column: 4n for every formulation (SCFIE solves for 2n of them).
    std::vector<int> unknowns{512};
    double tol = 1e-8;
    /// unset: tol/100 when k1 > k2, otherwise tol
    std::optional<double> tol_cfiesk;
    std::optional<cplx> kappa;
    std::optional<double> eta;
    int dirs = 360;
    double amplitude = 1.0;
    /// auto (analytic for circles, SCFIE otherwise), scfie, analytic
    std::string reference = "auto";
    int reference_factor = 2;
    double reference_tol = 1e-12;
    /// 0 = auto
    int kappa_oversample = default_regularizer_oversample;
    std::string out;
    std::string format = "csv";

    bool operator==(const ExperimentConfig&) const = default;
};

/// Flat key=value lines using the CLI flag names without dashes; '#' starts a comment.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
/// Apply one key=value setting (keys as in parse_config).
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
/// Inverse of parse_config; values printed with round-trip precision.
std::string to_config_text(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

ProblemParams problem_params(const ExperimentConfig& config);
double gmres_tolerance(const ExperimentConfig& config, Formulation which);
int unknowns_to_n(int unknowns);

struct Cell {
    Formulation formulation;
    int unknowns = 0;
    int n = 0;
    int iterations = 0;
    bool converged = false;
    double tolerance = 0.0;
    double far_error = 0.0;
    double final_residual = 0.0;
    double seconds = 0.0;
    /// empty unless the cell failed
    std::string error;
    FarFieldPattern pattern;
};

struct RunReport {
    ExperimentConfig config;
    std::string reference;
    std::vector<Cell> cells;
    std::string version = version_string;
};

struct Reference {
    FarFieldPattern pattern;
    std::string description;
};

/// Separation-of-variables far field for a circle of the given radius centred at the origin.
FarFieldPattern circle_far_field(const ProblemParams& params, double radius, int n_dirs);
Reference compute_reference(const ExperimentConfig& config);

/// One solve: assemble, GMRES, far field.
struct SolveOutcome {
    LinearSystem system;
    SolveReport solve;
    FarFieldPattern pattern;
};
SolveOutcome solve_formulation(Formulation which, OperatorCache& cache, double tol, int n_dirs);

RunReport run_experiment(const ExperimentConfig& config);
RunReport run_experiment(const ExperimentConfig& config, const Reference& reference);

struct OrderRow {
    Formulation formulation;
    int unknowns = 0;
    double error = 0.0;
    /// log(e_prev / e) / log(unknowns / unknowns_prev); unset for the first ladder point
    std::optional<double> order;
};

struct ConvergenceReport {
    RunReport run;
    std::vector<OrderRow> rows;
    /// Formulations whose empirical order increases along the whole ladder.
    std::vector<Formulation> superalgebraic;
};

ConvergenceReport convergence_study(const ExperimentConfig& config);
ConvergenceReport convergence_study(const RunReport& run);

/// CSV: "#config key=value" provenance lines, then one row per cell.
void write_csv(std::ostream& out, const RunReport& report);
void write_json(std::ostream& out, const RunReport& report);
void write_csv(std::ostream& out, const ConvergenceReport& report);
void write_json(std::ostream& out, const ConvergenceReport& report);
/// Recover the configuration from an emitted report (either format).
ExperimentConfig config_from_report(const std::string& text);

} // namespace nystrom
