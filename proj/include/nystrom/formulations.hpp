#pragma once

#include "nystrom/operators.hpp"

#include <memory>
#include <optional>
#include <string>

namespace nystrom {

class FormulationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Formulation { CFIESK, SCFIE, GCSIE, PSGCSIE };
enum class Polarization { E, H };

std::string to_string(Formulation which);
Formulation parse_formulation(const std::string& name);
/// Density values per node: 2 for SCFIE, 4 otherwise (the "unknowns" column is 4n for all).
int unknowns_per_node(Formulation which);

struct ProblemParams {
    double omega = 0.0;
    double eps1 = 1.0, eps2 = 1.0;
    /// transmission coefficient in  d_n u1 + d_n u_inc = nu d_n u2
    double nu = 1.0;
    double k1 = 0.0, k2 = 0.0;
    cplx kappa = 0.0;
    double eta = 0.0;
    Vec2 direction{0.0, -1.0};
    /// Incident plane wave amplitude; 0 gives the homogeneous problem.
    double amplitude = 1.0;
};

/// (k1+k2)/2 + i omega when k1 < k2, otherwise k1 + i omega.
cplx default_kappa(double k1, double k2, double omega);

/// k_i = omega sqrt(eps_i); nu = 1 (E) or eps1/eps2 (H); eta defaults to k1.
ProblemParams make_params(double omega, double eps1, double eps2, Polarization polarization,
                          std::optional<cplx> kappa = std::nullopt, std::optional<double> eta = std::nullopt,
                          Vec2 direction = Vec2(0.0, -1.0));
void validate(const ProblemParams& params);

/// f = -u_inc, g = -|x'| d_n u_inc at the nodes.
struct IncidentTraces {
    CVector f, g;
};
IncidentTraces incident_traces(const ProblemParams& params, const Curve& curve, const Grid& grid);

/// Maps a solution vector to the layer densities of the field representation
///   u1 = DL_{k1}[alpha] - SL_{k1}[beta]                 outside (scattered part)
///   u2 = -DL_{k2}[alpha_int] + SL_{k2}[beta_int] / nu   inside
/// alpha* hold plain nodal values, beta* are |x'|-weighted.
struct Representation {
    CMatrix alpha, beta, alpha_int, beta_int;
};

/// Unknowns:
///   CFIESK          (u, |x'| d_n u) with u the total exterior boundary field
///   SCFIE           |x'| phi
///   GCSIE, PSGCSIE  (a, |x'| b); the right-hand side is (f, g) so b carries the
///                   sign convention b_param = +|x'| b.
struct LinearSystem {
    Formulation formulation;
    Grid grid;
    CMatrix matrix;
    CVector rhs;
    Representation representation;
    std::string unknown_scaling;
};

/// Refinement factor for the quadrature of the complex-wavenumber operators
/// in GCSIE; 0 selects auto_regularizer_oversample.
inline constexpr int default_regularizer_oversample = 0;

/// Smallest power of two (<= 64) giving at least 10 refined node spacings across
/// the cutoff transition |kappa|^{-1/4} (1 - 2^{-1/4}) of the truncated splits.
int auto_regularizer_oversample(const Curve& curve, const Grid& grid, cplx kappa);

/// Layer operator families shared between formulations at one (params, curve, grid).
class OperatorCache {
public:
    OperatorCache(const ProblemParams& params, const Curve& curve, const Grid& grid,
                  int regularizer_oversample = default_regularizer_oversample);

    const LayerFamily& exterior();   // k1, with S_hat
    const LayerFamily& interior();   // k2, with S_hat
    const LayerFamily& regularizer();  // kappa, truncated splits, oversampled quadrature
    int regularizer_oversample() const { return oversample_; }
    const ProblemParams& params() const { return params_; }
    const Curve& curve() const { return curve_; }
    const Grid& grid() const { return grid_; }

private:
    ProblemParams params_;
    Curve curve_;
    Grid grid_;
    int oversample_;
    std::unique_ptr<LayerFamily> exterior_, interior_, regularizer_;
};

LinearSystem assemble_CFIESK(OperatorCache& cache);
LinearSystem assemble_SCFIE(OperatorCache& cache);
LinearSystem assemble_GCSIE(OperatorCache& cache);
LinearSystem assemble_PSGCSIE(OperatorCache& cache);
LinearSystem assemble(Formulation which, OperatorCache& cache);

LinearSystem assemble_CFIESK(const ProblemParams& params, const Curve& curve, const Grid& grid);
LinearSystem assemble_SCFIE(const ProblemParams& params, const Curve& curve, const Grid& grid);
LinearSystem assemble_GCSIE(const ProblemParams& params, const Curve& curve, const Grid& grid);
LinearSystem assemble_PSGCSIE(const ProblemParams& params, const Curve& curve, const Grid& grid);

} // namespace nystrom
