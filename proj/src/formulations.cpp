#include "nystrom/formulations.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace nystrom {

namespace {

constexpr cplx I_unit(0.0, 1.0);

CMatrix blocks(const CMatrix& m11, const CMatrix& m12, const CMatrix& m21, const CMatrix& m22) {
    const Eigen::Index size = m11.rows();
    CMatrix out(2 * size, 2 * size);
    out.topLeftCorner(size, size) = m11;
    out.topRightCorner(size, size) = m12;
    out.bottomLeftCorner(size, size) = m21;
    out.bottomRightCorner(size, size) = m22;
    return out;
}

CMatrix identity(const Grid& grid) { return CMatrix::Identity(grid.size(), grid.size()); }
CMatrix zero(const Grid& grid) { return CMatrix::Zero(grid.size(), grid.size()); }

// [first | second] acting on a stacked (a, b) vector
CMatrix side_by_side(const CMatrix& first, const CMatrix& second) {
    CMatrix out(first.rows(), first.cols() + second.cols());
    out << first, second;
    return out;
}

CVector stack(const CVector& top, const CVector& bottom) {
    CVector out(top.size() + bottom.size());
    out << top, bottom;
    return out;
}

// Densities of the regularized representations:
//   alpha = nu/(1+nu) a + reg_S b,  beta = reg_N a + 1/(1+nu) b
Representation regularized_representation(const Grid& grid, double nu, const CMatrix& reg_S, const CMatrix& reg_N) {
    const double c1 = 1.0 / (1.0 + nu), cnu = nu / (1.0 + nu);
    const CMatrix id = identity(grid);
    Representation rep;
    rep.alpha = side_by_side(cnu * id, reg_S);
    rep.beta = side_by_side(reg_N, c1 * id);
    rep.alpha_int = side_by_side((cnu - 1.0) * id, reg_S);
    rep.beta_int = side_by_side(reg_N, (c1 - 1.0) * id);
    return rep;
}

} // namespace

std::string to_string(Formulation which) {
    switch (which) {
    case Formulation::CFIESK: return "CFIESK";
    case Formulation::SCFIE: return "SCFIE";
    case Formulation::GCSIE: return "GCSIE";
    case Formulation::PSGCSIE: return "PSGCSIE";
    }
    return "?";
}

Formulation parse_formulation(const std::string& name) {
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    for (Formulation f : {Formulation::CFIESK, Formulation::SCFIE, Formulation::GCSIE, Formulation::PSGCSIE})
        if (upper == to_string(f)) return f;
    throw FormulationError("unknown formulation: " + name);
}

int unknowns_per_node(Formulation which) { return which == Formulation::SCFIE ? 2 : 4; }

cplx default_kappa(double k1, double k2, double omega) {
    if (k1 < k2) return {0.5 * (k1 + k2), omega};
    return {k1, omega};
}

ProblemParams make_params(double omega, double eps1, double eps2, Polarization polarization,
                          std::optional<cplx> kappa, std::optional<double> eta, Vec2 direction) {
    if (!(omega > 0.0) || !(eps1 > 0.0) || !(eps2 > 0.0))
        throw FormulationError("frequency and permittivities must be positive");
    ProblemParams p;
    p.omega = omega;
    p.eps1 = eps1;
    p.eps2 = eps2;
    p.nu = polarization == Polarization::E ? 1.0 : eps1 / eps2;
    p.k1 = omega * std::sqrt(eps1);
    p.k2 = omega * std::sqrt(eps2);
    p.kappa = kappa.value_or(default_kappa(p.k1, p.k2, omega));
    p.eta = eta.value_or(p.k1);
    p.direction = direction;
    validate(p);
    return p;
}

void validate(const ProblemParams& p) {
    if (!(p.k1 > 0.0) || !(p.k2 > 0.0)) throw FormulationError("wavenumbers must be positive");
    if (!(p.nu > 0.0)) throw FormulationError("transmission coefficient must be positive");
    if (!(p.kappa.real() > 0.0) || !(p.kappa.imag() > 0.0))
        throw FormulationError("regularizer wavenumber needs Re > 0 and Im > 0");
    if (p.eta == 0.0 || !std::isfinite(p.eta)) throw FormulationError("coupling parameter must be nonzero");
    if (std::abs(p.direction.norm() - 1.0) > 1e-12) throw FormulationError("incidence direction must be a unit vector");
    if (!std::isfinite(p.amplitude)) throw FormulationError("amplitude must be finite");
}

IncidentTraces incident_traces(const ProblemParams& params, const Curve& curve, const Grid& grid) {
    const int size = grid.size();
    IncidentTraces out{CVector(size), CVector(size)};
    for (int j = 0; j < size; ++j) {
        const double t = grid.node(j);
        const Vec2 x = curve.eval(t), dx = curve.deriv1(t);
        const Vec2 scaled_normal(dx.y(), -dx.x());  // |x'| n
        const cplx wave = params.amplitude * std::exp(I_unit * params.k1 * x.dot(params.direction));
        out.f(j) = -wave;
        out.g(j) = -I_unit * params.k1 * scaled_normal.dot(params.direction) * wave;
    }
    return out;
}

int auto_regularizer_oversample(const Curve& curve, const Grid& grid, cplx kappa) {
    const double transition = std::pow(std::abs(kappa), -0.25) * (1.0 - std::pow(2.0, -0.25));
    double max_jacobian = 0.0;
    const Grid probe(std::max(grid.n(), 256));
    for (int j = 0; j < probe.size(); ++j) max_jacobian = std::max(max_jacobian, curve.deriv1(probe.node(j)).norm());
    int factor = 1;
    while (factor < 64 && transition < 10.0 * max_jacobian * grid.spacing() / factor) factor *= 2;
    return factor;
}

OperatorCache::OperatorCache(const ProblemParams& params, const Curve& curve, const Grid& grid,
                             int regularizer_oversample)
    : params_(params), curve_(curve), grid_(grid), oversample_(regularizer_oversample) {
    validate(params_);
    if (oversample_ < 0) throw FormulationError("oversampling factor must be >= 1 (or 0 for auto)");
    if (oversample_ == 0) oversample_ = auto_regularizer_oversample(curve_, grid_, params_.kappa);
}

const LayerFamily& OperatorCache::exterior() {
    if (!exterior_)
        exterior_ = std::make_unique<LayerFamily>(assemble_layer_family(curve_, grid_, params_.k1, true));
    return *exterior_;
}

const LayerFamily& OperatorCache::interior() {
    if (!interior_)
        interior_ = std::make_unique<LayerFamily>(assemble_layer_family(curve_, grid_, params_.k2, true));
    return *interior_;
}

const LayerFamily& OperatorCache::regularizer() {
    if (!regularizer_)
        regularizer_ = std::make_unique<LayerFamily>(
            assemble_layer_family_oversampled(curve_, grid_, params_.kappa, oversample_));
    return *regularizer_;
}

LinearSystem assemble_CFIESK(OperatorCache& cache) {
    const ProblemParams& p = cache.params();
    const Grid& grid = cache.grid();
    const LayerFamily& o1 = cache.exterior();
    const LayerFamily& o2 = cache.interior();
    const double inv_nu = 1.0 / p.nu;
    const double diag = 0.5 * (inv_nu + 1.0);
    const CMatrix id = identity(grid);

    LinearSystem sys{Formulation::CFIESK, grid, {}, {}, {}, "(u, |x'| du/dn), u = total exterior boundary field"};
    sys.matrix = blocks(diag * id + o2.K - inv_nu * o1.K, inv_nu * (o1.S - o2.S),
                        -(o1.N_smooth - o2.N_smooth), diag * id + o1.KT - inv_nu * o2.KT);
    const IncidentTraces inc = incident_traces(p, cache.curve(), grid);
    sys.rhs = stack(-inv_nu * inc.f, -inc.g);

    const CMatrix z = zero(grid);
    sys.representation.alpha = side_by_side(id, z);
    sys.representation.beta = side_by_side(z, id);
    sys.representation.alpha_int = sys.representation.alpha;
    sys.representation.beta_int = sys.representation.beta;
    return sys;
}

LinearSystem assemble_SCFIE(OperatorCache& cache) {
    const ProblemParams& p = cache.params();
    const Grid& grid = cache.grid();
    const LayerFamily& o1 = cache.exterior();
    const LayerFamily& o2 = cache.interior();
    const double nu = p.nu;
    const CMatrix id = identity(grid);
    const CMatrix id_plus_2KT2 = id + 2.0 * o2.KT;

    // K-part and S-part of the Burton-Miller combination; the coupling acts on
    // plain-valued terms without a jacobian factor.
    const CMatrix k_part = -o2.KT * (nu * id - 2.0 * o2.KT) - nu * o1.KT * id_plus_2KT2 +
                           2.0 * (o1.N_smooth - o2.N_smooth) * o2.S;
    const CMatrix s_part = -nu * o1.S * id_plus_2KT2 - (id - 2.0 * o1.K) * o2.S;

    LinearSystem sys{Formulation::SCFIE, grid, {}, {}, {}, "|x'| phi, phi = single-layer density of the interior field"};
    sys.matrix = -0.5 * (1.0 + nu) * id + k_part - I_unit * p.eta * s_part;
    const IncidentTraces inc = incident_traces(p, cache.curve(), grid);
    sys.rhs = -inc.g + I_unit * p.eta * inc.f;

    sys.representation.alpha = -2.0 * o2.S;
    sys.representation.beta = -nu * id_plus_2KT2;
    sys.representation.alpha_int = zero(grid);
    sys.representation.beta_int = -2.0 * nu * id;
    return sys;
}

LinearSystem assemble_GCSIE(OperatorCache& cache) {
    const ProblemParams& p = cache.params();
    const Grid& grid = cache.grid();
    const LayerFamily& o1 = cache.exterior();
    const LayerFamily& o2 = cache.interior();
    const LayerFamily& ok = cache.regularizer();
    const double c1 = 1.0 / (1.0 + p.nu), cnu = p.nu / (1.0 + p.nu);
    const CMatrix id = identity(grid);

    // Hypersingular differences: T0 cancels, so only smooth parts enter.
    const CMatrix d11 = id - c1 * o2.K + cnu * o1.K - 2.0 * cnu * o1.S * (ok.N_smooth - o1.N_smooth) -
                        2.0 * cnu * o1.K * o1.K - 2.0 * c1 * o2.S * (ok.N_smooth - o2.N_smooth) -
                        2.0 * c1 * o2.K * o2.K;
    const CMatrix d12 = c1 * (o2.S - o1.S) - 2.0 * c1 * (o1.K + o2.K) * ok.S;
    const CMatrix d21 = cnu * (o1.N_smooth - o2.N_smooth) - 2.0 * cnu * (o1.KT + o2.KT) * ok.N;
    const CMatrix d22 = id + cnu * o2.KT - c1 * o1.KT - 2.0 * c1 * (o1.N_smooth - ok.N_smooth) * ok.S -
                        2.0 * cnu * (o2.N_smooth - ok.N_smooth) * ok.S - 2.0 * ok.KT * ok.KT;

    LinearSystem sys{Formulation::GCSIE, grid, {}, {}, {}, "(a, |x'| b), right-hand side (f, g)"};
    sys.matrix = blocks(d11, d12, d21, d22);
    const IncidentTraces inc = incident_traces(p, cache.curve(), grid);
    sys.rhs = stack(inc.f, inc.g);
    sys.representation = regularized_representation(grid, p.nu, -2.0 * c1 * ok.S, 2.0 * cnu * ok.N);
    return sys;
}

LinearSystem assemble_PSGCSIE(OperatorCache& cache) {
    const ProblemParams& p = cache.params();
    const Grid& grid = cache.grid();
    const LayerFamily& o1 = cache.exterior();
    const LayerFamily& o2 = cache.interior();
    const double nu = p.nu;
    const double c1 = 1.0 / (1.0 + nu), cnu = nu / (1.0 + nu);
    const CMatrix id = identity(grid);
    const CMatrix ps_S = assemble_PS(SymbolKind::S, p.kappa, grid).entries;
    const CMatrix ps_N = assemble_PS(SymbolKind::N, p.kappa, grid).entries;
    const CMatrix atilde_first = assemble_Atilde(AtildeKind::first, p.kappa, grid).entries;
    const CMatrix atilde_second = assemble_Atilde(AtildeKind::second, p.kappa, grid).entries;

    // 2 A0 PS(N) = -I/2 + Atilde_first and 2 T0 PS(S) = -I/2 + Atilde_second absorb
    // the leading parts of S and N exactly.
    const CMatrix d11 = id - atilde_first - 2.0 * cnu * (o1.S_hat + o2.S_hat / nu) * ps_N + cnu * o1.K - c1 * o2.K;
    const CMatrix d12 = c1 * (o2.S - o1.S) - 2.0 * c1 * (o1.K + o2.K) * ps_S;
    const CMatrix d21 = cnu * (o1.N_smooth - o2.N_smooth) - 2.0 * cnu * (o1.KT + o2.KT) * ps_N;
    const CMatrix d22 =
        id - atilde_second - 2.0 * c1 * (o1.N_smooth + nu * o2.N_smooth) * ps_S + cnu * o2.KT - c1 * o1.KT;

    LinearSystem sys{Formulation::PSGCSIE, grid, {}, {}, {}, "(a, |x'| b), right-hand side (f, g)"};
    sys.matrix = blocks(d11, d12, d21, d22);
    const IncidentTraces inc = incident_traces(p, cache.curve(), grid);
    sys.rhs = stack(inc.f, inc.g);
    sys.representation = regularized_representation(grid, nu, -2.0 * c1 * ps_S, 2.0 * cnu * ps_N);
    return sys;
}

LinearSystem assemble(Formulation which, OperatorCache& cache) {
    switch (which) {
    case Formulation::CFIESK: return assemble_CFIESK(cache);
    case Formulation::SCFIE: return assemble_SCFIE(cache);
    case Formulation::GCSIE: return assemble_GCSIE(cache);
    case Formulation::PSGCSIE: return assemble_PSGCSIE(cache);
    }
    throw FormulationError("unknown formulation");
}

LinearSystem assemble_CFIESK(const ProblemParams& params, const Curve& curve, const Grid& grid) {
    OperatorCache cache(params, curve, grid);
    return assemble_CFIESK(cache);
}
LinearSystem assemble_SCFIE(const ProblemParams& params, const Curve& curve, const Grid& grid) {
    OperatorCache cache(params, curve, grid);
    return assemble_SCFIE(cache);
}
LinearSystem assemble_GCSIE(const ProblemParams& params, const Curve& curve, const Grid& grid) {
    OperatorCache cache(params, curve, grid);
    return assemble_GCSIE(cache);
}
LinearSystem assemble_PSGCSIE(const ProblemParams& params, const Curve& curve, const Grid& grid) {
    OperatorCache cache(params, curve, grid);
    return assemble_PSGCSIE(cache);
}

} // namespace nystrom
