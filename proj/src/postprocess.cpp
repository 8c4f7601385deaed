#include "nystrom/postprocess.hpp"

#include "nystrom/specfun.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

namespace nystrom {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I_unit(0.0, 1.0);

struct BoundarySamples {
    std::vector<Vec2> x, scaled_normal;  // |x'| n = (x2', -x1')
    double max_spacing = 0.0;
};

BoundarySamples sample_boundary(const Curve& curve, const Grid& grid) {
    BoundarySamples out;
    const int size = grid.size();
    out.x.resize(size);
    out.scaled_normal.resize(size);
    for (int j = 0; j < size; ++j) {
        const double t = grid.node(j);
        out.x[j] = curve.eval(t);
        const Vec2 dx = curve.deriv1(t);
        out.scaled_normal[j] = Vec2(dx.y(), -dx.x());
        out.max_spacing = std::max(out.max_spacing, dx.norm() * grid.spacing());
    }
    return out;
}

CVector refine(const CVector& values, const Grid& coarse, const Grid& fine) {
    if (coarse == fine) return values;
    return resample(NodalFunction(coarse, values), fine);
}

// sum_j h [ dG/dn_y(z - x_j) |x'_j| dl_j - G(z - x_j) sl_j ]
cplx layer_sum(double k, const Vec2& z, const BoundarySamples& boundary, const CVector& dl_density,
               const CVector& sl_density, double h) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < boundary.x.size(); ++j) {
        const Vec2 diff = z - boundary.x[j];
        const double r = diff.norm();
        const specfun::RealBessel b = specfun::bessel_01(k * r);
        const cplx h0(b.j0, b.y0), h1(b.j1, b.y1);
        const cplx dl = 0.25 * I_unit * k * h1 * diff.dot(boundary.scaled_normal[j]) / r;
        const cplx sl = 0.25 * I_unit * h0;
        sum += dl * dl_density(j) - sl * sl_density(j);
    }
    return h * sum;
}

} // namespace

LayerDensities densities(const LinearSystem& system, const CVector& solution) {
    if (solution.size() != system.matrix.cols())
        throw PostprocessError("densities: solution length does not match the system");
    const Representation& rep = system.representation;
    return {system.grid, rep.alpha * solution, rep.beta * solution, rep.alpha_int * solution,
            rep.beta_int * solution};
}

LayerDensities zero_densities(const Grid& grid) {
    const CVector z = CVector::Zero(grid.size());
    return {grid, z, z, z, z};
}

FieldValues eval_fields(const LayerDensities& dens, const ProblemParams& params, const Curve& curve,
                        const std::vector<Vec2>& points, Region region, int oversample) {
    if (oversample < 1) throw PostprocessError("eval_fields: oversampling factor must be >= 1");
    const Grid fine(dens.grid.n() * oversample);
    const BoundarySamples boundary = sample_boundary(curve, fine);
    const bool exterior = region == Region::exterior;
    const double k = exterior ? params.k1 : params.k2;

    // u2 = -DL[alpha_int] + SL[beta_int]/nu is the same sum with flipped signs.
    CVector dl, sl;
    if (exterior) {
        dl = refine(dens.alpha, dens.grid, fine);
        sl = refine(dens.beta, dens.grid, fine);
    } else {
        dl = -refine(dens.alpha_int, dens.grid, fine);
        sl = -refine(dens.beta_int, dens.grid, fine) / params.nu;
    }

    FieldValues out{CVector(points.size()), {}};
    for (std::size_t p = 0; p < points.size(); ++p) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const Vec2& x : boundary.x) nearest = std::min(nearest, (points[p] - x).norm());
        if (nearest < 2.0 * boundary.max_spacing) out.near_boundary.push_back(p);
        out.values(p) = layer_sum(k, points[p], boundary, dl, sl, fine.spacing());
    }
    return out;
}

CVector incident_field(const ProblemParams& params, const std::vector<Vec2>& points) {
    CVector out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p)
        out(p) = params.amplitude * std::exp(I_unit * params.k1 * points[p].dot(params.direction));
    return out;
}

cplx far_field_constant(double k1) { return std::exp(I_unit * pi / 4.0) / std::sqrt(8.0 * pi * k1); }

std::vector<double> uniform_angles(int n_dirs) {
    if (n_dirs < 1) throw PostprocessError("far field: need at least one direction");
    std::vector<double> angles(n_dirs);
    for (int d = 0; d < n_dirs; ++d) angles[d] = 2.0 * pi * d / n_dirs;
    return angles;
}

FarFieldPattern far_field(const LayerDensities& dens, const ProblemParams& params, const Curve& curve,
                          int n_dirs) {
    FarFieldPattern out{uniform_angles(n_dirs), CVector(n_dirs)};
    const BoundarySamples boundary = sample_boundary(curve, dens.grid);
    const double k = params.k1;
    const cplx constant = far_field_constant(k);
    for (int d = 0; d < n_dirs; ++d) {
        const Vec2 xhat(std::cos(out.angles[d]), std::sin(out.angles[d]));
        cplx sum = 0.0;
        for (std::size_t j = 0; j < boundary.x.size(); ++j) {
            const cplx phase = std::exp(-I_unit * k * xhat.dot(boundary.x[j]));
            sum += phase * (-I_unit * k * xhat.dot(boundary.scaled_normal[j]) * dens.alpha(j) - dens.beta(j));
        }
        out.values(d) = constant * dens.grid.spacing() * sum;
    }
    return out;
}

double far_field_error(const FarFieldPattern& computed, const FarFieldPattern& reference) {
    if (computed.angles.size() != reference.angles.size())
        throw PostprocessError("far_field_error: direction sets differ");
    for (std::size_t d = 0; d < computed.angles.size(); ++d)
        if (std::abs(computed.angles[d] - reference.angles[d]) > 1e-12)
            throw PostprocessError("far_field_error: direction sets differ");
    return (computed.values - reference.values).cwiseAbs().maxCoeff();
}

void write_pattern_csv(std::ostream& out, const FarFieldPattern& pattern) {
    out << "angle_degrees,re,im,abs\n" << std::setprecision(17);
    for (std::size_t d = 0; d < pattern.angles.size(); ++d) {
        const cplx v = pattern.values(d);
        out << pattern.angles[d] * 180.0 / pi << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << '\n';
    }
}

} // namespace nystrom
