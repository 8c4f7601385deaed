#pragma once

#include "nystrom/formulations.hpp"

#include <iosfwd>
#include <vector>

namespace nystrom {

class PostprocessError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Nodal layer densities of the field representation (see Representation).
struct LayerDensities {
    Grid grid;
    CVector alpha, beta, alpha_int, beta_int;
};

LayerDensities densities(const LinearSystem& system, const CVector& solution);
LayerDensities zero_densities(const Grid& grid);

enum class Region { interior, exterior };

struct FieldValues {
    CVector values;
    /// Indices of points closer to the boundary than two (refined) node spacings.
    std::vector<std::size_t> near_boundary;
};

/// Scattered field u1 (exterior) or transmitted field u2 (interior) by the
/// trapezoid rule. oversample > 1 interpolates the densities onto a finer grid
/// first, which moves the accuracy boundary closer to the curve.
FieldValues eval_fields(const LayerDensities& dens, const ProblemParams& params, const Curve& curve,
                        const std::vector<Vec2>& points, Region region, int oversample = 1);

/// Plane wave u_inc at the given points.
CVector incident_field(const ProblemParams& params, const std::vector<Vec2>& points);

struct FarFieldPattern {
    /// Observation angles in [0, 2 pi), uniform.
    std::vector<double> angles;
    CVector values;
};

/// u1(r xhat) ~ e^{i k1 r} / sqrt(r) u_inf(xhat); constant e^{i pi/4}/sqrt(8 pi k1).
FarFieldPattern far_field(const LayerDensities& dens, const ProblemParams& params, const Curve& curve,
                          int n_dirs = 360);
cplx far_field_constant(double k1);
std::vector<double> uniform_angles(int n_dirs);

/// max over directions of |computed - reference|
double far_field_error(const FarFieldPattern& computed, const FarFieldPattern& reference);

/// Rows: angle_degrees,re,im,abs
void write_pattern_csv(std::ostream& out, const FarFieldPattern& pattern);

} // namespace nystrom
