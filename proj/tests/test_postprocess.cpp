#include <doctest.h>

#include "nystrom/formulations.hpp"
#include "nystrom/linsolve.hpp"
#include "nystrom/postprocess.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

using namespace nystrom;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
constexpr Formulation all_formulations[] = {Formulation::CFIESK, Formulation::SCFIE, Formulation::GCSIE,
                                            Formulation::PSGCSIE};

LayerDensities solved(Formulation f, OperatorCache& cache) {
    const LinearSystem sys = assemble(f, cache);
    return densities(sys, direct_solve(sys.matrix, sys.rhs));
}

// Neville extrapolation of samples (x_i, y_i) to x = 0.
cplx extrapolate_to_zero(const std::vector<double>& x, std::vector<cplx> y) {
    const std::size_t m = x.size();
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = 0; i + level < m; ++i)
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
    return y[0];
}

// Value and first derivative at 0 of the interpolating polynomial.
std::pair<cplx, cplx> value_and_slope_at_zero(const std::vector<double>& x, const std::vector<cplx>& y) {
    const std::size_t m = x.size();
    // Newton divided differences
    std::vector<cplx> c = y;
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = m - 1; i >= level; --i) c[i] = (c[i] - c[i - 1]) / (x[i] - x[i - level]);
    cplx value = c[m - 1], slope = 0.0;
    for (std::size_t i = m - 1; i-- > 0;) {
        slope = slope * (0.0 - x[i]) + value;
        value = value * (0.0 - x[i]) + c[i];
    }
    return {value, slope};
}

bool inside_polygon(const Curve& curve, const Vec2& z) {
    const int samples = 2000;
    double winding = 0.0;
    for (int j = 0; j < samples; ++j) {
        const Vec2 a = curve.eval(2 * pi * j / samples) - z, b = curve.eval(2 * pi * (j + 1) / samples) - z;
        winding += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    }
    return std::abs(winding) > pi;
}

} // namespace

TEST_CASE("zero densities give zero fields and patterns") {
    const Curve kite = Curve::kite();
    const ProblemParams p = make_params(8, 1, 4, Polarization::H);
    const LayerDensities zero = zero_densities(Grid(32));
    const FieldValues out = eval_fields(zero, p, kite, {Vec2(3, 3), Vec2(-4, 0)}, Region::exterior);
    CHECK(out.values.cwiseAbs().maxCoeff() == 0.0);
    const FieldValues in = eval_fields(zero, p, kite, {Vec2(0, 0)}, Region::interior);
    CHECK(in.values.cwiseAbs().maxCoeff() == 0.0);
    const FarFieldPattern ff = far_field(zero, p, kite);
    CHECK(ff.values.size() == 360);
    CHECK(ff.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("far-field error metric") {
    FarFieldPattern a{uniform_angles(36), CVector::Random(36)};
    CHECK(far_field_error(a, a) == 0.0);
    FarFieldPattern shifted = a;
    const cplx c(0.3, -0.4);
    shifted.values.array() += c;
    CHECK(far_field_error(shifted, a) == doctest::Approx(std::abs(c)).epsilon(1e-14));
    const FarFieldPattern other{uniform_angles(35), CVector::Zero(35)};
    CHECK_THROWS_AS(far_field_error(a, other), PostprocessError);
    CHECK_THROWS_AS(uniform_angles(0), PostprocessError);
}

TEST_CASE("uniform directions and constant") {
    const auto angles = uniform_angles(360);
    CHECK(angles.front() == 0.0);
    CHECK(angles[90] == doctest::Approx(pi / 2));
    CHECK(angles.back() < 2 * pi);
    CHECK(std::abs(far_field_constant(2.0) - std::exp(I * pi / 4.0) / std::sqrt(16 * pi)) < 1e-16);
}

TEST_CASE("radial extrapolation reproduces the far-field pattern") {
    const Curve kite = Curve::kite();
    const ProblemParams p = make_params(8, 1, 4, Polarization::H);
    OperatorCache cache(p, kite, Grid(128));
    const LayerDensities dens = solved(Formulation::PSGCSIE, cache);
    const int n_dirs = 24;
    const FarFieldPattern ff = far_field(dens, p, kite, n_dirs);
    // sqrt(R) e^{-ikR} u(R xhat) = u_inf + c1/R + c2/R^2 + ..., extrapolated in 1/R;
    // R stays below the Bessel domain limit k R <= 1e4.
    const std::vector<double> radii{1200, 600, 300, 150, 75};
    double worst = 0.0;
    for (int d = 0; d < n_dirs; ++d) {
        const Vec2 xhat(std::cos(ff.angles[d]), std::sin(ff.angles[d]));
        std::vector<Vec2> points;
        for (double r : radii) points.push_back(r * xhat);
        const CVector u = eval_fields(dens, p, kite, points, Region::exterior).values;
        std::vector<double> inv;
        std::vector<cplx> scaled;
        for (std::size_t i = 0; i < radii.size(); ++i) {
            inv.push_back(1.0 / radii[i]);
            scaled.push_back(std::sqrt(radii[i]) * std::exp(-I * p.k1 * radii[i]) * u(i));
        }
        worst = std::max(worst, std::abs(extrapolate_to_zero(inv, scaled) - ff.values(d)));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("reconstructed fields satisfy the transmission conditions") {
    const Curve kite = Curve::kite();
    const ProblemParams p = make_params(8, 1, 4, Polarization::H);
    OperatorCache cache(p, kite, Grid(128));
    // the continued fields have singularities close to the boundary, so probes stay within ~0.04
    const int probes = 12;
    const double step = 0.0035;
    for (Formulation f : all_formulations) {
        CAPTURE(to_string(f));
        const LayerDensities dens = solved(f, cache);
        double dirichlet = 0.0, neumann = 0.0;
        for (double t : {0.3, 1.4, 2.5, 3.3, 4.4, 5.9}) {
            const Frame fr = kite.frame(t);
            std::vector<double> offsets;
            std::vector<Vec2> outside, inside;
            for (int i = 1; i <= probes; ++i) {
                offsets.push_back(i * step);
                outside.push_back(fr.point + i * step * fr.normal);
                inside.push_back(fr.point - i * step * fr.normal);
            }
            const CVector u1 = eval_fields(dens, p, kite, outside, Region::exterior, 64).values;
            const CVector u2 = eval_fields(dens, p, kite, inside, Region::interior, 64).values;
            const CVector inc = incident_field(p, outside);
            std::vector<cplx> total(probes), interior(probes);
            for (int i = 0; i < probes; ++i) {
                total[i] = u1(i) + inc(i);
                interior[i] = u2(i);
            }
            const auto [outer_value, outer_slope] = value_and_slope_at_zero(offsets, total);
            const auto [inner_value, inner_slope] = value_and_slope_at_zero(offsets, interior);
            // interior samples run inward: d/dn = -d/ds
            dirichlet = std::max(dirichlet, std::abs(outer_value - inner_value));
            neumann = std::max(neumann, std::abs(outer_slope + p.nu * inner_slope) / p.k1);
        }
        CHECK(dirichlet <= 1e-6);
        CHECK(neumann <= 1e-6);
    }
}

TEST_CASE("fields satisfy the Helmholtz equation") {
    const Curve kite = Curve::kite();
    const ProblemParams p = make_params(8, 1, 4, Polarization::H);
    OperatorCache cache(p, kite, Grid(128));
    const LayerDensities dens = solved(Formulation::SCFIE, cache);
    auto residual = [&](const Vec2& z, Region region, double h) {
        const double k = region == Region::exterior ? p.k1 : p.k2;
        const std::vector<Vec2> stencil{z, z + Vec2(h, 0), z - Vec2(h, 0), z + Vec2(0, h), z - Vec2(0, h)};
        const CVector u = eval_fields(dens, p, kite, stencil, region).values;
        const cplx laplacian = (u(1) + u(2) + u(3) + u(4) - 4.0 * u(0)) / (h * h);
        return std::abs(laplacian + k * k * u(0)) / (k * k * std::abs(u(0)));
    };
    const std::vector<Vec2> interior{Vec2(0.0, 0.0), Vec2(0.3, 0.4), Vec2(-0.3, -0.6)};
    const std::vector<Vec2> exterior{Vec2(2.0, 2.0), Vec2(-3.0, 0.5), Vec2(0.5, -2.5)};
    for (const Vec2& z : interior) REQUIRE(inside_polygon(kite, z));
    for (const Vec2& z : exterior) REQUIRE_FALSE(inside_polygon(kite, z));
    for (auto [points, region] : {std::pair{interior, Region::interior}, std::pair{exterior, Region::exterior}}) {
        for (const Vec2& z : points) {
            const double coarse = residual(z, region, 0.02), fine = residual(z, region, 0.01);
            CHECK(fine < 0.05);
            CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.1));
        }
    }
}

TEST_CASE("far field is stable under refinement and finite") {
    const Curve petal = Curve::five_petal();
    const ProblemParams p = make_params(8, 1, 4, Polarization::H);
    OperatorCache coarse(p, petal, Grid(128)), fine(p, petal, Grid(256));
    const FarFieldPattern a = far_field(solved(Formulation::CFIESK, coarse), p, petal);
    const FarFieldPattern b = far_field(solved(Formulation::CFIESK, fine), p, petal);
    CHECK(a.values.allFinite());
    CHECK(a.values.cwiseAbs().maxCoeff() < 10.0);
    CHECK(far_field_error(a, b) <= 1e-8);
}

TEST_CASE("points near the boundary are flagged") {
    const Curve kite = Curve::kite();
    const ProblemParams p = make_params(4, 1, 4, Polarization::H);
    const LayerDensities zero = zero_densities(Grid(32));
    const Frame fr = kite.frame(1.0);
    const FieldValues out =
        eval_fields(zero, p, kite, {Vec2(5, 5), fr.point + 1e-3 * fr.normal}, Region::exterior);
    REQUIRE(out.near_boundary.size() == 1);
    CHECK(out.near_boundary[0] == 1);
    CHECK_THROWS_AS(eval_fields(zero, p, kite, {Vec2(5, 5)}, Region::exterior, 0), PostprocessError);
}

TEST_CASE("pattern CSV export") {
    FarFieldPattern pattern{uniform_angles(4), CVector::Zero(4)};
    pattern.values(1) = cplx(3, 4);
    std::ostringstream out;
    write_pattern_csv(out, pattern);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "angle_degrees,re,im,abs");
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "90,3,4,5");
}

TEST_CASE("density length mismatch") {
    const LinearSystem sys = assemble_CFIESK(make_params(2, 1, 4, Polarization::H), Curve::kite(), Grid(8));
    CHECK_THROWS_AS(densities(sys, CVector::Zero(3)), PostprocessError);
}
