#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace nystrom {

using Vec2 = Eigen::Vector2d;

class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One row of a boundary coefficient table:
/// x1(t) += x1_cos cos(mt) + x1_sin sin(mt), x2(t) += x2_cos cos(mt) + x2_sin sin(mt).
struct CoefficientRow {
    int mode = 0;
    double x1_cos = 0.0, x1_sin = 0.0, x2_cos = 0.0, x2_sin = 0.0;
};

/// Position and derivatives up to third order at one parameter value.
struct CurvePoint {
    Vec2 x, d1, d2, d3;
};

struct Frame {
    Vec2 point, tangent, normal;
    double jacobian;
};

/// Closed analytic curve given by a finite trigonometric series, oriented
/// counterclockwise. Derivatives are exact.
class Curve {
public:
    static Curve kite();
    static Curve five_petal();
    static Curve circle(double radius);
    /// Validates regularity and simplicity; clockwise tables are reparametrized by t -> -t.
    static Curve from_coefficients(std::vector<CoefficientRow> rows, std::string label = "custom");
    /// Whitespace separated rows "m x1_cos x1_sin x2_cos x2_sin"; '#' starts a comment.
    static Curve from_file(const std::string& path);

    Vec2 eval(double t) const;
    Vec2 deriv1(double t) const;
    Vec2 deriv2(double t) const;
    Vec2 deriv3(double t) const;
    CurvePoint point(double t) const;
    Frame frame(double t) const;

    const std::string& label() const { return label_; }
    const std::vector<CoefficientRow>& coefficients() const { return rows_; }
    /// Enclosed area, positive for counterclockwise orientation.
    double signed_area() const;
    /// Largest distance between two boundary points (sampled).
    double diameter() const;

private:
    Curve(std::vector<CoefficientRow> rows, std::string label);

    std::vector<CoefficientRow> rows_;
    std::string label_;
};

/// "kite", "petal" (or "five_petal"), "circle", "circle:R", "file:PATH".
Curve make_curve(const std::string& spec);

} // namespace nystrom
