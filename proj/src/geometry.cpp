#include "nystrom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace nystrom {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    const double d1 = cross(p2 - p1, q1 - p1);
    const double d2 = cross(p2 - p1, q2 - p1);
    const double d3 = cross(q2 - q1, p1 - q1);
    const double d4 = cross(q2 - q1, p2 - q1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

int max_mode(const std::vector<CoefficientRow>& rows) {
    int m = 0;
    for (const auto& r : rows) m = std::max(m, r.mode);
    return m;
}

} // namespace

Curve::Curve(std::vector<CoefficientRow> rows, std::string label)
    : rows_(std::move(rows)), label_(std::move(label)) {}

Curve Curve::kite() {
    return Curve({{0, -0.65, 0.0, 0.0, 0.0}, {1, 1.0, 0.0, 0.0, 1.5}, {2, 0.65, 0.0, 0.0, 0.0}}, "kite");
}

Curve Curve::five_petal() {
    // polar r(t) = 1 + 0.3 cos 5t expanded into Cartesian harmonics
    return Curve({{1, 1.0, 0.0, 0.0, 1.0}, {4, 0.15, 0.0, 0.0, -0.15}, {6, 0.15, 0.0, 0.0, 0.15}},
                 "five_petal");
}

Curve Curve::circle(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw GeometryError("circle radius must be positive");
    return Curve({{1, radius, 0.0, 0.0, radius}}, "circle");
}

Curve Curve::from_coefficients(std::vector<CoefficientRow> rows, std::string label) {
    if (rows.empty()) throw GeometryError("empty coefficient table");
    std::map<int, CoefficientRow> merged;
    for (const auto& r : rows) {
        if (r.mode < 0) throw GeometryError("negative mode in coefficient table");
        if (!std::isfinite(r.x1_cos) || !std::isfinite(r.x1_sin) || !std::isfinite(r.x2_cos) ||
            !std::isfinite(r.x2_sin))
            throw GeometryError("non-finite coefficient");
        auto& m = merged[r.mode];
        m.mode = r.mode;
        m.x1_cos += r.x1_cos;
        m.x1_sin += r.x1_sin;
        m.x2_cos += r.x2_cos;
        m.x2_sin += r.x2_sin;
    }
    std::vector<CoefficientRow> table;
    for (auto& [mode, r] : merged) {
        if (mode == 0) r.x1_sin = r.x2_sin = 0.0;
        table.push_back(r);
    }
    Curve curve(table, std::move(label));

    const int top = max_mode(table);
    if (top == 0) throw GeometryError("degenerate coefficient table: constant curve");
    const int samples = std::max(1024, 16 * top);

    double max_speed = 0.0, min_speed = INFINITY;
    std::vector<Vec2> poly(samples);
    for (int j = 0; j < samples; ++j) {
        const double t = two_pi * j / samples;
        poly[j] = curve.eval(t);
        const double speed = curve.deriv1(t).norm();
        max_speed = std::max(max_speed, speed);
        min_speed = std::min(min_speed, speed);
    }
    if (!(max_speed > 0.0) || min_speed <= 1e-10 * max_speed)
        throw GeometryError("degenerate coefficient table: parametrization is not regular");

    if (curve.signed_area() < 0.0) {
        for (auto& r : curve.rows_) {
            r.x1_sin = -r.x1_sin;
            r.x2_sin = -r.x2_sin;
        }
        std::reverse(poly.begin() + 1, poly.end());
    }

    for (int a = 0; a < samples; ++a) {
        const Vec2& p1 = poly[a];
        const Vec2& p2 = poly[(a + 1) % samples];
        for (int b = a + 2; b < samples; ++b) {
            if (a == 0 && b == samples - 1) continue;
            if (segments_cross(p1, p2, poly[b], poly[(b + 1) % samples]))
                throw GeometryError("coefficient table describes a self-intersecting curve");
        }
    }
    return curve;
}

Curve Curve::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GeometryError("cannot open curve file: " + path);
    std::vector<CoefficientRow> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        CoefficientRow row;
        if (!(fields >> row.mode)) continue;
        if (!(fields >> row.x1_cos >> row.x1_sin >> row.x2_cos >> row.x2_sin))
            throw GeometryError("malformed row " + std::to_string(line_no) + " in " + path);
        rows.push_back(row);
    }
    return from_coefficients(std::move(rows), "file:" + path);
}

CurvePoint Curve::point(double t) const {
    CurvePoint p{Vec2::Zero(), Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
    for (const auto& r : rows_) {
        const double m = r.mode;
        const double c = std::cos(m * t), s = std::sin(m * t);
        const Vec2 even(r.x1_cos * c + r.x1_sin * s, r.x2_cos * c + r.x2_sin * s);
        const Vec2 odd(-r.x1_cos * s + r.x1_sin * c, -r.x2_cos * s + r.x2_sin * c);
        p.x += even;
        p.d1 += m * odd;
        p.d2 -= (m * m) * even;
        p.d3 -= (m * m * m) * odd;
    }
    return p;
}

Vec2 Curve::eval(double t) const { return point(t).x; }
Vec2 Curve::deriv1(double t) const { return point(t).d1; }
Vec2 Curve::deriv2(double t) const { return point(t).d2; }
Vec2 Curve::deriv3(double t) const { return point(t).d3; }

Frame Curve::frame(double t) const {
    const CurvePoint p = point(t);
    const double speed = p.d1.norm();
    return {p.x, p.d1 / speed, Vec2(p.d1.y(), -p.d1.x()) / speed, speed};
}

double Curve::signed_area() const {
    // trapezoid rule is exact for the trigonometric integrand at this resolution
    const int samples = 4 * max_mode(rows_) + 8;
    double sum = 0.0;
    for (int j = 0; j < samples; ++j) {
        const CurvePoint p = point(two_pi * j / samples);
        sum += cross(p.x, p.d1);
    }
    return 0.5 * sum * two_pi / samples;
}

double Curve::diameter() const {
    const int samples = 256;
    std::vector<Vec2> pts(samples);
    for (int j = 0; j < samples; ++j) pts[j] = eval(two_pi * j / samples);
    double d = 0.0;
    for (int a = 0; a < samples; ++a)
        for (int b = a + 1; b < samples; ++b) d = std::max(d, (pts[a] - pts[b]).norm());
    return d;
}

Curve make_curve(const std::string& spec) {
    if (spec == "kite") return Curve::kite();
    if (spec == "petal" || spec == "five_petal") return Curve::five_petal();
    if (spec == "circle") return Curve::circle(1.0);
    if (spec.rfind("circle:", 0) == 0) {
        std::size_t used = 0;
        const std::string value = spec.substr(7);
        double radius = 0.0;
        try {
            radius = std::stod(value, &used);
        } catch (const std::exception&) {
            throw GeometryError("bad circle radius: " + value);
        }
        if (used != value.size()) throw GeometryError("bad circle radius: " + value);
        return Curve::circle(radius);
    }
    if (spec.rfind("file:", 0) == 0) return Curve::from_file(spec.substr(5));
    throw GeometryError("unknown geometry: " + spec);
}

} // namespace nystrom
