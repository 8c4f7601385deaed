#include "nystrom/kernels.hpp"

#include "nystrom/specfun.hpp"

#include <cmath>
#include <numbers>

namespace nystrom {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = std::numbers::egamma;
const cplx imag_unit(0.0, 1.0);

double cross(const Vec2& u, const Vec2& v) { return u[0] * v[1] - u[1] * v[0]; }

// Reduce s to (-pi, pi].
double wrap(double s) {
    s = std::remainder(s, 2.0 * pi);
    return s <= -pi ? s + 2.0 * pi : s;
}

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// 1 - J0(z) without cancellation for small |z|.
cplx one_minus_j0(cplx z, cplx j0) {
    if (std::abs(z) > 1.0) return 1.0 - j0;
    const cplx q = -0.25 * z * z;
    cplx term = 1.0, sum = 0.0;
    for (int k = 1; k < 40; ++k) {
        term *= q / double(k * k);
        sum -= term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

} // namespace

double chi(double t) {
    const double a = std::abs(t);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    const double s = 2.0 * a - 1.0;
    const double left = bump(1.0 - s), right = bump(s);
    return left / (left + right);
}

double log_weight(double s) { return 2.0 * std::log(2.0 * std::abs(std::sin(0.5 * s))); }

double sin2log_weight(double s) {
    const double h = std::sin(0.5 * s);
    return h == 0.0 ? 0.0 : h * h * log_weight(s);
}

KernelSplitter::KernelSplitter(const Curve& curve, cplx wavenumber, CutoffFn cutoff)
    : curve_(curve), k_(wavenumber), complex_(wavenumber.imag() != 0.0), cutoff_(std::move(cutoff)) {
    if (!(k_.real() > 0.0) || k_.imag() < 0.0 || !std::isfinite(k_.real()) || !std::isfinite(k_.imag()))
        throw KernelError("kernels: wavenumber must have Re > 0 and Im >= 0");
    if (complex_ && !cutoff_) throw KernelError("kernels: complex wavenumber needs a cutoff");
}

KernelSplitter::Radial KernelSplitter::radial(double r) const {
    Radial rad{};
    if (!complex_) {
        const double k = k_.real();
        const specfun::RealBessel b = specfun::bessel_01(k * r);
        rad.h0 = cplx(b.j0, b.y0);
        rad.h1 = cplx(b.j1, b.y1);
        rad.j0 = b.j0;
        rad.j1 = b.j1;
        rad.one_minus_j0 = one_minus_j0(k * r, b.j0);
        rad.cutoff = 1.0;
        return rad;
    }
    const cplx z = k_ * r;
    const specfun::HankelPair h = specfun::hankel1_01(z);
    rad.h0 = h.h0;
    rad.h1 = h.h1;
    const double r2 = r * r;
    rad.cutoff = cutoff_(std::abs(k_) * r2 * r2);
    if (rad.cutoff > 0.0) {
        const specfun::BesselPair j = specfun::bessel_j01(z);
        rad.j0 = j.j0;
        rad.j1 = j.j1;
        rad.one_minus_j0 = one_minus_j0(z, j.j0);
    }
    return rad;
}

KernelSample KernelSplitter::assemble(const CurvePoint& a, const CurvePoint& b, double s, const Radial& rad,
                                      double r) const {
    const cplx k = k_;
    const Vec2 d = a.x - b.x;
    const double log_w = log_weight(s);
    const double half = std::sin(0.5 * s);
    const double sin2 = half * half;
    const double chi_r = rad.cutoff;
    KernelSample out;

    // single layer
    const cplx m_full = 0.25 * imag_unit * rad.h0;
    const cplx m_log = -rad.j0 / (4.0 * pi);
    out.sl.part1 = chi_r * m_log;
    out.sl.part2 = m_full - out.sl.part1 * log_w;
    if (!complex_) {
        out.sl_sin2.part1 = rad.one_minus_j0 / (4.0 * pi * sin2);
        out.sl_sin2.part2 = out.sl.part2;
    }

    // double layer and its adjoint
    const double num_dl = cross(d, b.d1);
    const double num_dlt = cross(d, a.d1);
    const cplx h_dl = 0.25 * imag_unit * k * rad.h1 * num_dl / r;
    const cplx l_dl = -k / (4.0 * pi) * rad.j1 * num_dl / r;
    out.dl.part1 = chi_r * l_dl;
    out.dl.part2 = h_dl - out.dl.part1 * log_w;
    const cplx h_dlt = -0.25 * imag_unit * k * rad.h1 * num_dlt / r;
    const cplx l_dlt = k / (4.0 * pi) * rad.j1 * num_dlt / r;
    if (complex_) {
        out.dlt.part1 = chi_r * l_dlt;
        out.dlt.part2 = h_dlt - out.dlt.part1 * log_w;
    } else {
        out.dlt.part1 = l_dlt / sin2;
        out.dlt.part2 = h_dlt - l_dlt * log_w;
    }

    // hypersingular remainder
    const double r2 = r * r;
    const double tangents = a.d1.dot(b.d1);
    const double proj = d.dot(a.d1) * d.dot(b.d1);
    const double angular0 = tangents - proj / r2;
    const double angular1 = 0.5 * proj / r2 - 0.25 * tangents;
    const cplx d_full = 0.25 * imag_unit * k * k * rad.h0 * angular0 + imag_unit * k / r * rad.h1 * angular1 -
                        1.0 / (8.0 * pi * sin2);
    const cplx d_log = -k * k / (4.0 * pi) * rad.j0 * angular0 - k / (pi * r) * rad.j1 * angular1;
    out.hyp.part1 = chi_r * d_log;
    out.hyp.part2 = d_full - out.hyp.part1 * log_w;
    return out;
}

KernelSample KernelSplitter::off_diagonal(const CurvePoint& at_t, const CurvePoint& at_tau, double s) const {
    const double r = (at_t.x - at_tau.x).norm();
    return assemble(at_t, at_tau, s, radial(r), r);
}

void KernelSplitter::off_diagonal_pair(const CurvePoint& at_t, const CurvePoint& at_tau, double s,
                                       KernelSample& forward, KernelSample& backward) const {
    const double r = (at_t.x - at_tau.x).norm();
    const Radial rad = radial(r);
    forward = assemble(at_t, at_tau, s, rad, r);
    backward = assemble(at_tau, at_t, -s, rad, r);
}

KernelSample KernelSplitter::diagonal(const CurvePoint& p) const {
    const cplx k = k_;
    const Vec2& a = p.d1;
    const Vec2& b = p.d2;
    const Vec2& c = p.d3;
    const double alpha = a.squaredNorm();
    const double speed = std::sqrt(alpha);
    const double curl = cross(a, b);
    const cplx log_term = std::log(0.5 * k * speed) + euler_gamma;
    KernelSample out;

    out.sl.part1 = -1.0 / (4.0 * pi);
    out.sl.part2 = 0.25 * imag_unit - log_term / (2.0 * pi);
    if (!complex_) {
        out.sl_sin2.part1 = k * k * alpha / (4.0 * pi);
        out.sl_sin2.part2 = out.sl.part2;
    }

    out.dl.part1 = 0.0;
    out.dl.part2 = -curl / (4.0 * pi * alpha);
    out.dlt.part1 = complex_ ? cplx(0.0) : k * k * curl / (4.0 * pi);
    out.dlt.part2 = -curl / (4.0 * pi * alpha);

    out.hyp.part1 = -k * k * alpha / (8.0 * pi);
    out.hyp.part2 = 0.125 * imag_unit * k * k * alpha - k * k * alpha / (4.0 * pi) * (log_term - 0.5) -
                    1.0 / (24.0 * pi) + a.dot(c) / (12.0 * pi * alpha) + b.squaredNorm() / (8.0 * pi * alpha) -
                    a.dot(b) * a.dot(b) / (4.0 * pi * alpha * alpha);
    return out;
}

KernelSample KernelSplitter::sample(double t, double tau) const {
    const double s = wrap(t - tau);
    if (s == 0.0) return diagonal(curve_.point(t));
    return off_diagonal(curve_.point(t), curve_.point(tau), s);
}

SplitKernelPair::SplitKernelPair(KernelKind kind, SingularWeight weight, KernelSplitter splitter, bool refined_sl)
    : kind_(kind), weight_(weight), splitter_(std::move(splitter)), refined_sl_(refined_sl) {}

KernelParts SplitKernelPair::select(const KernelSample& s) const {
    switch (kind_) {
    case KernelKind::SL: return refined_sl_ ? s.sl_sin2 : s.sl;
    case KernelKind::DL: return s.dl;
    case KernelKind::DLT: return s.dlt;
    case KernelKind::HYP: return s.hyp;
    }
    throw KernelError("kernels: unsupported kind");
}

KernelParts SplitKernelPair::parts(double t, double tau) const { return select(splitter_.sample(t, tau)); }
cplx SplitKernelPair::part1(double t, double tau) const { return parts(t, tau).part1; }
cplx SplitKernelPair::part2(double t, double tau) const { return parts(t, tau).part2; }

cplx SplitKernelPair::reconstruct(double t, double tau) const {
    const double s = wrap(t - tau);
    if (s == 0.0) throw KernelError("kernels: reconstruction is undefined on the diagonal");
    const KernelParts p = parts(t, tau);
    switch (weight_) {
    case SingularWeight::log: return p.part1 * log_weight(s) + p.part2;
    case SingularWeight::sin2log: {
        const cplx value = p.part1 * sin2log_weight(s) + p.part2;
        return refined_sl_ ? value - log_weight(s) / (4.0 * pi) : value;
    }
    case SingularWeight::none: return p.part2;
    }
    return p.part2;
}

SplitKernelPair split_real(KernelKind kind, double k, const Curve& curve) {
    if (!(k > 0.0) || !std::isfinite(k)) throw KernelError("kernels: real wavenumber must be positive");
    const SingularWeight w = kind == KernelKind::DLT ? SingularWeight::sin2log : SingularWeight::log;
    return SplitKernelPair(kind, w, KernelSplitter(curve, cplx(k)));
}

SplitKernelPair split_complex(KernelKind kind, cplx kappa, const Curve& curve, CutoffFn cutoff) {
    if (!(kappa.imag() > 0.0)) throw KernelError("kernels: complex split needs Im kappa > 0");
    if (kind == KernelKind::DL) throw KernelError("kernels: no complex split for the double layer");
    return SplitKernelPair(kind, SingularWeight::log, KernelSplitter(curve, kappa, std::move(cutoff)));
}

SplitKernelPair split_sl_refined(double k, const Curve& curve) {
    if (!(k > 0.0) || !std::isfinite(k)) throw KernelError("kernels: real wavenumber must be positive");
    return SplitKernelPair(KernelKind::SL, SingularWeight::sin2log, KernelSplitter(curve, cplx(k)), true);
}

} // namespace nystrom
