#include "nystrom/specfun.hpp"

#include <cmath>
#include <numbers>

namespace nystrom::specfun {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = std::numbers::egamma;
// Beyond this distance from the imaginary axis the J series loses too many
// digits to cancellation; measured as |z| - Im z.
constexpr double series_cancellation_limit = 7.0;

void check_finite(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("specfun: non-finite argument");
}

void check_radius(cplx z) {
    if (std::abs(z) > max_argument)
        throw DomainError("specfun: |z| exceeds the declared domain");
}

void check_order(int order) {
    if (order != 0 && order != 1)
        throw DomainError("specfun: only orders 0 and 1 are provided");
}

// Hankel pair for Re z >= 0 and |z| beyond the series radius; any sign of Im z.
HankelPair hankel_right_half(cplx z) {
    if (std::abs(z) < detail::asymptotic_radius) return detail::hankel_integral(z);
    return detail::hankel_asymptotic(z);
}

} // namespace

namespace detail {

BesselPair series_j(cplx z) {
    const cplx q = -0.25 * z * z;
    const double radius = std::abs(z);
    cplx t0 = 1.0, t1 = 1.0;
    cplx s0 = 1.0, s1 = 1.0;
    for (int k = 1; k < 2000; ++k) {
        const double dk = k;
        t0 *= q / (dk * dk);
        t1 *= q / (dk * (dk + 1.0));
        s0 += t0;
        s1 += t1;
        if (dk > 0.5 * radius + 1.0 && std::abs(t0) <= 1e-17 * std::abs(s0) &&
            std::abs(t1) <= 1e-17 * std::abs(s1))
            break;
    }
    return {s0, 0.5 * z * s1};
}

BesselPair series_y(cplx z) {
    const BesselPair j = series_j(z);
    const cplx q = -0.25 * z * z;
    const cplx log_half = std::log(0.5 * z);
    const double radius = std::abs(z);

    // Y0 tail: sum_{k>=1} H_k q^k/(k!)^2
    // Y1 tail: sum_{k>=0} (psi(k+1)+psi(k+2)) q^k/(k!(k+1)!)
    cplx t0 = 1.0, t1 = 1.0;
    double harmonic = 0.0;
    cplx tail0 = 0.0;
    cplx tail1 = (-euler_gamma) + (1.0 - euler_gamma);
    for (int k = 1; k < 2000; ++k) {
        const double dk = k;
        harmonic += 1.0 / dk;
        t0 *= q / (dk * dk);
        t1 *= q / (dk * (dk + 1.0));
        const cplx c0 = harmonic * t0;
        const cplx c1 = (2.0 * (harmonic - euler_gamma) + 1.0 / (dk + 1.0)) * t1;
        tail0 += c0;
        tail1 += c1;
        if (dk > 0.5 * radius + 1.0 && std::abs(c0) <= 1e-17 * std::abs(tail0) &&
            std::abs(c1) <= 1e-17 * std::abs(tail1))
            break;
    }
    const cplx y0 = (2.0 / pi) * (log_half + euler_gamma) * j.j0 - (2.0 / pi) * tail0;
    const cplx y1 = (2.0 / pi) * log_half * j.j1 - 2.0 / (pi * z) - (0.5 / pi) * z * tail1;
    return {y0, y1};
}

HankelPair hankel_integral(cplx z) {
    // H_nu(z) = sqrt(2/(pi z)) e^{i(z - nu pi/2 - pi/4)} F_nu(z) with
    //   F_0 = pi^{-1/2} int_R e^{-s^2} (1 + i s^2/(2z))^{-1/2} ds
    //   F_1 = 2 pi^{-1/2} int_R e^{-s^2} s^2 (1 + i s^2/(2z))^{1/2} ds
    // The integrands are analytic in a strip whose half width is set by the
    // branch points s^2 = 2iz; the step is chosen from that width.
    const cplx c = cplx(0.0, 0.5) / z;
    const double branch = std::abs(std::sqrt(cplx(0.0, 2.0) * z).imag());
    const double strip = std::min(0.8 * branch, 3.0);
    const double s_max = 6.8;
    const double h_target = 2.0 * pi * strip / (strip * strip + 44.0);
    const int nodes = static_cast<int>(std::ceil(s_max / h_target));
    const double h = s_max / nodes;

    const double q2 = std::exp(-2.0 * h * h);
    double gauss = 1.0;              // e^{-(jh)^2}
    double ratio = std::exp(-h * h); // e^{-(2j+1)h^2}
    cplx sum0 = 1.0, sum1 = 0.0;
    for (int j = 1; j <= nodes; ++j) {
        gauss *= ratio;
        ratio *= q2;
        const double s2 = (j * h) * (j * h);
        const cplx root = std::sqrt(1.0 + c * s2);
        sum0 += 2.0 * gauss / root;
        sum1 += 2.0 * gauss * s2 * root;
    }
    const double inv_sqrt_pi = std::numbers::inv_sqrtpi;
    const cplx f0 = h * inv_sqrt_pi * sum0;
    const cplx f1 = 2.0 * h * inv_sqrt_pi * sum1;

    const cplx phase = std::exp(cplx(-z.imag(), z.real())) * cplx(std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2);
    const cplx pre = std::sqrt(2.0 / (pi * z)) * phase;
    return {pre * f0, pre * cplx(0.0, -1.0) * f1};
}

HankelPair hankel_asymptotic(cplx z) {
    const cplx step = cplx(0.0, 1.0) / z;
    cplx term0 = 1.0, term1 = 1.0;
    cplx sum0 = 1.0, sum1 = 1.0;
    double prev0 = 1.0, prev1 = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term0 *= step * ((0.0 - odd * odd) / (8.0 * k));
        term1 *= step * ((4.0 - odd * odd) / (8.0 * k));
        const double a0 = std::abs(term0), a1 = std::abs(term1);
        if (a0 > prev0 && a1 > prev1) break;
        sum0 += term0;
        sum1 += term1;
        if (a0 <= 1e-17 * std::abs(sum0) && a1 <= 1e-17 * std::abs(sum1)) break;
        prev0 = a0;
        prev1 = a1;
    }
    const cplx phase = std::exp(cplx(-z.imag(), z.real())) * cplx(std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2);
    const cplx pre = std::sqrt(2.0 / (pi * z)) * phase;
    return {pre * sum0, pre * cplx(0.0, -1.0) * sum1};
}

} // namespace detail

HankelPair hankel1_01(cplx z) {
    check_finite(z);
    if (z == cplx(0.0))
        throw DomainError("specfun: Hankel function is singular at z = 0");
    if (z.real() < 0.0 || z.imag() < 0.0)
        throw DomainError("specfun: Hankel argument must lie in the closed first quadrant");
    check_radius(z);
    if (std::abs(z) <= detail::series_radius) {
        const BesselPair j = detail::series_j(z);
        const BesselPair y = detail::series_y(z);
        const cplx i(0.0, 1.0);
        return {j.j0 + i * y.j0, j.j1 + i * y.j1};
    }
    return hankel_right_half(z);
}

BesselPair bessel_j01(cplx z) {
    check_finite(z);
    if (z.real() < 0.0)
        throw DomainError("specfun: Bessel argument must satisfy Re z >= 0");
    check_radius(z);
    if (std::abs(z.imag()) > max_imaginary)
        throw DomainError("specfun: |Im z| exceeds the declared domain");
    if (z.imag() < 0.0) {
        const BesselPair up = bessel_j01(std::conj(z));
        return {std::conj(up.j0), std::conj(up.j1)};
    }
    const double radius = std::abs(z);
    if (radius <= detail::series_radius || radius - z.imag() <= series_cancellation_limit)
        return detail::series_j(z);
    // J = (H^(1)(z) + H^(2)(z))/2 and H^(2)(z) = conj(H^(1)(conj z)).
    const HankelPair first = hankel_right_half(z);
    const HankelPair mirror = hankel_right_half(std::conj(z));
    return {0.5 * (first.h0 + std::conj(mirror.h0)), 0.5 * (first.h1 + std::conj(mirror.h1))};
}

RealBessel bessel_01(double x) {
    if (!(x > 0.0))
        throw DomainError("specfun: real Bessel argument must be positive");
    if (!std::isfinite(x) || x > max_argument)
        throw DomainError("specfun: |z| exceeds the declared domain");
    if (x <= detail::series_radius) {
        const BesselPair j = detail::series_j(cplx(x));
        const BesselPair y = detail::series_y(cplx(x));
        return {j.j0.real(), j.j1.real(), y.j0.real(), y.j1.real()};
    }
    const HankelPair h = hankel_right_half(cplx(x));
    return {h.h0.real(), h.h1.real(), h.h0.imag(), h.h1.imag()};
}

cplx bessel_j(int order, cplx z) {
    check_order(order);
    const BesselPair j = bessel_j01(z);
    return order == 0 ? j.j0 : j.j1;
}

double bessel_j(int order, double x) {
    check_order(order);
    return bessel_j(order, cplx(x)).real();
}

double bessel_y(int order, double x) {
    check_order(order);
    const RealBessel b = bessel_01(x);
    return order == 0 ? b.y0 : b.y1;
}

cplx hankel1(int order, cplx z) {
    check_order(order);
    const HankelPair h = hankel1_01(z);
    return order == 0 ? h.h0 : h.h1;
}

} // namespace nystrom::specfun
