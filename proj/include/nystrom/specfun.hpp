#pragma once

#include <complex>
#include <stdexcept>

/// @brief Bessel and Hankel functions of orders 0 and 1.
///
/// Declared domain: |z| <= max_argument with Re z >= 0. Hankel functions are
/// additionally restricted to Im z >= 0 (upper right quadrant); J to
/// |Im z| <= max_imaginary so the result stays representable.
namespace nystrom::specfun {

using cplx = std::complex<double>;

inline constexpr double max_argument = 1.0e4;
inline constexpr double max_imaginary = 700.0;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

cplx bessel_j(int order, cplx z);
double bessel_j(int order, double x);
double bessel_y(int order, double x);
cplx hankel1(int order, cplx z);

struct HankelPair {
    cplx h0, h1;
};

struct BesselPair {
    cplx j0, j1;
};

struct RealBessel {
    double j0, j1, y0, y1;
};

/// H0 and H1 of the first kind sharing one evaluation.
HankelPair hankel1_01(cplx z);
/// J0 and J1 sharing one evaluation.
BesselPair bessel_j01(cplx z);
/// J0, J1, Y0, Y1 at a positive real argument.
RealBessel bessel_01(double x);

// Individual evaluation branches, exposed for the overlap tests.
namespace detail {

inline constexpr double series_radius = 3.0;
inline constexpr double asymptotic_radius = 20.0;

BesselPair series_j(cplx z);
/// Y0, Y1 from the ascending series with the logarithmic term, Re z > 0 or z > 0.
BesselPair series_y(cplx z);
/// Trapezoid rule on the steepest-descent integral, Re z >= 0, |z| moderate.
HankelPair hankel_integral(cplx z);
/// Large-argument expansion.
HankelPair hankel_asymptotic(cplx z);

} // namespace detail

} // namespace nystrom::specfun
