#pragma once

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <stdexcept>

namespace nystrom {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;

/// Equispaced nodes t_j = j*pi/n, j = 0..2n-1.
class Grid {
public:
    explicit Grid(int n);

    int n() const { return n_; }
    int size() const { return 2 * n_; }
    double node(int j) const;
    double spacing() const;
    /// cos(k*pi/n) for any integer k, exact table lookup.
    double cos_table(long k) const;
    /// e^{i k pi/n}
    cplx exp_table(long k) const;

    bool operator==(const Grid& other) const { return n_ == other.n_; }

private:
    int n_;
    RVector cos_, sin_;
};

/// Nodal values of a trigonometric polynomial of degree n (cosine-only top mode).
struct NodalFunction {
    NodalFunction(Grid g, CVector v);
    static NodalFunction sample(const Grid& g, const std::function<cplx(double)>& f);

    Grid grid;
    CVector values;
};

/// Coefficients for modes -(n-1)..n with 1/(2n) normalization.
class FourierCoefficients {
public:
    FourierCoefficients(int n, CVector coeffs);

    int n() const { return n_; }
    cplx operator()(int mode) const;
    const CVector& raw() const { return c_; }

private:
    int n_;
    CVector c_;
};

FourierCoefficients fourier_coeffs(const NodalFunction& f);
NodalFunction inverse_fourier(const Grid& grid, const FourierCoefficients& c);
/// Value of the interpolating trigonometric polynomial at arbitrary t.
cplx interpolate(const NodalFunction& f, double t);
/// Nodal values of the interpolant on a finer grid (multiple of n).
CVector resample(const NodalFunction& f, const Grid& fine);

/// Fourier coefficients of sin^2(t/2) ln(4 sin^2(t/2)) with 1/(2 pi) normalization.
double sin2log_coefficient(int m);

/// Product quadrature for ln(4 sin^2((t-tau)/2)) psi(tau).
RVector weights_R(const Grid& grid, double t);
/// Product quadrature for sin^2((t-tau)/2) ln(4 sin^2((t-tau)/2)) psi(tau).
RVector weights_Q(const Grid& grid, double t);
/// Collocation weights of T0, the operator with multipliers -|m|/2.
RVector weights_T(const Grid& grid, double t);

/// Generator W(t_d), d = 0..2n-1, of the circulant matrix whose spectral
/// multiplier at mode m is symbol(|m|). Mode n acts on cos(nt).
CVector circulant_generator(const Grid& grid, const std::function<cplx(int)>& symbol);
/// entries(i, j) = generator((i - j) mod 2n)
CMatrix circulant_matrix(const CVector& generator);

/// Truncated periodic Sobolev norm over the resolved modes.
double sobolev_norm(const NodalFunction& f, double p);

} // namespace nystrom
