#include "nystrom/trigtools.hpp"

#include <cmath>
#include <numbers>

namespace nystrom {

namespace {

constexpr double pi = std::numbers::pi;

long wrap(long k, long period) {
    k %= period;
    return k < 0 ? k + period : k;
}

// W(u) = (1/2n) [mu(0) + 2 sum_{m=1}^{n-1} mu(m) cos(mu) + mu(n) cos(nu)] at arbitrary u
template <class Symbol>
double even_series(int n, double u, Symbol symbol) {
    double sum = symbol(0);
    for (int m = 1; m < n; ++m) sum += 2.0 * symbol(m) * std::cos(m * u);
    sum += symbol(n) * std::cos(n * u);
    return sum / (2.0 * n);
}

template <class Symbol>
RVector weights_from_symbol(const Grid& grid, double t, Symbol symbol) {
    RVector w(grid.size());
    for (int j = 0; j < grid.size(); ++j) w[j] = even_series(grid.n(), t - grid.node(j), symbol);
    return w;
}

double log_symbol(int m) { return m == 0 ? 0.0 : -2.0 * pi / m; }
double sin2log_symbol(int m) { return 2.0 * pi * sin2log_coefficient(m); }
double t0_symbol(int m) { return -0.5 * m; }

} // namespace

Grid::Grid(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("Grid: n must be positive");
    cos_.resize(2 * n);
    sin_.resize(2 * n);
    for (int k = 0; k < 2 * n; ++k) {
        cos_[k] = std::cos(k * pi / n);
        sin_[k] = std::sin(k * pi / n);
    }
    // exact values at the symmetry points
    cos_[0] = 1.0;
    cos_[n] = -1.0;
    sin_[0] = sin_[n] = 0.0;
    if (n % 2 == 0) {
        cos_[n / 2] = cos_[3 * n / 2] = 0.0;
        sin_[n / 2] = 1.0;
        sin_[3 * n / 2] = -1.0;
    }
}

double Grid::node(int j) const { return j * pi / n_; }
double Grid::spacing() const { return pi / n_; }
double Grid::cos_table(long k) const { return cos_[wrap(k, 2L * n_)]; }

cplx Grid::exp_table(long k) const {
    const long r = wrap(k, 2L * n_);
    return {cos_[r], sin_[r]};
}

NodalFunction::NodalFunction(Grid g, CVector v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) throw std::invalid_argument("NodalFunction: length must equal 2n");
}

NodalFunction NodalFunction::sample(const Grid& g, const std::function<cplx(double)>& f) {
    CVector v(g.size());
    for (int j = 0; j < g.size(); ++j) v[j] = f(g.node(j));
    return NodalFunction(g, v);
}

FourierCoefficients::FourierCoefficients(int n, CVector coeffs) : n_(n), c_(std::move(coeffs)) {
    if (c_.size() != 2 * n) throw std::invalid_argument("FourierCoefficients: expected 2n coefficients");
}

cplx FourierCoefficients::operator()(int mode) const {
    if (mode <= -n_ || mode > n_) return 0.0;
    return c_[mode + n_ - 1];
}

FourierCoefficients fourier_coeffs(const NodalFunction& f) {
    const Grid& g = f.grid;
    const int n = g.n(), size = g.size();
    CVector c(size);
    for (int m = -(n - 1); m <= n; ++m) {
        cplx sum = 0.0;
        for (int j = 0; j < size; ++j) sum += f.values[j] * std::conj(g.exp_table(static_cast<long>(m) * j));
        c[m + n - 1] = sum / static_cast<double>(size);
    }
    return FourierCoefficients(n, c);
}

NodalFunction inverse_fourier(const Grid& grid, const FourierCoefficients& c) {
    if (c.n() != grid.n()) throw std::invalid_argument("inverse_fourier: grid mismatch");
    const int n = grid.n();
    CVector v = CVector::Zero(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        cplx sum = c(n) * grid.cos_table(static_cast<long>(n) * j);
        for (int m = -(n - 1); m < n; ++m) sum += c(m) * grid.exp_table(static_cast<long>(m) * j);
        v[j] = sum;
    }
    return NodalFunction(grid, v);
}

cplx interpolate(const NodalFunction& f, double t) {
    const FourierCoefficients c = fourier_coeffs(f);
    const int n = f.grid.n();
    cplx sum = c(n) * std::cos(n * t);
    for (int m = -(n - 1); m < n; ++m) sum += c(m) * std::polar(1.0, m * t);
    return sum;
}

CVector resample(const NodalFunction& f, const Grid& fine) {
    const int n = f.grid.n();
    if (fine.n() % n != 0) throw std::invalid_argument("resample: fine grid must refine the coarse grid");
    const FourierCoefficients c = fourier_coeffs(f);
    CVector v(fine.size());
    for (int j = 0; j < fine.size(); ++j) {
        cplx sum = c(n) * fine.cos_table(static_cast<long>(n) * j);
        for (int m = -(n - 1); m < n; ++m) sum += c(m) * fine.exp_table(static_cast<long>(m) * j);
        v[j] = sum;
    }
    return v;
}

double sin2log_coefficient(int m) {
    const int a = std::abs(m);
    if (a == 0) return 0.5;
    if (a == 1) return -3.0 / 8.0;
    return 0.25 * (1.0 / (a + 1) + 1.0 / (a - 1) - 2.0 / a);
}

RVector weights_R(const Grid& grid, double t) { return weights_from_symbol(grid, t, log_symbol); }
RVector weights_Q(const Grid& grid, double t) { return weights_from_symbol(grid, t, sin2log_symbol); }
RVector weights_T(const Grid& grid, double t) { return weights_from_symbol(grid, t, t0_symbol); }

CVector circulant_generator(const Grid& grid, const std::function<cplx(int)>& symbol) {
    const int n = grid.n();
    CVector mu(n + 1);
    for (int m = 0; m <= n; ++m) mu[m] = symbol(m);
    CVector w(grid.size());
    for (int d = 0; d < grid.size(); ++d) {
        cplx sum = mu[0] + mu[n] * grid.cos_table(static_cast<long>(n) * d);
        for (int m = 1; m < n; ++m) sum += 2.0 * mu[m] * grid.cos_table(static_cast<long>(m) * d);
        w[d] = sum / (2.0 * n);
    }
    return w;
}

CMatrix circulant_matrix(const CVector& generator) {
    const Eigen::Index size = generator.size();
    CMatrix a(size, size);
    for (Eigen::Index j = 0; j < size; ++j)
        for (Eigen::Index i = 0; i < size; ++i) a(i, j) = generator[(i - j + size) % size];
    return a;
}

double sobolev_norm(const NodalFunction& f, double p) {
    const FourierCoefficients c = fourier_coeffs(f);
    const int n = f.grid.n();
    double sum = 0.0;
    for (int m = -(n - 1); m < n; ++m) sum += std::pow(1.0 + double(m) * m, p) * std::norm(c(m));
    sum += 0.5 * std::pow(1.0 + double(n) * n, p) * std::norm(c(n));
    return std::sqrt(sum);
}

} // namespace nystrom
