#pragma once

#include "nystrom/geometry.hpp"
#include "nystrom/trigtools.hpp"

#include <functional>
#include <stdexcept>

namespace nystrom {

enum class KernelKind { SL, DL, DLT, HYP };
enum class SingularWeight { log, sin2log, none };

using CutoffFn = std::function<double(double)>;

/// Smooth cutoff: 1 on |t| <= 1/2, 0 on |t| >= 1, C-infinity in between.
double chi(double t);

struct KernelParts {
    cplx part1 = 0.0;
    cplx part2 = 0.0;
};

/// Every split kernel at one parameter pair (t, tau). Parametrized kernels
/// carry their jacobian factors:
///   sl      M     = (i/4) H0(kr)                       weight log
///   sl_sin2 M     = -(1/4pi) log + part1 sin2log + part2 (leading log term excluded)
///   dl      H     = (ik/4) H1(kr) [x'(tau)^perp . d]/r  weight log
///   dlt     H^T   = -(ik/4) H1(kr) [x'(t)^perp . d]/r   weight sin2log (real k) or log (complex)
///   hyp     D     = N kernel minus the T0 part          weight log
/// with d = x(t) - x(tau), r = |d| and v^perp . d = v2 d1 - v1 d2.
struct KernelSample {
    KernelParts sl, sl_sin2, dl, dlt, hyp;
};

/// Evaluates the splittings for one wavenumber on one curve. Real wavenumbers
/// use the analytic log splitting; wavenumbers with Im > 0 use the
/// cutoff-truncated splitting, chi(|kappa| r^4) times the log coefficient.
class KernelSplitter {
public:
    KernelSplitter(const Curve& curve, cplx wavenumber, CutoffFn cutoff = chi);

    bool is_complex() const { return complex_; }
    cplx wavenumber() const { return k_; }
    const Curve& curve() const { return curve_; }

    KernelSample sample(double t, double tau) const;
    /// Off-diagonal pair; s = t - tau (mod 2pi) must not vanish.
    KernelSample off_diagonal(const CurvePoint& at_t, const CurvePoint& at_tau, double s) const;
    /// Both orderings (t, tau) and (tau, t) sharing one Bessel evaluation.
    void off_diagonal_pair(const CurvePoint& at_t, const CurvePoint& at_tau, double s, KernelSample& forward,
                           KernelSample& backward) const;
    KernelSample diagonal(const CurvePoint& at_t) const;

private:
    struct Radial {
        cplx h0, h1, j0, j1, one_minus_j0;
        double cutoff;
    };
    Radial radial(double r) const;
    KernelSample assemble(const CurvePoint& a, const CurvePoint& b, double s, const Radial& rad, double r) const;

    Curve curve_;
    cplx k_;
    bool complex_;
    CutoffFn cutoff_;
};

class KernelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One split kernel, evaluated lazily per entry.
class SplitKernelPair {
public:
    SplitKernelPair(KernelKind kind, SingularWeight weight, KernelSplitter splitter, bool refined_sl = false);

    KernelKind kind() const { return kind_; }
    SingularWeight weight() const { return weight_; }
    cplx wavenumber() const { return splitter_.wavenumber(); }
    const KernelSplitter& splitter() const { return splitter_; }

    cplx part1(double t, double tau) const;
    cplx part2(double t, double tau) const;
    KernelParts parts(double t, double tau) const;
    /// part1 * weight + part2 for t != tau (includes the leading log term for the refined SL split).
    cplx reconstruct(double t, double tau) const;

    /// Selects this pair's entry from a full sample.
    KernelParts select(const KernelSample& s) const;

private:
    KernelKind kind_;
    SingularWeight weight_;
    KernelSplitter splitter_;
    bool refined_sl_;
};

SplitKernelPair split_real(KernelKind kind, double k, const Curve& curve);
/// kind in {SL, DLT, HYP}; Im kappa > 0.
SplitKernelPair split_complex(KernelKind kind, cplx kappa, const Curve& curve, CutoffFn cutoff = chi);
/// SL kernel with the leading -(1/4pi) log term removed and the J0 remainder
/// carried by the sin^2 log weight: M = -(1/4pi) log + part1 sin2log + part2.
SplitKernelPair split_sl_refined(double k, const Curve& curve);

/// log(4 sin^2(s/2))
double log_weight(double s);
/// sin^2(s/2) log(4 sin^2(s/2))
double sin2log_weight(double s);

} // namespace nystrom
