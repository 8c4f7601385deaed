#include <doctest.h>

#include "nystrom/kernels.hpp"
#include "oracle/mp_bessel.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

using namespace nystrom;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

struct Hankels {
    cplx h0, h1, j0, j1;
};

Hankels reference_hankels(cplx z) {
    if (z.imag() == 0.0) {
        const double x = z.real();
        const double j0 = boost::math::cyl_bessel_j(0, x), j1 = boost::math::cyl_bessel_j(1, x);
        return {cplx(j0, boost::math::cyl_neumann(0, x)), cplx(j1, boost::math::cyl_neumann(1, x)), j0, j1};
    }
    const oracle::BesselValues b = oracle::bessel_all(z);
    return {b.h0, b.h1, b.j0, b.j1};
}

double cross(const Vec2& u, const Vec2& v) { return u[0] * v[1] - u[1] * v[0]; }

// Full parametrized kernels from reference Bessel values.
struct Kernels {
    cplx sl, dl, dlt, hyp;
};

Kernels reference_kernels(const Curve& c, cplx k, double t, double tau) {
    const CurvePoint a = c.point(t), b = c.point(tau);
    const Vec2 d = a.x - b.x;
    const double r = d.norm();
    const Hankels h = reference_hankels(k * r);
    const double tangents = a.d1.dot(b.d1);
    const double proj = d.dot(a.d1) * d.dot(b.d1);
    const double half = std::sin(0.5 * (t - tau));
    Kernels out;
    out.sl = 0.25 * I * h.h0;
    out.dl = 0.25 * I * k * h.h1 * cross(d, b.d1) / r;
    out.dlt = -0.25 * I * k * h.h1 * cross(d, a.d1) / r;
    out.hyp = 0.25 * I * k * k * h.h0 * (tangents - proj / (r * r)) +
              I * k / r * h.h1 * (0.5 * proj / (r * r) - 0.25 * tangents) - 1.0 / (8.0 * pi * half * half);
    return out;
}

cplx pick(const Kernels& k, KernelKind kind) {
    switch (kind) {
    case KernelKind::SL: return k.sl;
    case KernelKind::DL: return k.dl;
    case KernelKind::DLT: return k.dlt;
    case KernelKind::HYP: return k.hyp;
    }
    return 0.0;
}

// Symmetric average around the diagonal, extrapolated in h^2 by Neville's scheme.
cplx diagonal_limit(const std::function<cplx(double)>& sample, double h0) {
    constexpr int levels = 6;
    std::array<cplx, levels> table{};
    std::array<double, levels> steps{};
    for (int j = 0; j < levels; ++j) {
        steps[j] = h0 / std::pow(2.0, j);
        table[j] = sample(steps[j]);
    }
    for (int m = 1; m < levels; ++m)
        for (int j = levels - 1; j >= m; --j) {
            const double a = steps[j - m] * steps[j - m], b = steps[j] * steps[j];
            table[j] = (a * table[j] - b * table[j - 1]) / (a - b);
        }
    return table[levels - 1];
}

const std::array<KernelKind, 4> all_kinds{KernelKind::SL, KernelKind::DL, KernelKind::DLT, KernelKind::HYP};

} // namespace

TEST_CASE("cutoff function") {
    CHECK(chi(0.3) == 1.0);
    CHECK(chi(-0.5) == 1.0);
    CHECK(chi(1.5) == 0.0);
    CHECK(chi(1.0) == 0.0);
    CHECK(chi(0.75) > 0.0);
    CHECK(chi(0.75) < 1.0);
    CHECK(chi(0.75) == doctest::Approx(0.5));
    double previous = 1.0;
    for (double t = 0.5; t <= 1.0; t += 1e-3) {
        CHECK(chi(t) <= previous);
        CHECK(chi(-t) == chi(t));
        previous = chi(t);
    }
    // flat joins: every finite difference quotient vanishes at the ends
    CHECK(1.0 - chi(0.5 + 1e-2) < 1e-20);
    CHECK(chi(1.0 - 1e-2) < 1e-20);
}

TEST_CASE("single layer split, diagonal constant") {
    const SplitKernelPair sl = split_real(KernelKind::SL, 2.0, Curve::kite());
    CHECK(sl.weight() == SingularWeight::log);
    for (double t : {0.0, 1.0, 4.0}) CHECK(sl.part1(t, t) == cplx(-1.0 / (4.0 * pi)));
}

TEST_CASE("real splittings reconstruct the kernels") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    for (const Curve& curve : {Curve::kite(), Curve::five_petal()}) {
        for (double k : {2.0, 8.0}) {
            for (KernelKind kind : all_kinds) {
                const SplitKernelPair pair = split_real(kind, k, curve);
                double worst = 0.0;
                for (int trial = 0; trial < 200; ++trial) {
                    const double t = angle(rng), tau = angle(rng);
                    const cplx want = pick(reference_kernels(curve, k, t, tau), kind);
                    worst = std::max(worst, std::abs(pair.reconstruct(t, tau) - want) / std::max(std::abs(want), 0.1));
                }
                INFO(curve.label(), " k=", k, " kind=", int(kind));
                CHECK(worst < 1e-12);
            }
            const SplitKernelPair refined = split_sl_refined(k, curve);
            double worst = 0.0;
            for (int trial = 0; trial < 200; ++trial) {
                const double t = angle(rng), tau = angle(rng);
                const cplx want = reference_kernels(curve, k, t, tau).sl;
                worst = std::max(worst, std::abs(refined.reconstruct(t, tau) - want) / std::abs(want));
            }
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("complex splittings reconstruct the kernels") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    const Curve kite = Curve::kite();
    const cplx kappa(5.0, 8.0);
    for (KernelKind kind : {KernelKind::SL, KernelKind::DLT, KernelKind::HYP}) {
        const SplitKernelPair pair = split_complex(kind, kappa, kite);
        double worst = 0.0;
        int near = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const double t = angle(rng);
            // half the samples close to the diagonal so the blend is exercised
            const double tau = trial % 2 ? angle(rng) : t + 0.4 * (angle(rng) / pi - 1.0);
            if (std::abs(std::remainder(t - tau, 2 * pi)) < 1e-9) continue;
            const cplx want = pick(reference_kernels(kite, kappa, t, tau), kind);
            if (pair.part1(t, tau) != 0.0) ++near;
            worst = std::max(worst, std::abs(pair.reconstruct(t, tau) - want) / std::max(std::abs(want), 1e-3));
        }
        INFO("kind=", int(kind));
        CHECK(near > 50);
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("far region of the complex split carries the full kernel") {
    const Curve kite = Curve::kite();
    const cplx kappa(5.0, 8.0);
    // opposite points of the kite lie far outside the cutoff support
    const double t = 0.0, tau = pi;
    const Kernels want = reference_kernels(kite, kappa, t, tau);
    for (KernelKind kind : {KernelKind::SL, KernelKind::DLT, KernelKind::HYP}) {
        const SplitKernelPair pair = split_complex(kind, kappa, kite);
        CHECK(pair.part1(t, tau) == cplx(0.0));
        CHECK(std::abs(pair.part2(t, tau) - pick(want, kind)) <= 1e-12 * std::abs(pick(want, kind)));
    }
}

TEST_CASE("diagonal values agree with extrapolated off-diagonal samples") {
    const Curve kite = Curve::kite();
    std::vector<SplitKernelPair> pairs;
    for (KernelKind kind : all_kinds) pairs.push_back(split_real(kind, 3.0, kite));
    pairs.push_back(split_sl_refined(3.0, kite));
    for (KernelKind kind : {KernelKind::SL, KernelKind::DLT, KernelKind::HYP})
        pairs.push_back(split_complex(kind, cplx(5.0, 8.0), kite));
    pairs.push_back(split_real(KernelKind::HYP, 1.0, Curve::five_petal()));
    pairs.push_back(split_real(KernelKind::DL, 2.0, Curve::circle(1.5)));

    for (const SplitKernelPair& pair : pairs) {
        for (double t : {0.0, 0.9, 2.5, 4.4}) {
            for (int which : {1, 2}) {
                auto part = [&](double tau) { return which == 1 ? pair.part1(t, tau) : pair.part2(t, tau); };
                const cplx exact = part(t);
                const cplx extrapolated = diagonal_limit([&](double h) { return 0.5 * (part(t + h) + part(t - h)); }, 0.08);
                INFO("kind=", int(pair.kind()), " k=", pair.wavenumber(), " t=", t, " part", which);
                CHECK(std::abs(exact - extrapolated) <= 1e-8 * std::max(1.0, std::abs(exact)));
            }
        }
    }
}

TEST_CASE("hypersingular remainder matches finite differences of the Green's function") {
    const Curve kite = Curve::kite();
    const double k = 2.5;
    auto green = [&](double t, double tau) {
        const double r = (kite.eval(t) - kite.eval(tau)).norm();
        return 0.25 * I * reference_hankels(cplx(k * r)).h0;
    };
    const double step = 1e-4;
    for (auto [t, tau] : {std::pair{0.4, 2.0}, std::pair{1.0, 1.6}, std::pair{5.0, 3.1}}) {
        const cplx mixed = (green(t + step, tau + step) - green(t + step, tau - step) - green(t - step, tau + step) +
                            green(t - step, tau - step)) /
                           (4.0 * step * step);
        const double half = std::sin(0.5 * (t - tau));
        const cplx want = k * k * green(t, tau) * kite.deriv1(t).dot(kite.deriv1(tau)) - mixed -
                          1.0 / (8.0 * pi * half * half);
        const cplx got = split_real(KernelKind::HYP, k, kite).reconstruct(t, tau);
        CHECK(std::abs(got - want) < 1e-6);
    }
}

TEST_CASE("adjoint double layer is the transposed double layer") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    const Curve petal = Curve::five_petal();
    const SplitKernelPair dl = split_real(KernelKind::DL, 4.0, petal);
    const SplitKernelPair dlt = split_real(KernelKind::DLT, 4.0, petal);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = angle(rng), tau = angle(rng);
        const cplx a = dlt.reconstruct(t, tau), b = dl.reconstruct(tau, t);
        CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("paired evaluation matches single evaluation") {
    const Curve kite = Curve::kite();
    for (cplx k : {cplx(3.0), cplx(5.0, 8.0)}) {
        const KernelSplitter splitter(kite, k);
        const double t = 1.1, tau = 0.7;
        KernelSample fwd, bwd;
        splitter.off_diagonal_pair(kite.point(t), kite.point(tau), t - tau, fwd, bwd);
        const KernelSample a = splitter.sample(t, tau), b = splitter.sample(tau, t);
        CHECK(fwd.hyp.part2 == a.hyp.part2);
        CHECK(bwd.dlt.part1 == b.dlt.part1);
        CHECK(bwd.dl.part2 == b.dl.part2);
    }
}

TEST_CASE("no catastrophic cancellation in the truncated split") {
    // Parts on the blend region against the largest sampled kernel value.
    // Without truncation the log coefficient grows like e^{Im(kappa) r}.
    const Curve kite = Curve::kite();
    const cplx kappa(5.0, 8.0);
    const int samples = 240;
    for (KernelKind kind : {KernelKind::SL, KernelKind::DLT, KernelKind::HYP}) {
        const SplitKernelPair pair = split_complex(kind, kappa, kite);
        const SplitKernelPair untruncated = split_complex(kind, kappa, kite, [](double) { return 1.0; });
        double kernel_max = 0.0, part_max = 0.0, untruncated_max = 0.0;
        int blended = 0;
        for (int i = 0; i < samples; ++i)
            for (int j = 0; j < samples; ++j) {
                if (i == j) continue;
                const double t = 2 * pi * i / samples, tau = 2 * pi * j / samples;
                const KernelParts p = pair.parts(t, tau);
                kernel_max = std::max(kernel_max, std::abs(p.part1 * log_weight(t - tau) + p.part2));
                const KernelParts q = untruncated.parts(t, tau);
                untruncated_max = std::max({untruncated_max, std::abs(q.part1), std::abs(q.part2)});
                const double r = (kite.eval(t) - kite.eval(tau)).norm();
                const double c = chi(std::abs(kappa) * std::pow(r, 4));
                if (c <= 0.0 || c >= 1.0) continue;
                ++blended;
                part_max = std::max({part_max, std::abs(p.part1), std::abs(p.part2)});
            }
        INFO("kind=", int(kind), " parts ", part_max, " kernel ", kernel_max, " untruncated ", untruncated_max);
        CHECK(blended > 100);
        CHECK(part_max <= 10.0 * kernel_max);
        CHECK(untruncated_max > 1e3 * kernel_max);
    }
}

TEST_CASE("remainders are smooth across the diagonal") {
    const Curve kite = Curve::kite();
    for (KernelKind kind : all_kinds) {
        const SplitKernelPair pair = split_real(kind, 3.0, kite);
        const double t = 1.3;
        auto second_difference = [&](double h) {
            return std::abs(pair.part2(t, t + h) - 2.0 * pair.part2(t, t) + pair.part2(t, t - h)) / (h * h);
        };
        const double coarse = second_difference(1e-2), fine = second_difference(1e-3);
        INFO("kind=", int(kind));
        CHECK(fine <= 2.0 * coarse + 1.0);
    }
}

TEST_CASE("parts are 2pi periodic in both variables") {
    const Curve kite = Curve::kite();
    for (KernelKind kind : all_kinds) {
        const SplitKernelPair pair = split_real(kind, 2.0, kite);
        for (auto [t, tau] : {std::pair{0.3, 1.7}, std::pair{2.0, 2.0}}) {
            const KernelParts base = pair.parts(t, tau);
            const KernelParts shifted = pair.parts(t + 2 * pi, tau - 2 * pi);
            CHECK(std::abs(base.part1 - shifted.part1) < 1e-10);
            CHECK(std::abs(base.part2 - shifted.part2) < 1e-10);
        }
    }
}

TEST_CASE("invalid requests") {
    const Curve kite = Curve::kite();
    CHECK_THROWS_AS(split_real(KernelKind::SL, 0.0, kite), KernelError);
    CHECK_THROWS_AS(split_real(KernelKind::SL, -1.0, kite), KernelError);
    CHECK_THROWS_AS(split_complex(KernelKind::SL, cplx(2.0, 0.0), kite), KernelError);
    CHECK_THROWS_AS(split_complex(KernelKind::HYP, cplx(2.0, -1.0), kite), KernelError);
    CHECK_THROWS_AS(split_complex(KernelKind::DL, cplx(2.0, 1.0), kite), KernelError);
    CHECK_THROWS_AS(split_real(KernelKind::SL, 1.0, kite).reconstruct(1.0, 1.0), KernelError);
}
