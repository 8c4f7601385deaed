#include "nystrom/operators.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <vector>

namespace nystrom {

namespace {

constexpr double pi = std::numbers::pi;

CMatrix circulant(const Grid& grid, const std::function<cplx(int)>& symbol) {
    return circulant_matrix(circulant_generator(grid, symbol));
}

cplx log_symbol(int m) { return m == 0 ? cplx(0.0) : cplx(-2.0 * pi / m); }
cplx sin2log_symbol(int m) { return 2.0 * pi * sin2log_coefficient(m); }
cplx t0_symbol(int m) { return -0.5 * m; }

DiscreteOp weighted(const KernelFn& part, const Grid& grid, const CMatrix& weights) {
    const int size = grid.size();
    CMatrix out(size, size);
    for (int j = 0; j < size; ++j)
        for (int i = 0; i < size; ++i) out(i, j) = weights(i, j) * part(grid.node(i), grid.node(j));
    return {grid, out};
}

void check_weight(const SplitKernelPair& pair, SingularWeight expected) {
    if (pair.weight() != expected) throw OperatorError("operators: kernel split has the wrong singular weight");
}

} // namespace

DiscreteOp assemble_logtype(const KernelFn& part1, const Grid& grid) {
    return weighted(part1, grid, circulant(grid, log_symbol));
}

DiscreteOp assemble_logtype(const SplitKernelPair& pair, const Grid& grid) {
    check_weight(pair, SingularWeight::log);
    return assemble_logtype([&](double t, double tau) { return pair.part1(t, tau); }, grid);
}

DiscreteOp assemble_sin2logtype(const KernelFn& part1, const Grid& grid) {
    return weighted(part1, grid, circulant(grid, sin2log_symbol));
}

DiscreteOp assemble_sin2logtype(const SplitKernelPair& pair, const Grid& grid) {
    check_weight(pair, SingularWeight::sin2log);
    return assemble_sin2logtype([&](double t, double tau) { return pair.part1(t, tau); }, grid);
}

DiscreteOp assemble_smoothtype(const KernelFn& kernel, const Grid& grid) {
    const int size = grid.size();
    CMatrix out(size, size);
    const double h = grid.spacing();
    for (int j = 0; j < size; ++j)
        for (int i = 0; i < size; ++i) out(i, j) = h * kernel(grid.node(i), grid.node(j));
    return {grid, out};
}

DiscreteOp assemble_smoothtype(const SplitKernelPair& pair, const Grid& grid) {
    return assemble_smoothtype([&](double t, double tau) { return pair.part2(t, tau); }, grid);
}

DiscreteOp assemble_T0(const Grid& grid) { return {grid, circulant(grid, t0_symbol)}; }

cplx principal_symbol(SymbolKind which, cplx kappa, int mode) {
    if (!(kappa.imag() > 0.0) || !(kappa.real() > 0.0))
        throw OperatorError("operators: principal symbols need Re kappa > 0 and Im kappa > 0");
    const double m = mode;
    const cplx root = std::sqrt(m * m - kappa * kappa);
    const cplx value = which == SymbolKind::N ? -0.5 * root : 1.0 / (2.0 * root);
    if (!(value.imag() > 0.0)) throw OperatorError("operators: principal symbol branch violated");
    return value;
}

DiscreteOp assemble_PS(SymbolKind which, cplx kappa, const Grid& grid) {
    principal_symbol(which, kappa, 0); // validates kappa
    return {grid, circulant(grid, [&](int m) { return principal_symbol(which, kappa, m); })};
}

DiscreteOp assemble_A0(const Grid& grid) {
    return {grid, circulant(grid, [](int m) { return m == 0 ? cplx(0.0) : cplx(0.5 / m); })};
}

cplx atilde_multiplier(AtildeKind which, cplx kappa, int mode) {
    const int m = std::abs(mode);
    if (m == 0) {
        principal_symbol(SymbolKind::N, kappa, 0);
        return 0.5;
    }
    if (which == AtildeKind::first) return principal_symbol(SymbolKind::N, kappa, m) / double(m) + 0.5;
    return -double(m) * principal_symbol(SymbolKind::S, kappa, m) + 0.5;
}

DiscreteOp assemble_Atilde(AtildeKind which, cplx kappa, const Grid& grid) {
    atilde_multiplier(which, kappa, 0);
    return {grid, circulant(grid, [&](int m) { return atilde_multiplier(which, kappa, m); })};
}

LayerFamily assemble_layer_family(const Curve& curve, const Grid& grid, cplx wavenumber, bool with_refined,
                                  CutoffFn cutoff) {
    const KernelSplitter splitter(curve, wavenumber, std::move(cutoff));
    const bool complex = splitter.is_complex();
    if (complex && with_refined) throw OperatorError("operators: refined split needs a real wavenumber");
    const int size = grid.size();
    const double h = grid.spacing();
    const CMatrix log_w = circulant(grid, log_symbol);
    const CMatrix sin2_w = circulant(grid, sin2log_symbol);

    std::vector<CurvePoint> points(size);
    for (int j = 0; j < size; ++j) points[j] = curve.point(grid.node(j));

    LayerFamily out{grid, wavenumber, {}, {}, {}, {}, {}, {}};
    out.S.resize(size, size);
    out.KT.resize(size, size);
    out.N_smooth.resize(size, size);
    if (!complex) out.K.resize(size, size);
    if (with_refined) out.S_hat.resize(size, size);

    auto store = [&](int i, int j, const KernelSample& s) {
        const cplx lw = log_w(i, j);
        out.S(i, j) = lw * s.sl.part1 + h * s.sl.part2;
        out.N_smooth(i, j) = lw * s.hyp.part1 + h * s.hyp.part2;
        if (complex) {
            out.KT(i, j) = lw * s.dlt.part1 + h * s.dlt.part2;
        } else {
            out.K(i, j) = lw * s.dl.part1 + h * s.dl.part2;
            out.KT(i, j) = sin2_w(i, j) * s.dlt.part1 + h * s.dlt.part2;
        }
        if (with_refined) out.S_hat(i, j) = sin2_w(i, j) * s.sl_sin2.part1 + h * s.sl_sin2.part2;
    };

    KernelSample forward, backward;
    for (int j = 0; j < size; ++j) {
        store(j, j, splitter.diagonal(points[j]));
        for (int i = j + 1; i < size; ++i) {
            splitter.off_diagonal_pair(points[i], points[j], grid.node(i) - grid.node(j), forward, backward);
            store(i, j, forward);
            store(j, i, backward);
        }
    }
    out.N = assemble_T0(grid).entries + out.N_smooth;
    return out;
}

CMatrix interpolation_matrix(const Grid& coarse, const Grid& fine) {
    if (fine.n() % coarse.n() != 0) throw OperatorError("operators: fine grid must refine the coarse grid");
    CMatrix out(fine.size(), coarse.size());
    CVector unit = CVector::Zero(coarse.size());
    for (int j = 0; j < coarse.size(); ++j) {
        unit(j) = 1.0;
        out.col(j) = resample(NodalFunction(coarse, unit), fine);
        unit(j) = 0.0;
    }
    return out;
}

LayerFamily assemble_layer_family_oversampled(const Curve& curve, const Grid& grid, cplx wavenumber, int factor,
                                              CutoffFn cutoff) {
    if (factor < 1) throw OperatorError("operators: oversampling factor must be >= 1");
    if (factor == 1) return assemble_layer_family(curve, grid, wavenumber, false, std::move(cutoff));
    const Grid fine(grid.n() * factor);
    const LayerFamily on_fine = assemble_layer_family(curve, fine, wavenumber, false, std::move(cutoff));
    const CMatrix interp = interpolation_matrix(grid, fine);
    const int size = grid.size();
    auto restrict_to_coarse = [&](const CMatrix& m) {
        if (m.size() == 0) return CMatrix();
        CMatrix rows(size, fine.size());
        for (int i = 0; i < size; ++i) rows.row(i) = m.row(i * factor);
        return CMatrix(rows * interp);
    };
    LayerFamily out{grid, wavenumber, restrict_to_coarse(on_fine.S), restrict_to_coarse(on_fine.K),
                    restrict_to_coarse(on_fine.KT), {}, restrict_to_coarse(on_fine.N_smooth), {}};
    // T0 maps the coarse trigonometric polynomials exactly, so it is added on the coarse grid.
    out.N = assemble_T0(grid).entries + out.N_smooth;
    return out;
}

DiscreteOp layer_op(LayerKind which, cplx wavenumber, const Curve& curve, const Grid& grid) {
    if (which == LayerKind::K && wavenumber.imag() != 0.0)
        throw OperatorError("operators: the double layer is only assembled for real wavenumbers");
    LayerFamily family = assemble_layer_family(curve, grid, wavenumber);
    switch (which) {
    case LayerKind::S: return {grid, std::move(family.S)};
    case LayerKind::K: return {grid, std::move(family.K)};
    case LayerKind::KT: return {grid, std::move(family.KT)};
    case LayerKind::N: return {grid, std::move(family.N)};
    }
    throw OperatorError("operators: unknown layer operator");
}

namespace {
constexpr char dump_magic[8] = {'N', 'Y', 'S', 'T', 'R', 'O', 'M', '1'};
constexpr std::size_t label_bytes = 16;
} // namespace

void write_matrix(const std::string& path, const DiscreteOp& op, const std::string& kind, cplx wavenumber) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw OperatorError("operators: cannot open " + path);
    const std::int64_t n = op.grid.n();
    char label[label_bytes] = {};
    std::memcpy(label, kind.data(), std::min(kind.size(), label_bytes));
    const double k[2] = {wavenumber.real(), wavenumber.imag()};
    file.write(dump_magic, sizeof dump_magic);
    file.write(reinterpret_cast<const char*>(&n), sizeof n);
    file.write(label, label_bytes);
    file.write(reinterpret_cast<const char*>(k), sizeof k);
    const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = op.entries;
    file.write(reinterpret_cast<const char*>(rows.data()), std::streamsize(rows.size() * sizeof(cplx)));
    if (!file) throw OperatorError("operators: write failed for " + path);
}

MatrixDump read_matrix(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw OperatorError("operators: cannot open " + path);
    char magic[8];
    std::int64_t n = 0;
    char label[label_bytes];
    double k[2];
    file.read(magic, sizeof magic);
    file.read(reinterpret_cast<char*>(&n), sizeof n);
    file.read(label, label_bytes);
    file.read(reinterpret_cast<char*>(k), sizeof k);
    if (!file || std::memcmp(magic, dump_magic, sizeof magic) != 0 || n < 1)
        throw OperatorError("operators: not a matrix dump: " + path);
    const Grid grid(static_cast<int>(n));
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(grid.size(), grid.size());
    file.read(reinterpret_cast<char*>(rows.data()), std::streamsize(rows.size() * sizeof(cplx)));
    if (!file) throw OperatorError("operators: truncated matrix dump: " + path);
    return {{grid, rows}, std::string(label, strnlen(label, label_bytes)), cplx(k[0], k[1])};
}

} // namespace nystrom
