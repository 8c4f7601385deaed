#pragma once

#include "nystrom/kernels.hpp"

#include <string>

namespace nystrom {

/// Dense (2n)x(2n) matrix acting on nodal values: row i collocates at t_i,
/// column j multiplies the nodal value at t_j.
struct DiscreteOp {
    Grid grid;
    CMatrix entries;
};

class OperatorError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using KernelFn = std::function<cplx(double, double)>;

/// R_j(t_i) part1(t_i, t_j)
DiscreteOp assemble_logtype(const SplitKernelPair& pair, const Grid& grid);
DiscreteOp assemble_logtype(const KernelFn& part1, const Grid& grid);
/// Q_j(t_i) part1(t_i, t_j)
DiscreteOp assemble_sin2logtype(const SplitKernelPair& pair, const Grid& grid);
DiscreteOp assemble_sin2logtype(const KernelFn& part1, const Grid& grid);
/// (pi/n) kernel(t_i, t_j); the pair overload uses part2.
DiscreteOp assemble_smoothtype(const SplitKernelPair& pair, const Grid& grid);
DiscreteOp assemble_smoothtype(const KernelFn& kernel, const Grid& grid);

/// Multipliers -|m|/2.
DiscreteOp assemble_T0(const Grid& grid);

enum class SymbolKind { S, N };
/// sigma_N(m) = -sqrt(m^2 - kappa^2)/2, sigma_S(m) = 1/(2 sqrt(m^2 - kappa^2)), both with Im > 0.
cplx principal_symbol(SymbolKind which, cplx kappa, int mode);
DiscreteOp assemble_PS(SymbolKind which, cplx kappa, const Grid& grid);
/// Multipliers 1/(2|m|), mode 0 -> 0; equal to -(1/4pi) times the log-type operator with unit kernel.
DiscreteOp assemble_A0(const Grid& grid);

enum class AtildeKind { first, second };
/// first:  sigma_N(m)/|m| + 1/2, so that 2 A0 PS(N) = -I/2 + first
/// second: -|m| sigma_S(m) + 1/2, so that 2 T0 PS(S) = -I/2 + second
/// Mode 0 maps to 1/2 in both.
cplx atilde_multiplier(AtildeKind which, cplx kappa, int mode);
DiscreteOp assemble_Atilde(AtildeKind which, cplx kappa, const Grid& grid);

/// All layer operators of one wavenumber from a single pass over node pairs.
/// Real wavenumbers fill S, K, KT, N, N_smooth and, on request, S_hat;
/// complex ones (Im > 0) fill S, KT, N and N_smooth with the truncated splits.
///   S = A1 + A2, K = A3 + A4, KT = A5 + A6, N = T0 + N_smooth, N_smooth = A7 + A8,
///   S = A0 + S_hat with S_hat from the refined single-layer split.
struct LayerFamily {
    Grid grid;
    cplx wavenumber;
    CMatrix S, K, KT, N, N_smooth, S_hat;
};

LayerFamily assemble_layer_family(const Curve& curve, const Grid& grid, cplx wavenumber, bool with_refined = false,
                                  CutoffFn cutoff = chi);

/// Family assembled on a grid refined by `factor` and mapped back:
/// coarse = sample . fine . interpolate. Used for the truncated complex
/// splits, whose steep cutoff is poorly resolved at the working resolution.
LayerFamily assemble_layer_family_oversampled(const Curve& curve, const Grid& grid, cplx wavenumber, int factor,
                                              CutoffFn cutoff = chi);

/// Trigonometric interpolation from the coarse nodes to the fine nodes.
CMatrix interpolation_matrix(const Grid& coarse, const Grid& fine);

enum class LayerKind { S, K, KT, N };
DiscreteOp layer_op(LayerKind which, cplx wavenumber, const Curve& curve, const Grid& grid);

/// Binary dump: "NYSTROM1", int64 n, 16-byte kind label, two doubles
/// (wavenumber), then row-major complex doubles.
void write_matrix(const std::string& path, const DiscreteOp& op, const std::string& kind, cplx wavenumber);
struct MatrixDump {
    DiscreteOp op;
    std::string kind;
    cplx wavenumber;
};
MatrixDump read_matrix(const std::string& path);

} // namespace nystrom
