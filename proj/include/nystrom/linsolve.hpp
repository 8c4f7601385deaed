#pragma once

#include "nystrom/trigtools.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace nystrom {

class LinsolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// out = A * in
using MatVec = std::function<void(const CVector& in, CVector& out)>;

struct SolveReport {
    CVector solution;
    /// Krylov dimension used.
    int iterations = 0;
    /// Relative least-squares residuals, starting with 1 for the zero initial guess.
    std::vector<double> residual_history;
    bool converged = false;
    /// ||b - A x|| / ||b|| recomputed from the returned iterate.
    double true_residual = 0.0;
};

/// Full GMRES (no restart, modified Gram-Schmidt, Givens rotations), x0 = 0.
/// max_iter <= 0 means the system dimension. Throws LinsolveError when the
/// recomputed residual exceeds the least-squares estimate by more than 10x.
SolveReport gmres(const MatVec& apply, const CVector& rhs, double tol, int max_iter = 0);
SolveReport gmres(const CMatrix& matrix, const CVector& rhs, double tol, int max_iter = 0);

/// Partial-pivoting LU; throws LinsolveError when the matrix is singular to working precision.
CVector direct_solve(const CMatrix& matrix, const CVector& rhs);

} // namespace nystrom
