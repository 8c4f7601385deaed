#include "nystrom/linsolve.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nystrom {

namespace {

// Rotation zeroing b in (a, b): [c s; -conj(s) c] with real c.
void givens(cplx a, cplx b, double& c, cplx& s) {
    const double abs_a = std::abs(a), abs_b = std::abs(b);
    if (abs_b == 0.0) {
        c = 1.0;
        s = 0.0;
        return;
    }
    if (abs_a == 0.0) {
        c = 0.0;
        s = std::conj(b) / abs_b;
        return;
    }
    const double norm = std::hypot(abs_a, abs_b);
    c = abs_a / norm;
    s = (a / abs_a) * std::conj(b) / norm;
}

} // namespace

SolveReport gmres(const MatVec& apply, const CVector& rhs, double tol, int max_iter) {
    if (!(tol > 0.0)) throw LinsolveError("gmres: tolerance must be positive");
    const Eigen::Index dim = rhs.size();
    if (max_iter <= 0) max_iter = static_cast<int>(dim);

    SolveReport report;
    report.solution = CVector::Zero(dim);
    const double beta = rhs.norm();
    if (beta == 0.0) {
        report.converged = true;
        report.residual_history = {0.0};
        return report;
    }
    report.residual_history.push_back(1.0);

    std::vector<CVector> basis;
    basis.reserve(max_iter + 1);
    basis.push_back(rhs / beta);
    CMatrix hess = CMatrix::Zero(max_iter + 1, max_iter);
    std::vector<double> cs(max_iter);
    std::vector<cplx> sn(max_iter);
    CVector residual_vec = CVector::Zero(max_iter + 1);
    residual_vec(0) = beta;

    CVector w(dim);
    int used = 0;
    for (int j = 0; j < max_iter; ++j) {
        apply(basis[j], w);
        if (w.size() != dim) throw LinsolveError("gmres: operator changed the vector length");
        for (int i = 0; i <= j; ++i) {
            hess(i, j) = basis[i].dot(w);
            w -= hess(i, j) * basis[i];
        }
        const double next = w.norm();
        hess(j + 1, j) = next;

        for (int i = 0; i < j; ++i) {
            const cplx top = hess(i, j), bottom = hess(i + 1, j);
            hess(i, j) = cs[i] * top + sn[i] * bottom;
            hess(i + 1, j) = -std::conj(sn[i]) * top + cs[i] * bottom;
        }
        givens(hess(j, j), hess(j + 1, j), cs[j], sn[j]);
        hess(j, j) = cs[j] * hess(j, j) + sn[j] * hess(j + 1, j);
        hess(j + 1, j) = 0.0;
        residual_vec(j + 1) = -std::conj(sn[j]) * residual_vec(j);
        residual_vec(j) = cs[j] * residual_vec(j);

        used = j + 1;
        const double rel = std::abs(residual_vec(j + 1)) / beta;
        report.residual_history.push_back(rel);
        // happy breakdown: the Krylov space is invariant
        const bool breakdown = next <= 1e-14 * std::abs(hess(j, j));
        if (rel <= tol || breakdown) {
            report.converged = rel <= tol;
            break;
        }
        basis.push_back(w / next);
    }

    const CMatrix upper = hess.topLeftCorner(used, used);
    const CVector coeffs = upper.triangularView<Eigen::Upper>().solve(residual_vec.head(used));
    for (int i = 0; i < used; ++i) report.solution += coeffs(i) * basis[i];
    report.iterations = used;

    apply(report.solution, w);
    report.true_residual = (rhs - w).norm() / beta;
    const double estimate = report.residual_history.back();
    if (report.true_residual > 10.0 * std::max(estimate, 1e-13))
        throw LinsolveError("gmres: true residual " + std::to_string(report.true_residual) +
                            " disagrees with the least-squares estimate " + std::to_string(estimate));
    return report;
}

SolveReport gmres(const CMatrix& matrix, const CVector& rhs, double tol, int max_iter) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
        throw LinsolveError("gmres: matrix and right-hand side sizes disagree");
    return gmres([&](const CVector& in, CVector& out) { out.noalias() = matrix * in; }, rhs, tol, max_iter);
}

CVector direct_solve(const CMatrix& matrix, const CVector& rhs) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
        throw LinsolveError("direct_solve: matrix and right-hand side sizes disagree");
    const Eigen::PartialPivLU<CMatrix> lu(matrix);
    const double rcond = lu.rcond();
    if (!(rcond > 10.0 * std::numeric_limits<double>::epsilon()))
        throw LinsolveError("direct_solve: matrix is singular to working precision");
    return lu.solve(rhs);
}

} // namespace nystrom
