#include "pgd_strip/linalg.hpp"

#include <cmath>

namespace pgd_strip {

VectorXld solve_spd(const MatrixXld& A, const VectorXld& b, LinearSolveInfo* info) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || b.size() != n) throw SolverError("dimension mismatch in linear solve");
    if (n == 0) return VectorXld();
    VectorXld d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(A(i, i) > 0.0L) || !std::isfinite(static_cast<double>(A(i, i))))
            throw SolverError("singular system: non-positive diagonal");
        d[i] = 1.0L / std::sqrt(A(i, i));
    }
    const Eigen::MatrixXd S = (d.asDiagonal() * A * d.asDiagonal()).cast<double>();
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) throw SolverError("singular system: matrix not positive definite");
    const Eigen::VectorXd diagL = llt.matrixLLT().diagonal();
    if (diagL.minCoeff() < 1e-9 * diagL.maxCoeff()) throw SolverError("singular system: vanishing pivot");

    auto correction = [&](const VectorXld& r) -> VectorXld {
        const Eigen::VectorXd rs = (d.asDiagonal() * r).cast<double>();
        return d.asDiagonal() * llt.solve(rs).cast<long double>();
    };
    const long double bnorm = b.norm();
    VectorXld x = VectorXld::Zero(n);
    int steps = 0;
    double rel = 0.0;
    if (bnorm > 0.0L) {
        x = correction(b);
        for (; steps < 4; ++steps) {
            const VectorXld r = b - A * x;
            rel = static_cast<double>(r.norm() / bnorm);
            if (rel < 1e-17) break;
            x += correction(r);
        }
        rel = static_cast<double>((b - A * x).norm() / bnorm);
    }
    if (info) {
        info->relative_residual = rel;
        info->refinement_steps = steps;
    }
    return x;
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, LinearSolveInfo* info) {
    return solve_spd(MatrixXld(A.cast<long double>()), VectorXld(b.cast<long double>()), info).cast<double>();
}

VectorXld solve_spd_constrained(const MatrixXld& A, const VectorXld& b, const std::vector<bool>& fixed,
                                LinearSolveInfo* info) {
    if (static_cast<Eigen::Index>(fixed.size()) != A.rows()) throw SolverError("constraint pattern size mismatch");
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        if (!fixed[i]) free.push_back(i);
    const Eigen::Index m = static_cast<Eigen::Index>(free.size());
    MatrixXld Af(m, m);
    VectorXld bf(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        bf[i] = b[free[i]];
        for (Eigen::Index j = 0; j < m; ++j) Af(i, j) = A(free[i], free[j]);
    }
    const VectorXld xf = solve_spd(Af, bf, info);
    VectorXld x = VectorXld::Zero(A.rows());
    for (Eigen::Index i = 0; i < m; ++i) x[free[i]] = xf[i];
    return x;
}

Eigen::VectorXd solve_spd_constrained(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                      const std::vector<bool>& fixed, LinearSolveInfo* info) {
    return solve_spd_constrained(MatrixXld(A.cast<long double>()), VectorXld(b.cast<long double>()), fixed, info)
        .cast<double>();
}

}  // namespace pgd_strip
