#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace pgd_strip {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LinearSolveInfo {
    double relative_residual = 0.0;  // ||b - A x|| / ||b||, residual in extended precision
    int refinement_steps = 0;
};

using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Symmetric positive definite solve: Jacobi equilibration, double Cholesky,
// iterative refinement against the extended-precision matrix.
// Throws SolverError when the matrix is singular or not positive definite.
VectorXld solve_spd(const MatrixXld& A, const VectorXld& b, LinearSolveInfo* info = nullptr);
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, LinearSolveInfo* info = nullptr);

// Rows/columns flagged in `fixed` are eliminated and those entries returned as zero.
VectorXld solve_spd_constrained(const MatrixXld& A, const VectorXld& b, const std::vector<bool>& fixed,
                                LinearSolveInfo* info = nullptr);
Eigen::VectorXd solve_spd_constrained(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                      const std::vector<bool>& fixed, LinearSolveInfo* info = nullptr);

}  // namespace pgd_strip
