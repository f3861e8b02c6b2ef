#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "pgd_strip/model.hpp"

namespace pgd_strip {

// Kirchhoff-Love strip: D w'''' = p with p = 2 g3.
struct KLSolution {
    double bending_stiffness = 0.0;  // D = E t^3 / (12 (1 - nu^2))
    double line_load = 0.0;          // amplitude of p
    double w_center = 0.0;
    double energy = 0.0;             // 0.5 * int p w
    std::function<double(double)> w, dw, d2w, d3w;
};

KLSolution kl_solution(const CaseSpec& c, const MaterialPlaneStrain& m);

struct AsymptoticField {
    double u1 = 0.0;
    double u3 = 0.0;
};

// Kirchhoff-Love field plus the thickness corrector driven by nu / (1 - nu).
AsymptoticField asymptotic_solution(const CaseSpec& c, const MaterialPlaneStrain& m, double x1, double x3);
double asymptotic_center_deflection(const CaseSpec& c, const MaterialPlaneStrain& m);
double asymptotic_energy(const CaseSpec& c, const MaterialPlaneStrain& m);

// a w'''' - b (2 mu w'' - mu^2 w) = p on (0, 1), mu = int w w'' / int w^2.
struct LimitOdeProblem {
    double a_coeff = 0.0;
    double b_coeff = 0.0;
    BoundaryKind bc = BoundaryKind::Clamped;
    std::function<double(double)> scaled_load;

    static LimitOdeProblem isotropic(double nu, BoundaryKind bc, LoadKind load);
    // Same load and supports with the Kirchhoff-Love stiffness a - b and no mu coupling.
    LimitOdeProblem kirchhoff_love() const;
};

struct LimitOdeSolution {
    Eigen::VectorXd w;  // Hermite dofs (value, slope) per node
    std::vector<double> nodes;
    double mu = 0.0;
    double w_center = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> mu_trace;

    double value(double x) const;
};

LimitOdeSolution solve_limit_ode(const LimitOdeProblem& p, int n_elems, int max_iters = 500);

struct ReferenceMesh2D {
    std::vector<double> x_breaks;  // axial element breakpoints
    int nz = 10;
    bool half_domain = true;      // model [0, L/2] with the symmetry plane at L/2

    int nx() const { return static_cast<int>(x_breaks.size()) - 1; }
};

// nz elements through the thickness, aspect ratio <= max_aspect away from the
// ends, and 0.1t / 0.9t end bands.
ReferenceMesh2D make_reference_mesh(const CaseSpec& c, int nz = 10, double max_aspect = 2.0, bool half_domain = true);

struct ReferenceSolution {
    Eigen::VectorXd dofs;  // (u1, u3) per node
    int nodes_x = 0;
    int nodes_z = 0;
    double w_center = 0.0;  // u3(L/2, 0)
    double energy = 0.0;    // 0.5 u^T K u (full strip)
    double work = 0.0;      // f^T u (full strip)
    double relative_residual = 0.0;
};

ReferenceSolution solve_reference_2d(const CaseSpec& c, const MaterialPlaneStrain& m, const ReferenceMesh2D& mesh);

// Unconstrained stiffness and node coordinates of a 9-node quad mesh, for patch checks.
struct ReferenceAssembly {
    Eigen::SparseMatrix<double> K;
    std::vector<double> x, z;  // per node
};
ReferenceAssembly assemble_reference_stiffness(const CaseSpec& c, const MaterialPlaneStrain& m,
                                               const ReferenceMesh2D& mesh);

}  // namespace pgd_strip
