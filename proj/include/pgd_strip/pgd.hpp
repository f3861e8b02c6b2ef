#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgd_strip/discretization.hpp"
#include "pgd_strip/linalg.hpp"
#include "pgd_strip/model.hpp"
#include "pgd_strip/separated.hpp"

namespace pgd_strip {

// Everything a solve needs; operators are shared between solves of the same case.
struct StripProblem {
    CaseSpec strip;
    MaterialPlaneStrain material;
    SolverSettings settings;
    std::shared_ptr<const OperatorBundle> ops;
    Eigen::VectorXd g3;  // nodal load

    static StripProblem make(const CaseSpec& c, const MaterialPlaneStrain& m, const SolverSettings& s);
    BilinearForm form() const { return BilinearForm(*ops, material, settings.integration, g3); }
    // Dirichlet pattern of an axial unknown of the given component.
    std::vector<bool> fixed_dofs(Component c) const;
};

struct FixedPointReport {
    int iterations = 0;
    double final_rel_change = 0.0;
    bool converged = false;
    bool diverged = false;
    std::vector<double> per_iteration_change;
    double max_linear_residual = 0.0;
};

struct BlockMode {
    Eigen::VectorXd v1, v3, w3;
    Eigen::VectorXd r1, s3;
};

struct GreedyMode {
    Eigen::VectorXd v1, v3;
    Eigen::VectorXd r1, r3;
    FixedPointReport report;
    bool zero_mode = false;
};

struct PGDSolution {
    std::optional<BlockMode> block;
    std::vector<GreedyMode> extras;
    CaseSpec strip;
    SolverSettings settings;
    MaterialPlaneStrain material;
    FixedPointReport report;  // block report, or first greedy mode when there is no block
    std::shared_ptr<const OperatorBundle> ops;
    Eigen::VectorXd g3;

    SeparatedField field() const;
    BilinearForm form() const { return BilinearForm(*ops, material, settings.integration, g3); }
    int total_iterations() const;
    bool converged() const;
};

SeparatedField block_field(const BlockMode& b, const OperatorBundle& ops);
SeparatedField greedy_field(const GreedyMode& g);

struct InplaneResult {
    Eigen::VectorXd v1, v3, w3;
    double relative_residual = 0.0;
};

// Axial step of the block ansatz: thickness factors frozen, axial functions solved.
InplaneResult solve_inplane_step(const OperatorBundle& ops, const MaterialPlaneStrain& mat, const CaseSpec& c,
                                 Integration integration, const Eigen::VectorXd& r1, const Eigen::VectorXd& s3,
                                 const Eigen::VectorXd& g3_nodal);

struct ThicknessResult {
    Eigen::VectorXd r1, s3;
    double relative_residual = 0.0;
};

// Thickness step of the block ansatz; returns unnormalized factors.
ThicknessResult solve_thickness_step(const OperatorBundle& ops, const MaterialPlaneStrain& mat,
                                     Integration integration, const Eigen::VectorXd& v1, const Eigen::VectorXd& v3,
                                     const Eigen::VectorXd& w3, const Eigen::VectorXd& g3_nodal);

PGDSolution fixed_point_block(const StripProblem& p);
PGDSolution fixed_point_block(const CaseSpec& c, const MaterialPlaneStrain& m, const SolverSettings& s);

// Greedy-only solution with k modes.
PGDSolution greedy_solve(const StripProblem& p, int k);
// Append k greedy modes computed against the residual of `current`.
PGDSolution greedy_enrich(const PGDSolution& current, int k);

double strain_energy(const PGDSolution& sol);
double external_work(const PGDSolution& sol);
// ||a - b||_E / ||b||_E
double energy_norm_diff(const SeparatedField& a, const SeparatedField& b, const BilinearForm& form);

struct Displacement {
    double u1 = 0.0;
    double u3 = 0.0;
};
Displacement evaluate_displacement(const PGDSolution& sol, double x1, double x3);

// Midsurface deflection v3(L/2)-style sums used by the error definitions.
double thickness_value(const ThicknessBasis& basis, const Eigen::VectorXd& coeffs, double x3);

void write_mode_dump(const PGDSolution& sol, const std::string& path, int thickness_samples = 21);

}  // namespace pgd_strip
