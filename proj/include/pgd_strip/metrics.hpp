#pragma once

#include <Eigen/Dense>
#include <string>

#include "pgd_strip/pgd.hpp"

namespace pgd_strip {

enum class ReferenceKind { KL, Fine2D, Asymptotic, LimitODE };
std::string to_string(ReferenceKind k);

// u3(L/2, 0): block v3 (+ s3(0) w3 when requested) plus r3k(0) v3k over greedy modes.
double midsurface_deflection(const PGDSolution& sol, bool include_block_correction);

struct DeflectionErrors {
    double err1 = 0.0;  // without the block correction s3(0) w3(L/2)
    double err2 = 0.0;
};

DeflectionErrors deflection_errors(const PGDSolution& sol, double ref_center);
double energy_error(double E, double E_ref);

struct KinematicsDiagnostics {
    double r1_linearity_residual = 0.0;     // ||r1 - linear fit|| / ||r1|| in L2(-t/2, t/2)
    double shear_constraint_residual = 0.0; // max|c v1 + v3'| / max|v3'|, c the slope of the fit
    Eigen::VectorXd s3_scaled;              // |coefficient of x3^k| (t/2)^k, indexed by power k
    int s3_dominant_power = -1;
};

// Diagnostics of the block mode, or of the first greedy mode when there is no block.
KinematicsDiagnostics kinematics_diagnostics(const PGDSolution& sol);

struct ConvergenceRecord {
    std::string case_id;
    double slenderness = 0.0;
    std::string n_modes;  // strategy label: greedy-k, block-2, block-2+greedy-k, asymptotic, limit-ode
    std::string integration;
    ReferenceKind reference = ReferenceKind::KL;
    double defl_err_1 = 0.0;
    double defl_err_2 = 0.0;
    double energy_err = 0.0;
    int fp_iterations = 0;
    double runtime_ms = 0.0;
    std::string status = "ok";
    // Signed deflection ratio w / w_ref (err2 form); not serialized.
    double normalized_deflection = 0.0;
};

}  // namespace pgd_strip
