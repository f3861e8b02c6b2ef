#include "pgd_strip/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace pgd_strip {

std::string to_string(ReferenceKind k) {
    switch (k) {
        case ReferenceKind::KL: return "KL";
        case ReferenceKind::Fine2D: return "Fine2D";
        case ReferenceKind::Asymptotic: return "Asymptotic";
        case ReferenceKind::LimitODE: return "LimitODE";
    }
    return "?";
}

double midsurface_deflection(const PGDSolution& sol, bool include_block_correction) {
    const auto& ops = *sol.ops;
    const double xc = 0.5 * sol.strip.length;
    double w = 0.0;
    if (sol.block) {
        w += eval_axial(ops.mesh, sol.block->v3, xc).value;
        if (include_block_correction)
            w += thickness_value(ops.basis, sol.block->s3, 0.0) * eval_axial(ops.mesh, sol.block->w3, xc).value;
    }
    for (const auto& g : sol.extras) w += thickness_value(ops.basis, g.r3, 0.0) * eval_axial(ops.mesh, g.v3, xc).value;
    return w;
}

DeflectionErrors deflection_errors(const PGDSolution& sol, double ref_center) {
    if (ref_center == 0.0 || !std::isfinite(ref_center)) throw std::invalid_argument("reference deflection must be nonzero");
    DeflectionErrors e;
    e.err1 = std::abs(midsurface_deflection(sol, false) - ref_center) / std::abs(ref_center);
    e.err2 = std::abs(midsurface_deflection(sol, true) - ref_center) / std::abs(ref_center);
    return e;
}

double energy_error(double E, double E_ref) {
    if (!(E_ref > 0.0)) throw std::invalid_argument("reference energy must be positive");
    return std::abs(E - E_ref) / E_ref;
}

KinematicsDiagnostics kinematics_diagnostics(const PGDSolution& sol) {
    const auto& ops = *sol.ops;
    const auto& basis = ops.basis;
    Eigen::VectorXd r1, v1, v3, r3;
    if (sol.block) {
        r1 = sol.block->r1;
        v1 = sol.block->v1;
        v3 = sol.block->v3;
        r3 = ops.thick.r3_const;
    } else if (!sol.extras.empty()) {
        r1 = sol.extras.front().r1;
        v1 = sol.extras.front().v1;
        v3 = sol.extras.front().v3;
        r3 = sol.extras.front().r3;
    } else {
        throw std::invalid_argument("kinematics diagnostics need a solved mode");
    }
    const Eigen::MatrixXd M = ops.thick.m3.cast<double>();
    KinematicsDiagnostics d;

    // L2 projection of r1 on span{1, x3}.
    const int i0 = basis.index_of_power(0), i1 = basis.index_of_power(1);
    Eigen::Matrix2d G;
    G << M(i1, i1), M(i1, i0), M(i0, i1), M(i0, i0);
    const Eigen::VectorXd Mr = M * r1;
    const Eigen::Vector2d fit = G.ldlt().solve(Eigen::Vector2d(Mr[i1], Mr[i0]));
    Eigen::VectorXd res = r1;
    res[i1] -= fit[0];
    res[i0] -= fit[1];
    const double nr = std::sqrt(r1.dot(M * r1));
    d.r1_linearity_residual = nr > 0.0 ? std::sqrt(std::max(0.0, res.dot(M * res))) / nr : 0.0;

    // u1 ~ x3 (c v1) and u3 ~ rbar v3 with rbar the mean of r3 over the thickness.
    const double c = fit[0];
    const double rbar = Eigen::VectorXd(M.col(i0)).dot(r3) / basis.thickness;
    double num = 0.0, den = 0.0;
    for_each_axial_point(ops.mesh, full_points(ops.mesh.order), [&](const AxialPoint& p) {
        double a = 0.0, b = 0.0;
        for (std::size_t k = 0; k < p.dofs->size(); ++k) {
            a += p.N[k] * v1[(*p.dofs)[k]];
            b += p.dN[k] * v3[(*p.dofs)[k]];
        }
        num = std::max(num, std::abs(c * a + rbar * b));
        den = std::max(den, std::abs(rbar * b));
    });
    d.shear_constraint_residual = den > 0.0 ? num / den : 0.0;

    if (sol.block) {
        const auto& s3 = sol.block->s3;
        d.s3_scaled.resize(basis.size());
        double best = -1.0;
        for (int k = 0; k <= basis.degree; ++k) {
            d.s3_scaled[k] = std::abs(s3[basis.index_of_power(k)]) * std::pow(0.5 * basis.thickness, k);
            if (d.s3_scaled[k] > best) {
                best = d.s3_scaled[k];
                d.s3_dominant_power = k;
            }
        }
    }
    return d;
}

}  // namespace pgd_strip
