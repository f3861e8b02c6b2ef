#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pgd_strip/discretization.hpp"
#include "pgd_strip/model.hpp"

namespace pgd_strip {

enum class Component { U1, U3 };

// One separated product: u_comp(x1, x3) = N3(x3)^T thick * N1(x1)^T axial.
struct SeparatedTerm {
    Component comp = Component::U1;
    Eigen::VectorXd thick;
    Eigen::VectorXd axial;
};

using SeparatedField = std::vector<SeparatedTerm>;

SeparatedField difference(const SeparatedField& a, const SeparatedField& b);

// Plane-strain bilinear form and load functional restricted to separated fields,
// evaluated through the operator matrices (sums over term pairs).
class BilinearForm {
public:
    BilinearForm(const OperatorBundle& ops, const MaterialPlaneStrain& mat, Integration integration,
                 const Eigen::VectorXd& g3_nodal);

    Real term(const SeparatedTerm& a, const SeparatedTerm& b) const;
    Real operator()(const SeparatedField& a, const SeparatedField& b) const;
    double energy_norm(const SeparatedField& f) const;
    Real work(const SeparatedTerm& a) const;
    Real work(const SeparatedField& f) const;

    // a(term(ci, ti, x), term(cj, tj, y)) = x^T B y with the thickness factors frozen.
    MatrixXr axial_block(Component ci, const Eigen::VectorXd& ti, Component cj, const Eigen::VectorXd& tj) const;
    // a(term(ci, x, ai), term(cj, y, aj)) = x^T T y with the axial factors frozen.
    MatrixXr thickness_block(Component ci, const Eigen::VectorXd& ai, Component cj, const Eigen::VectorXd& aj) const;

    VectorXr axial_load(Component c, const Eigen::VectorXd& thick) const;
    VectorXr thickness_load(Component c, const Eigen::VectorXd& axial) const;

    const OperatorBundle& ops() const { return ops_; }
    const MaterialPlaneStrain& material() const { return mat_; }

private:
    const OperatorBundle& ops_;
    MaterialPlaneStrain mat_;
    const MatrixXr& ms_;
    VectorXr m1g_;
};

}  // namespace pgd_strip
