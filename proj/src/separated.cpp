#include "pgd_strip/separated.hpp"

#include <cmath>

namespace pgd_strip {

namespace {

VectorXr ext(const Eigen::VectorXd& v) { return v.cast<Real>(); }

// x^T A y in extended precision.
Real form(const Eigen::VectorXd& x, const MatrixXr& A, const Eigen::VectorXd& y) { return ext(x).dot(A * ext(y)); }

}  // namespace

SeparatedField difference(const SeparatedField& a, const SeparatedField& b) {
    SeparatedField out = a;
    for (const auto& t : b) out.push_back({t.comp, t.thick, -t.axial});
    return out;
}

BilinearForm::BilinearForm(const OperatorBundle& ops, const MaterialPlaneStrain& mat, Integration integration,
                           const Eigen::VectorXd& g3_nodal)
    : ops_(ops), mat_(mat), ms_(ops.shear_mass(integration)), m1g_(ops.axial.m1 * ext(g3_nodal)) {}

Real BilinearForm::term(const SeparatedTerm& a, const SeparatedTerm& b) const {
    const auto& A = ops_.axial;
    const auto& T = ops_.thick;
    const Real c11 = mat_.c11, c13 = mat_.c13, c33 = mat_.c33, c55 = mat_.c55;
    if (a.comp == Component::U1 && b.comp == Component::U1) {
        return c11 * form(a.thick, T.m3, b.thick) * form(a.axial, A.k1, b.axial) +
               c55 * form(a.thick, T.k3, b.thick) * form(a.axial, ms_, b.axial);
    }
    if (a.comp == Component::U3 && b.comp == Component::U3) {
        return c33 * form(a.thick, T.k3, b.thick) * form(a.axial, A.m1, b.axial) +
               c55 * form(a.thick, T.m3, b.thick) * form(a.axial, A.k1, b.axial);
    }
    const SeparatedTerm& u = a.comp == Component::U1 ? a : b;
    const SeparatedTerm& w = a.comp == Component::U1 ? b : a;
    return c13 * form(w.thick, T.h3, u.thick) * form(u.axial, A.h1, w.axial) +
           c55 * form(u.thick, T.h3, w.thick) * form(w.axial, A.h1, u.axial);
}

Real BilinearForm::operator()(const SeparatedField& a, const SeparatedField& b) const {
    Real s = 0.0L;
    for (const auto& x : a)
        for (const auto& y : b) s += term(x, y);
    return s;
}

double BilinearForm::energy_norm(const SeparatedField& f) const {
    return static_cast<double>(std::sqrt(std::max(0.0L, (*this)(f, f))));
}

Real BilinearForm::work(const SeparatedTerm& a) const {
    if (a.comp == Component::U1) return 0.0L;
    return ext(a.thick).dot(ops_.thick.f3_trace) * ext(a.axial).dot(m1g_);
}

Real BilinearForm::work(const SeparatedField& f) const {
    Real s = 0.0L;
    for (const auto& t : f) s += work(t);
    return s;
}

MatrixXr BilinearForm::axial_block(Component ci, const Eigen::VectorXd& ti, Component cj,
                                   const Eigen::VectorXd& tj) const {
    const auto& A = ops_.axial;
    const auto& T = ops_.thick;
    const Real c11 = mat_.c11, c13 = mat_.c13, c33 = mat_.c33, c55 = mat_.c55;
    if (ci == Component::U1 && cj == Component::U1)
        return c11 * form(ti, T.m3, tj) * A.k1 + c55 * form(ti, T.k3, tj) * ms_;
    if (ci == Component::U3 && cj == Component::U3)
        return c33 * form(ti, T.k3, tj) * A.m1 + c55 * form(ti, T.m3, tj) * A.k1;
    if (ci == Component::U1)
        return c13 * form(tj, T.h3, ti) * A.h1 + c55 * form(ti, T.h3, tj) * A.h1.transpose();
    return axial_block(cj, tj, ci, ti).transpose();
}

MatrixXr BilinearForm::thickness_block(Component ci, const Eigen::VectorXd& ai, Component cj,
                                       const Eigen::VectorXd& aj) const {
    const auto& A = ops_.axial;
    const auto& T = ops_.thick;
    const Real c11 = mat_.c11, c13 = mat_.c13, c33 = mat_.c33, c55 = mat_.c55;
    if (ci == Component::U1 && cj == Component::U1)
        return c11 * form(ai, A.k1, aj) * T.m3 + c55 * form(ai, ms_, aj) * T.k3;
    if (ci == Component::U3 && cj == Component::U3)
        return c33 * form(ai, A.m1, aj) * T.k3 + c55 * form(ai, A.k1, aj) * T.m3;
    if (ci == Component::U1)
        return c13 * form(ai, A.h1, aj) * T.h3.transpose() + c55 * form(aj, A.h1, ai) * T.h3;
    return thickness_block(cj, aj, ci, ai).transpose();
}

VectorXr BilinearForm::axial_load(Component c, const Eigen::VectorXd& thick) const {
    if (c == Component::U1) return VectorXr::Zero(ops_.mesh.n_dofs());
    return ext(thick).dot(ops_.thick.f3_trace) * m1g_;
}

VectorXr BilinearForm::thickness_load(Component c, const Eigen::VectorXd& axial) const {
    if (c == Component::U1) return VectorXr::Zero(ops_.basis.size());
    return ext(axial).dot(m1g_) * ops_.thick.f3_trace;
}

}  // namespace pgd_strip
