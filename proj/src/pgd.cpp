#include "pgd_strip/pgd.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <stdexcept>

namespace pgd_strip {

namespace {

std::vector<bool> dirichlet_pattern(const Mesh1D& mesh, BoundaryKind bc, Component c) {
    std::vector<bool> fixed(mesh.n_dofs(), false);
    if (c == Component::U3 || bc == BoundaryKind::Clamped) {
        fixed.front() = true;
        fixed.back() = true;
    }
    return fixed;
}

struct Frozen {
    Component comp;
    Eigen::VectorXd factor;
};

// Solve for the axial factors of `unknowns` with the thickness factors frozen,
// testing against the load minus the action of the fixed field Z.
std::vector<Eigen::VectorXd> solve_axial(const BilinearForm& form, BoundaryKind bc, const std::vector<Frozen>& unknowns,
                                         const SeparatedField& Z, double* residual) {
    const int n = form.ops().mesh.n_dofs();
    const int k = static_cast<int>(unknowns.size());
    MatrixXr A(k * n, k * n);
    VectorXr b(k * n);
    std::vector<bool> fixed;
    for (int i = 0; i < k; ++i) {
        const auto& ui = unknowns[i];
        for (int j = i; j < k; ++j) {
            const MatrixXr B = form.axial_block(ui.comp, ui.factor, unknowns[j].comp, unknowns[j].factor);
            A.block(i * n, j * n, n, n) = B;
            if (j != i) A.block(j * n, i * n, n, n) = B.transpose();
        }
        VectorXr rhs = form.axial_load(ui.comp, ui.factor);
        for (const auto& z : Z)
            rhs -= form.axial_block(ui.comp, ui.factor, z.comp, z.thick) * z.axial.cast<Real>();
        b.segment(i * n, n) = rhs;
        const auto f = dirichlet_pattern(form.ops().mesh, bc, ui.comp);
        fixed.insert(fixed.end(), f.begin(), f.end());
    }
    LinearSolveInfo info;
    const VectorXr x = solve_spd_constrained(A, b, fixed, &info);
    if (residual) *residual = info.relative_residual;
    std::vector<Eigen::VectorXd> out;
    for (int i = 0; i < k; ++i) out.push_back(x.segment(i * n, n).cast<double>());
    return out;
}

std::vector<Eigen::VectorXd> solve_thickness(const BilinearForm& form, const std::vector<Frozen>& unknowns,
                                             const SeparatedField& Z, double* residual) {
    const int n = form.ops().basis.size();
    const int k = static_cast<int>(unknowns.size());
    MatrixXr A(k * n, k * n);
    VectorXr b(k * n);
    for (int i = 0; i < k; ++i) {
        const auto& ui = unknowns[i];
        for (int j = i; j < k; ++j) {
            const MatrixXr T = form.thickness_block(ui.comp, ui.factor, unknowns[j].comp, unknowns[j].factor);
            A.block(i * n, j * n, n, n) = T;
            if (j != i) A.block(j * n, i * n, n, n) = T.transpose();
        }
        VectorXr rhs = form.thickness_load(ui.comp, ui.factor);
        for (const auto& z : Z)
            rhs -= form.thickness_block(ui.comp, ui.factor, z.comp, z.axial) * z.thick.cast<Real>();
        b.segment(i * n, n) = rhs;
    }
    LinearSolveInfo info;
    const VectorXr x = solve_spd(A, b, &info);
    if (residual) *residual = info.relative_residual;
    std::vector<Eigen::VectorXd> out;
    for (int i = 0; i < k; ++i) out.push_back(x.segment(i * n, n).cast<double>());
    return out;
}

double l2_norm(const OperatorBundle& ops, const Eigen::VectorXd& r) {
    const VectorXr x = r.cast<Real>();
    return static_cast<double>(std::sqrt(x.dot(ops.thick.m3 * x)));
}

Eigen::VectorXd normalized(const OperatorBundle& ops, const Eigen::VectorXd& r) {
    const double n = l2_norm(ops, r);
    if (!(n > 0.0)) throw SolverError("cannot normalize a vanishing thickness function");
    return r / n;
}

Eigen::VectorXd monomial(const ThicknessBasis& basis, int power) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(basis.size());
    r[basis.index_of_power(power)] = 1.0;
    return r;
}

Eigen::VectorXd random_thickness(const ThicknessBasis& basis, std::mt19937_64& rng) {
    // Coefficients drawn in the scaled variable 2 x3 / t.
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXd r(basis.size());
    for (int k = 0; k <= basis.degree; ++k)
        r[basis.index_of_power(k)] = nd(rng) * std::pow(2.0 / basis.thickness, k);
    return r;
}

// Keeps the growth counter for the divergence rule.
struct ChangeTracker {
    FixedPointReport& rep;
    double eta;
    int growth = 0;

    // Returns true when the iteration should stop.
    bool push(double change) {
        if (!rep.per_iteration_change.empty() && change > rep.per_iteration_change.back()) ++growth;
        else growth = 0;
        rep.per_iteration_change.push_back(change);
        rep.final_rel_change = change;
        if (change < eta) {
            rep.converged = true;
            return true;
        }
        if (growth >= 5) {
            rep.diverged = true;
            return true;
        }
        return false;
    }
};

bool zero_load(const StripProblem& p) { return p.strip.load_amplitude == 0.0 || p.g3.lpNorm<Eigen::Infinity>() == 0.0; }

void check_normalization(const OperatorBundle& ops, Eigen::VectorXd& r, bool normalize) {
    if (normalize) r = normalized(ops, r);
    else if (!(l2_norm(ops, r) > 0.0)) throw SolverError("vanishing thickness function");
}

}  // namespace

StripProblem StripProblem::make(const CaseSpec& c, const MaterialPlaneStrain& m, const SolverSettings& s) {
    StripProblem p;
    p.strip = c;
    p.material = m;
    p.settings = s;
    p.ops = std::make_shared<const OperatorBundle>(build_operators(c, s));
    p.g3 = interpolate_load(p.ops->mesh, c);
    return p;
}

std::vector<bool> StripProblem::fixed_dofs(Component c) const { return dirichlet_pattern(ops->mesh, strip.bc, c); }

SeparatedField block_field(const BlockMode& b, const OperatorBundle& ops) {
    return {{Component::U1, b.r1, b.v1}, {Component::U3, ops.thick.r3_const, b.v3}, {Component::U3, b.s3, b.w3}};
}

SeparatedField greedy_field(const GreedyMode& g) {
    return {{Component::U1, g.r1, g.v1}, {Component::U3, g.r3, g.v3}};
}

SeparatedField PGDSolution::field() const {
    SeparatedField f;
    if (block) f = block_field(*block, *ops);
    for (const auto& g : extras) {
        const auto gf = greedy_field(g);
        f.insert(f.end(), gf.begin(), gf.end());
    }
    return f;
}

int PGDSolution::total_iterations() const {
    int n = block ? report.iterations : 0;
    for (const auto& g : extras) n += g.report.iterations;
    return n;
}

bool PGDSolution::converged() const {
    if (block && !report.converged) return false;
    for (const auto& g : extras)
        if (!g.report.converged) return false;
    return true;
}

InplaneResult solve_inplane_step(const OperatorBundle& ops, const MaterialPlaneStrain& mat, const CaseSpec& c,
                                 Integration integration, const Eigen::VectorXd& r1, const Eigen::VectorXd& s3,
                                 const Eigen::VectorXd& g3_nodal) {
    const BilinearForm form(ops, mat, integration, g3_nodal);
    InplaneResult res;
    const auto x = solve_axial(form, c.bc,
                               {{Component::U1, r1}, {Component::U3, ops.thick.r3_const}, {Component::U3, s3}}, {},
                               &res.relative_residual);
    res.v1 = x[0];
    res.v3 = x[1];
    res.w3 = x[2];
    return res;
}

ThicknessResult solve_thickness_step(const OperatorBundle& ops, const MaterialPlaneStrain& mat,
                                     Integration integration, const Eigen::VectorXd& v1, const Eigen::VectorXd& v3,
                                     const Eigen::VectorXd& w3, const Eigen::VectorXd& g3_nodal) {
    const BilinearForm form(ops, mat, integration, g3_nodal);
    ThicknessResult res;
    const auto x = solve_thickness(form, {{Component::U1, v1}, {Component::U3, w3}},
                                   {{Component::U3, ops.thick.r3_const, v3}}, &res.relative_residual);
    res.r1 = x[0];
    res.s3 = x[1];
    return res;
}

PGDSolution fixed_point_block(const StripProblem& p) {
    p.settings.validate();
    const OperatorBundle& ops = *p.ops;
    const int n = ops.mesh.n_dofs();
    PGDSolution sol;
    sol.strip = p.strip;
    sol.settings = p.settings;
    sol.material = p.material;
    sol.ops = p.ops;
    sol.g3 = p.g3;

    BlockMode b;
    if (p.settings.initial_guess == InitialGuess::Random) {
        std::mt19937_64 rng(p.settings.seed);
        b.r1 = random_thickness(ops.basis, rng);
        b.s3 = random_thickness(ops.basis, rng);
    } else {
        b.r1 = monomial(ops.basis, 1);
        b.s3 = monomial(ops.basis, 2) - ops.basis.thickness * ops.basis.thickness / 12.0 * ops.thick.r3_const;
    }
    b.r1 = normalized(ops, b.r1);
    b.s3 = normalized(ops, b.s3);

    if (zero_load(p)) {
        b.v1 = b.v3 = b.w3 = Eigen::VectorXd::Zero(n);
        sol.block = b;
        sol.report.iterations = 1;
        sol.report.converged = true;
        sol.report.per_iteration_change = {0.0};
        return sol;
    }

    const BilinearForm form = p.form();
    auto inplane = [&](BlockMode& m) {
        const auto r = solve_inplane_step(ops, p.material, p.strip, p.settings.integration, m.r1, m.s3, p.g3);
        m.v1 = r.v1;
        m.v3 = r.v3;
        m.w3 = r.w3;
        sol.report.max_linear_residual = std::max(sol.report.max_linear_residual, r.relative_residual);
    };
    inplane(b);
    SeparatedField prev = block_field(b, ops);
    ChangeTracker tracker{sol.report, p.settings.fp_tolerance};
    for (int it = 1; it <= p.settings.fp_max_iters; ++it) {
        const auto th = solve_thickness_step(ops, p.material, p.settings.integration, b.v1, b.v3, b.w3, p.g3);
        sol.report.max_linear_residual = std::max(sol.report.max_linear_residual, th.relative_residual);
        b.r1 = th.r1;
        b.s3 = th.s3;
        check_normalization(ops, b.r1, p.settings.normalize);
        check_normalization(ops, b.s3, p.settings.normalize);
        inplane(b);
        SeparatedField cur = block_field(b, ops);
        const double change = energy_norm_diff(cur, prev, form);
        sol.report.iterations = it;
        prev = std::move(cur);
        if (tracker.push(change)) break;
    }
    sol.block = b;
    return sol;
}

PGDSolution fixed_point_block(const CaseSpec& c, const MaterialPlaneStrain& m, const SolverSettings& s) {
    return fixed_point_block(StripProblem::make(c, m, s));
}

namespace {

GreedyMode compute_greedy_mode(const PGDSolution& base, const SeparatedField& Z) {
    const OperatorBundle& ops = *base.ops;
    const SolverSettings& s = base.settings;
    const BilinearForm form = base.form();
    GreedyMode g;
    if (s.initial_guess == InitialGuess::Random) {
        std::mt19937_64 rng(s.seed + 7919 * (base.extras.size() + 1));
        g.r1 = random_thickness(ops.basis, rng);
        g.r3 = random_thickness(ops.basis, rng);
    } else {
        g.r1 = monomial(ops.basis, 1);
        g.r3 = ops.thick.r3_const;
    }
    g.r1 = normalized(ops, g.r1);
    g.r3 = normalized(ops, g.r3);

    auto inplane = [&]() {
        double res = 0.0;
        const auto x = solve_axial(form, base.strip.bc, {{Component::U1, g.r1}, {Component::U3, g.r3}}, Z, &res);
        g.v1 = x[0];
        g.v3 = x[1];
        g.report.max_linear_residual = std::max(g.report.max_linear_residual, res);
    };

    const double zref = form.energy_norm(Z);
    auto vanishing = [&](const SeparatedField& f) {
        const double e = form.energy_norm(f);
        return e == 0.0 || e <= 1e-12 * std::max(zref, e);
    };

    inplane();
    SeparatedField prev = greedy_field(g);
    if (vanishing(prev)) {
        g.zero_mode = true;
        g.v1.setZero();
        g.v3.setZero();
        g.report.iterations = 1;
        g.report.converged = true;
        g.report.per_iteration_change = {0.0};
        return g;
    }
    ChangeTracker tracker{g.report, s.fp_tolerance};
    for (int it = 1; it <= s.fp_max_iters; ++it) {
        double res = 0.0;
        const auto th = solve_thickness(form, {{Component::U1, g.v1}, {Component::U3, g.v3}}, Z, &res);
        g.report.max_linear_residual = std::max(g.report.max_linear_residual, res);
        g.r1 = th[0];
        g.r3 = th[1];
        check_normalization(ops, g.r1, s.normalize);
        check_normalization(ops, g.r3, s.normalize);
        inplane();
        SeparatedField cur = greedy_field(g);
        const double change = energy_norm_diff(cur, prev, form);
        g.report.iterations = it;
        prev = std::move(cur);
        if (tracker.push(change)) break;
    }
    return g;
}

}  // namespace

PGDSolution greedy_enrich(const PGDSolution& current, int k) {
    if (k < 1) throw std::invalid_argument("greedy_enrich needs k >= 1");
    PGDSolution sol = current;
    for (int i = 0; i < k; ++i) {
        const SeparatedField Z = sol.field();
        GreedyMode g = compute_greedy_mode(sol, Z);
        const bool first = !sol.block && sol.extras.empty();
        sol.extras.push_back(std::move(g));
        if (first) sol.report = sol.extras.front().report;
    }
    return sol;
}

PGDSolution greedy_solve(const StripProblem& p, int k) {
    p.settings.validate();
    PGDSolution sol;
    sol.strip = p.strip;
    sol.settings = p.settings;
    sol.material = p.material;
    sol.ops = p.ops;
    sol.g3 = p.g3;
    return greedy_enrich(sol, k);
}

double strain_energy(const PGDSolution& sol) {
    const auto f = sol.field();
    return static_cast<double>(0.5L * sol.form()(f, f));
}

double external_work(const PGDSolution& sol) { return static_cast<double>(sol.form().work(sol.field())); }

double energy_norm_diff(const SeparatedField& a, const SeparatedField& b, const BilinearForm& form) {
    const double nb = form.energy_norm(b);
    if (!(nb > 0.0)) throw SolverError("energy norm of the reference iterate vanishes");
    return form.energy_norm(difference(a, b)) / nb;
}

double thickness_value(const ThicknessBasis& basis, const Eigen::VectorXd& coeffs, double x3) {
    return basis.values(x3).dot(coeffs);
}

Displacement evaluate_displacement(const PGDSolution& sol, double x1, double x3) {
    const double h = 0.5 * sol.strip.thickness;
    const double L = sol.strip.length;
    if (!(x1 >= 0.0 && x1 <= L) || !(x3 >= -h && x3 <= h)) throw std::invalid_argument("point outside the strip");
    const auto& ops = *sol.ops;
    const Eigen::VectorXd N3 = ops.basis.values(x3);
    Displacement d;
    for (const auto& t : sol.field()) {
        const double v = N3.dot(t.thick) * eval_axial(ops.mesh, t.axial, x1).value;
        (t.comp == Component::U1 ? d.u1 : d.u3) += v;
    }
    return d;
}

void write_mode_dump(const PGDSolution& sol, const std::string& path, int thickness_samples) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open mode dump file '" + path + "'");
    const auto& ops = *sol.ops;
    out << std::setprecision(12) << std::scientific;
    out << "# case " << sol.strip.id() << " slenderness " << sol.strip.slenderness() << '\n';
    const double h = 0.5 * sol.strip.thickness;
    auto x3_at = [&](int i) { return -h + 2.0 * h * i / (thickness_samples - 1); };
    if (sol.block) {
        const auto& b = *sol.block;
        out << "# axial: x1 v1 v3 w3\n";
        for (int i = 0; i < ops.mesh.n_dofs(); ++i)
            out << ops.mesh.nodes[i] << ' ' << b.v1[i] << ' ' << b.v3[i] << ' ' << b.w3[i] << '\n';
        out << "\n# thickness: x3 r1 s3\n";
        for (int i = 0; i < thickness_samples; ++i) {
            const double x3 = x3_at(i);
            out << x3 << ' ' << thickness_value(ops.basis, b.r1, x3) << ' ' << thickness_value(ops.basis, b.s3, x3)
                << '\n';
        }
    }
    for (std::size_t k = 0; k < sol.extras.size(); ++k) {
        const auto& g = sol.extras[k];
        out << "\n# greedy " << k + 1 << " axial: x1 v1 v3\n";
        for (int i = 0; i < ops.mesh.n_dofs(); ++i) out << ops.mesh.nodes[i] << ' ' << g.v1[i] << ' ' << g.v3[i] << '\n';
        out << "\n# greedy " << k + 1 << " thickness: x3 r1 r3\n";
        for (int i = 0; i < thickness_samples; ++i) {
            const double x3 = x3_at(i);
            out << x3 << ' ' << thickness_value(ops.basis, g.r1, x3) << ' ' << thickness_value(ops.basis, g.r3, x3)
                << '\n';
        }
    }
    if (!out) throw std::runtime_error("failed writing mode dump '" + path + "'");
}

}  // namespace pgd_strip
