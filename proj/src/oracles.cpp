#include "pgd_strip/oracles.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pgd_strip/discretization.hpp"
#include "pgd_strip/linalg.hpp"

namespace pgd_strip {

using std::numbers::pi;

KLSolution kl_solution(const CaseSpec& c, const MaterialPlaneStrain& m) {
    c.validate();
    const double L = c.length, t = c.thickness, nu = m.poisson_ratio;
    const double D = m.young_modulus * t * t * t / (12.0 * (1.0 - nu * nu));
    const double p = 2.0 * c.load_amplitude;
    KLSolution s;
    s.bending_stiffness = D;
    s.line_load = p;
    const double q = pi / L;

    if (c.load == LoadKind::Sinus) {
        const double k = p / (std::pow(q, 4) * D);
        if (c.bc == BoundaryKind::SimplySupported) {
            s.w = [=](double x) { return k * std::sin(q * x); };
            s.dw = [=](double x) { return k * q * std::cos(q * x); };
            s.d2w = [=](double x) { return -k * q * q * std::sin(q * x); };
            s.d3w = [=](double x) { return -k * q * q * q * std::cos(q * x); };
            s.w_center = k;
            s.energy = p * k * L / 4.0;
        } else {
            // Sine particular solution plus the even quadratic fixing w = w' = 0 at both ends.
            const double h = 0.5 * L;
            s.w = [=](double x) { return k * (std::sin(q * x) - pi / 4.0 + pi * (x - h) * (x - h) / (L * L)); };
            s.dw = [=](double x) { return k * (q * std::cos(q * x) + 2.0 * pi * (x - h) / (L * L)); };
            s.d2w = [=](double x) { return k * (-q * q * std::sin(q * x) + 2.0 * pi / (L * L)); };
            s.d3w = [=](double x) { return -k * q * q * q * std::cos(q * x); };
            s.w_center = k * (1.0 - pi / 4.0);
            s.energy = 0.5 * p * k * L * (0.5 - 4.0 / (pi * pi));
        }
    } else {
        const double a = p / (24.0 * D);
        if (c.bc == BoundaryKind::SimplySupported) {
            s.w = [=](double x) { return a * (L * L * L * x - 2.0 * L * x * x * x + x * x * x * x); };
            s.dw = [=](double x) { return a * (L * L * L - 6.0 * L * x * x + 4.0 * x * x * x); };
            s.d2w = [=](double x) { return a * (12.0 * x * x - 12.0 * L * x); };
            s.d3w = [=](double x) { return a * (24.0 * x - 12.0 * L); };
            s.w_center = 5.0 * p * std::pow(L, 4) / (384.0 * D);
            s.energy = p * p * std::pow(L, 5) / (240.0 * D);
        } else {
            s.w = [=](double x) { return a * x * x * (L - x) * (L - x); };
            s.dw = [=](double x) { return 2.0 * a * x * (L - x) * (L - 2.0 * x); };
            s.d2w = [=](double x) { return 2.0 * a * (L * L - 6.0 * L * x + 6.0 * x * x); };
            s.d3w = [=](double x) { return a * (24.0 * x - 12.0 * L); };
            s.w_center = p * std::pow(L, 4) / (384.0 * D);
            s.energy = p * p * std::pow(L, 5) / (1440.0 * D);
        }
    }
    return s;
}

namespace {

double corrector_ratio(const MaterialPlaneStrain& m) { return m.c13 / m.c33; }

}  // namespace

AsymptoticField asymptotic_solution(const CaseSpec& c, const MaterialPlaneStrain& m, double x1, double x3) {
    const double h = 0.5 * c.thickness;
    if (!(x1 >= 0.0 && x1 <= c.length) || !(x3 >= -h && x3 <= h)) throw std::invalid_argument("point outside the strip");
    const KLSolution kl = kl_solution(c, m);
    const double t = c.thickness;
    AsymptoticField f;
    f.u1 = -x3 * kl.dw(x1);
    f.u3 = kl.w(x1) + 0.5 * (x3 * x3 - t * t / 12.0) * corrector_ratio(m) * kl.d2w(x1);
    return f;
}

double asymptotic_center_deflection(const CaseSpec& c, const MaterialPlaneStrain& m) {
    return asymptotic_solution(c, m, 0.5 * c.length, 0.0).u3;
}

double asymptotic_energy(const CaseSpec& c, const MaterialPlaneStrain& m) {
    const KLSolution kl = kl_solution(c, m);
    const double t = c.thickness, L = c.length, rho = corrector_ratio(m);
    // Strains: e11 = -x3 w'', e33 = x3 rho w'', g13 = 0.5 (x3^2 - t^2/12) rho w'''.
    const QuadratureRule qz = gauss_legendre(4);
    const QuadratureRule qx = gauss_legendre(8);
    const int nseg = 64;
    double e = 0.0;
    for (int s = 0; s < nseg; ++s) {
        const double xa = L * s / nseg, hx = 0.5 * L / nseg;
        for (std::size_t i = 0; i < qx.points.size(); ++i) {
            const double x = xa + hx * (1.0 + qx.points[i]);
            const double w2 = kl.d2w(x), w3 = kl.d3w(x);
            for (std::size_t j = 0; j < qz.points.size(); ++j) {
                const double z = 0.5 * t * qz.points[j];
                const double e11 = -z * w2, e33 = z * rho * w2, g = 0.5 * (z * z - t * t / 12.0) * rho * w3;
                const double dens = m.c11 * e11 * e11 + 2.0 * m.c13 * e11 * e33 + m.c33 * e33 * e33 + m.c55 * g * g;
                e += qx.weights[i] * hx * qz.weights[j] * 0.5 * t * dens;
            }
        }
    }
    return 0.5 * e;
}

LimitOdeProblem LimitOdeProblem::isotropic(double nu, BoundaryKind bc, LoadKind load) {
    if (!(nu > -1.0) || !(nu < 0.5)) throw ModelError("Poisson ratio must lie in (-1, 0.5)");
    LimitOdeProblem p;
    p.a_coeff = (1.0 - nu) / (12.0 * (1.0 + nu) * (1.0 - 2.0 * nu));
    p.b_coeff = nu * nu / (12.0 * (1.0 - nu * nu) * (1.0 - 2.0 * nu));
    p.bc = bc;
    if (load == LoadKind::Sinus) p.scaled_load = [](double x) { return std::sin(pi * x); };
    else p.scaled_load = [](double) { return 1.0; };
    return p;
}

LimitOdeProblem LimitOdeProblem::kirchhoff_love() const {
    LimitOdeProblem p = *this;
    p.a_coeff = a_coeff - b_coeff;
    p.b_coeff = 0.0;
    return p;
}

namespace {

// Hermite cubic shape functions on [0, h]: (value_l, slope_l, value_r, slope_r).
void hermite(double s, double h, double N[4], double dN[4], double d2N[4]) {
    const double s2 = s * s, s3 = s2 * s;
    N[0] = 1 - 3 * s2 + 2 * s3;
    N[1] = h * (s - 2 * s2 + s3);
    N[2] = 3 * s2 - 2 * s3;
    N[3] = h * (-s2 + s3);
    dN[0] = (-6 * s + 6 * s2) / h;
    dN[1] = 1 - 4 * s + 3 * s2;
    dN[2] = (6 * s - 6 * s2) / h;
    dN[3] = -2 * s + 3 * s2;
    d2N[0] = (-6 + 12 * s) / (h * h);
    d2N[1] = (-4 + 6 * s) / h;
    d2N[2] = (6 - 12 * s) / (h * h);
    d2N[3] = (-2 + 6 * s) / h;
}

}  // namespace

double LimitOdeSolution::value(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("x outside (0, 1)");
    const int ne = static_cast<int>(nodes.size()) - 1;
    int e = std::min(ne - 1, static_cast<int>(x * ne));
    while (e > 0 && nodes[e] > x) --e;
    while (e < ne - 1 && nodes[e + 1] < x) ++e;
    const double h = nodes[e + 1] - nodes[e];
    double N[4], dN[4], d2N[4];
    hermite((x - nodes[e]) / h, h, N, dN, d2N);
    double v = 0.0;
    for (int k = 0; k < 4; ++k) v += N[k] * w[2 * e + k];
    return v;
}

LimitOdeSolution solve_limit_ode(const LimitOdeProblem& p, int n_elems, int max_iters) {
    if (n_elems < 4) throw std::invalid_argument("limit ODE needs at least 4 elements");
    if (!(p.a_coeff > 0.0) || p.b_coeff < 0.0) throw std::invalid_argument("invalid limit ODE coefficients");
    const int nd = 2 * (n_elems + 1);
    Eigen::MatrixXd K2 = Eigen::MatrixXd::Zero(nd, nd), K1 = K2, M = K2;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(nd);
    LimitOdeSolution sol;
    for (int i = 0; i <= n_elems; ++i) sol.nodes.push_back(static_cast<double>(i) / n_elems);
    const QuadratureRule q = gauss_legendre(6);
    for (int e = 0; e < n_elems; ++e) {
        const double xa = sol.nodes[e], h = sol.nodes[e + 1] - xa;
        for (std::size_t g = 0; g < q.points.size(); ++g) {
            const double s = 0.5 * (1.0 + q.points[g]);
            const double wt = 0.5 * h * q.weights[g];
            double N[4], dN[4], d2N[4];
            hermite(s, h, N, dN, d2N);
            const double load = p.scaled_load(xa + s * h);
            for (int i = 0; i < 4; ++i) {
                f[2 * e + i] += wt * load * N[i];
                for (int j = 0; j < 4; ++j) {
                    K2(2 * e + i, 2 * e + j) += wt * d2N[i] * d2N[j];
                    K1(2 * e + i, 2 * e + j) += wt * dN[i] * dN[j];
                    M(2 * e + i, 2 * e + j) += wt * N[i] * N[j];
                }
            }
        }
    }
    std::vector<bool> fixed(nd, false);
    fixed[0] = fixed[nd - 2] = true;
    if (p.bc == BoundaryKind::Clamped) fixed[1] = fixed[nd - 1] = true;

    // Weak form a w''v'' + 2 b mu w'v' + b mu^2 w v; SPD since it equals
    // (a - b)|w''|^2 + b|w'' - mu w|^2 on the constrained space.
    auto solve_for = [&](double mu) {
        const Eigen::MatrixXd A = p.a_coeff * K2 + 2.0 * p.b_coeff * mu * K1 + p.b_coeff * mu * mu * M;
        return solve_spd_constrained(A, f, fixed);
    };
    auto ratio = [&](const Eigen::VectorXd& w) {
        const double den = w.dot(M * w);
        return den > 0.0 ? -w.dot(K1 * w) / den : 0.0;
    };

    double mu = 0.0;
    Eigen::VectorXd w = solve_for(mu);
    mu = ratio(w);
    sol.mu_trace.push_back(mu);
    bool damped = false;
    double last_delta = 0.0;
    for (int it = 1; it <= max_iters; ++it) {
        w = solve_for(mu);
        const double target = ratio(w);
        double delta = target - mu;
        if (it > 1 && delta * last_delta < 0.0) damped = true;
        if (damped) delta *= 0.5;
        const double next = mu + delta;
        sol.iterations = it;
        const bool done = mu == 0.0 ? next == 0.0 : std::abs(next - mu) < 1e-10 * std::abs(mu);
        mu = next;
        last_delta = delta;
        sol.mu_trace.push_back(mu);
        if (done || p.b_coeff == 0.0) {
            sol.converged = true;
            break;
        }
    }
    if (!sol.converged) throw SolverError("limit ODE: mu iteration did not converge");
    sol.w = solve_for(mu);
    sol.mu = mu;
    sol.w_center = sol.value(0.5);
    return sol;
}

}  // namespace pgd_strip
