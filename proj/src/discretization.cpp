#include "pgd_strip/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pgd_strip {

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss rule needs at least one point");
    QuadratureRule q;
    q.points.resize(n);
    q.weights.resize(n);
    // Newton on P_n; roots come in +- pairs.
    auto legendre = [n](Real x, Real& p_prev) {
        Real p0 = 1.0L, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const Real p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        p_prev = p0;
        return p1;
    };
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        Real x = std::cos(std::numbers::pi_v<Real> * (i + 0.75L) / (n + 0.5L));
        for (int it = 0; it < 100; ++it) {
            Real p0;
            const Real p1 = legendre(x, p0);
            const Real dp = n * (x * p1 - p0) / (x * x - 1.0L);
            const Real dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L) break;
        }
        Real p0;
        const Real p1 = legendre(x, p0);
        const Real dp = n * (x * p1 - p0) / (x * x - 1.0L);
        const Real w = 2.0L / ((1.0L - x * x) * dp * dp);
        q.points[i] = -x;
        q.points[n - 1 - i] = x;
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) q.points[n / 2] = 0.0L;
    return q;
}

void Mesh1D::validate() const {
    if (nodes.size() < 2 || elements.empty()) throw std::invalid_argument("empty mesh");
    if (nodes.front() != 0.0) throw std::invalid_argument("mesh must start at 0");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1])) throw std::invalid_argument("mesh nodes must be strictly increasing");
    const int npe = nodes_per_element();
    int expect = 0;
    for (const auto& e : elements) {
        if (static_cast<int>(e.size()) != npe) throw std::invalid_argument("element arity mismatch");
        if (e.front() != expect) throw std::invalid_argument("elements must tile the interval");
        for (int k = 0; k < npe; ++k)
            if (e[k] != expect + k) throw std::invalid_argument("element nodes must be consecutive");
        expect = e.back();
    }
    if (expect != n_dofs() - 1) throw std::invalid_argument("elements do not reach the last node");
}

Mesh1D mesh_from_breakpoints(const std::vector<double>& breaks, AxialOrder order) {
    if (breaks.size() < 2) throw std::invalid_argument("need at least two breakpoints");
    Mesh1D m;
    m.order = order;
    m.nodes.push_back(breaks.front());
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        const int left = static_cast<int>(m.nodes.size()) - 1;
        if (order == AxialOrder::Quadratic) {
            m.nodes.push_back(0.5 * (breaks[i - 1] + breaks[i]));
            m.nodes.push_back(breaks[i]);
            m.elements.push_back({left, left + 1, left + 2});
        } else {
            m.nodes.push_back(breaks[i]);
            m.elements.push_back({left, left + 1});
        }
    }
    m.validate();
    return m;
}

Mesh1D build_mesh(double L, double t, int n, AxialOrder order, bool boundary_layer) {
    if (n < 1) throw std::invalid_argument("need at least one axial element");
    if (!(L > 0.0) || !(t > 0.0)) throw std::invalid_argument("length and thickness must be positive");
    std::vector<double> br{0.0};
    double a = 0.0, b = L;
    if (boundary_layer) {
        if (!(L > 2.0 * t)) throw std::invalid_argument("boundary-layer bands do not fit: need L > 2t");
        br.push_back(0.1 * t);
        br.push_back(t);
        a = t;
        b = L - t;
    }
    for (int i = 1; i < n; ++i) br.push_back(a + (b - a) * i / n);
    if (boundary_layer) {
        br.push_back(L - t);
        br.push_back(L - 0.1 * t);
    }
    br.push_back(L);
    return mesh_from_breakpoints(br, order);
}

Mesh1D mirror_mesh(const Mesh1D& mesh) {
    const double L = mesh.length();
    std::vector<double> br;
    for (auto it = mesh.elements.rbegin(); it != mesh.elements.rend(); ++it)
        br.push_back(L - mesh.nodes[it->back()]);
    br.push_back(L);
    br.front() = 0.0;
    return mesh_from_breakpoints(br, mesh.order);
}

void lagrange_shape(AxialOrder order, double xi, Eigen::VectorXd& N, Eigen::VectorXd& dN) {
    if (order == AxialOrder::Linear) {
        N.resize(2);
        dN.resize(2);
        N << 0.5 * (1.0 - xi), 0.5 * (1.0 + xi);
        dN << -0.5, 0.5;
    } else {
        N.resize(3);
        dN.resize(3);
        N << 0.5 * xi * (xi - 1.0), 1.0 - xi * xi, 0.5 * xi * (xi + 1.0);
        dN << xi - 0.5, -2.0 * xi, xi + 0.5;
    }
}

int full_points(AxialOrder order) { return order == AxialOrder::Linear ? 2 : 3; }
int reduced_points(AxialOrder order) { return order == AxialOrder::Linear ? 1 : 2; }

void for_each_axial_point(const Mesh1D& mesh, int npts, const std::function<void(const AxialPoint&)>& fn) {
    const QuadratureRule q = gauss_legendre(npts);
    AxialPoint p;
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const auto& conn = mesh.elements[e];
        const double xa = mesh.nodes[conn.front()], xb = mesh.nodes[conn.back()];
        const double jac = 0.5 * (xb - xa);
        p.element = e;
        p.dofs = &conn;
        for (int g = 0; g < npts; ++g) {
            Eigen::VectorXd dNdxi;
            const double xi = static_cast<double>(q.points[g]);
            lagrange_shape(mesh.order, xi, p.N, dNdxi);
            p.dN = dNdxi / jac;
            p.x = xa + jac * (1.0 + xi);
            p.weight = static_cast<double>(q.weights[g]) * jac;
            fn(p);
        }
    }
}

AxialValue eval_axial(const Mesh1D& mesh, const Eigen::VectorXd& a, double x1) {
    const double L = mesh.length();
    if (!(x1 >= -1e-12 * L && x1 <= L * (1.0 + 1e-12))) throw std::invalid_argument("x1 outside the mesh");
    // First element whose right end is >= x1.
    int lo = 0, hi = mesh.n_elements() - 1;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (mesh.nodes[mesh.elements[mid].back()] < x1) lo = mid + 1;
        else hi = mid;
    }
    const auto& conn = mesh.elements[lo];
    const double xa = mesh.nodes[conn.front()], xb = mesh.nodes[conn.back()];
    const double jac = 0.5 * (xb - xa);
    const double xi = std::clamp((x1 - xa) / jac - 1.0, -1.0, 1.0);
    Eigen::VectorXd N, dN;
    lagrange_shape(mesh.order, xi, N, dN);
    AxialValue v;
    for (std::size_t k = 0; k < conn.size(); ++k) {
        v.value += N[k] * a[conn[k]];
        v.slope += dN[k] / jac * a[conn[k]];
    }
    return v;
}

namespace {

using Vec3r = Eigen::Matrix<Real, Eigen::Dynamic, 1, 0, 3, 1>;

void shape_r(AxialOrder order, Real xi, Vec3r& N, Vec3r& dN) {
    if (order == AxialOrder::Linear) {
        N.resize(2);
        dN.resize(2);
        N << 0.5L * (1.0L - xi), 0.5L * (1.0L + xi);
        dN << -0.5L, 0.5L;
    } else {
        N.resize(3);
        dN.resize(3);
        N << 0.5L * xi * (xi - 1.0L), 1.0L - xi * xi, 0.5L * xi * (xi + 1.0L);
        dN << xi - 0.5L, -2.0L * xi, xi + 0.5L;
    }
}

// Adds sum_g w_g f(N_g)_i g(N_g)_j over the rule for every element.
template <class F>
void assemble_rule(const Mesh1D& mesh, int npts, MatrixXr& A, F&& local) {
    const QuadratureRule q = gauss_legendre(npts);
    Vec3r N, dN;
    for (const auto& conn : mesh.elements) {
        const Real jac = 0.5L * (static_cast<Real>(mesh.nodes[conn.back()]) - mesh.nodes[conn.front()]);
        for (int g = 0; g < npts; ++g) {
            shape_r(mesh.order, q.points[g], N, dN);
            dN /= jac;
            const Real w = q.weights[g] * jac;
            for (std::size_t i = 0; i < conn.size(); ++i)
                for (std::size_t j = 0; j < conn.size(); ++j) A(conn[i], conn[j]) += w * local(N, dN, i, j);
        }
    }
}

}  // namespace

AxialOperators assemble_axial_operators(const Mesh1D& mesh) {
    mesh.validate();
    const int n = mesh.n_dofs();
    AxialOperators ops;
    ops.k1 = MatrixXr::Zero(n, n);
    ops.m1 = MatrixXr::Zero(n, n);
    ops.h1 = MatrixXr::Zero(n, n);
    ops.m1_ri = MatrixXr::Zero(n, n);
    const int full = full_points(mesh.order), reduced = reduced_points(mesh.order);
    assemble_rule(mesh, full, ops.k1, [](const Vec3r&, const Vec3r& dN, int i, int j) { return dN[i] * dN[j]; });
    assemble_rule(mesh, full, ops.m1, [](const Vec3r& N, const Vec3r&, int i, int j) { return N[i] * N[j]; });
    assemble_rule(mesh, full, ops.h1, [](const Vec3r& N, const Vec3r& dN, int i, int j) { return dN[i] * N[j]; });
    assemble_rule(mesh, reduced, ops.m1_ri, [](const Vec3r& N, const Vec3r&, int i, int j) { return N[i] * N[j]; });
    return ops;
}

Eigen::VectorXd ThicknessBasis::values(double x3) const {
    Eigen::VectorXd v(size());
    double pw = 1.0;
    for (int k = 0; k <= degree; ++k) {
        v[index_of_power(k)] = pw;
        pw *= x3;
    }
    return v;
}

Eigen::VectorXd ThicknessBasis::derivatives(double x3) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(size());
    double pw = 1.0;
    for (int k = 1; k <= degree; ++k) {
        v[index_of_power(k)] = k * pw;
        pw *= x3;
    }
    return v;
}

ThicknessOperators assemble_thickness_operators(const ThicknessBasis& basis) {
    if (basis.degree < 1) throw std::invalid_argument("thickness degree must be >= 1");
    if (!(basis.thickness > 0.0)) throw std::invalid_argument("thickness must be positive");
    const int n = basis.size(), d = basis.degree;
    const Real h = 0.5L * basis.thickness;
    // ceil((2d + 2) / 2) points integrate every monomial product exactly.
    const QuadratureRule q = gauss_legendre((2 * d + 2 + 1) / 2);
    auto mono = [&](Real x, VectorXr& v, VectorXr& dv) {
        v = VectorXr::Zero(n);
        dv = VectorXr::Zero(n);
        Real pw = 1.0L;
        for (int k = 0; k <= d; ++k) {
            v[d - k] = pw;
            if (k < d) dv[d - k - 1] = (k + 1) * pw;
            pw *= x;
        }
    };
    ThicknessOperators ops;
    ops.k3 = MatrixXr::Zero(n, n);
    ops.m3 = MatrixXr::Zero(n, n);
    ops.h3 = MatrixXr::Zero(n, n);
    VectorXr N, dN;
    for (std::size_t g = 0; g < q.points.size(); ++g) {
        mono(h * q.points[g], N, dN);
        const Real w = h * q.weights[g];
        ops.k3 += w * dN * dN.transpose();
        ops.m3 += w * N * N.transpose();
        ops.h3 += w * dN * N.transpose();
    }
    // Odd-even pairs vanish by symmetry; clear the quadrature round-off.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if ((i + j) % 2 == 1) {
                ops.m3(i, j) = 0.0L;
                ops.k3(i, j) = 0.0L;
            } else {
                ops.h3(i, j) = 0.0L;
            }
        }
    VectorXr top, bot, unused;
    mono(h, top, unused);
    mono(-h, bot, unused);
    ops.f3_trace = top + bot;
    ops.r3_const = Eigen::VectorXd::Zero(n);
    ops.r3_const[basis.index_of_power(0)] = 1.0;
    return ops;
}

OperatorBundle build_operators(const Mesh1D& mesh, const ThicknessBasis& basis) {
    OperatorBundle b;
    b.mesh = mesh;
    b.basis = basis;
    b.axial = assemble_axial_operators(mesh);
    b.thick = assemble_thickness_operators(basis);
    return b;
}

OperatorBundle build_operators(const CaseSpec& c, const SolverSettings& s) {
    s.validate();
    c.validate();
    const Mesh1D mesh = build_mesh(c.length, c.thickness, s.n_axial_elements, s.axial_order, s.boundary_layer_mesh);
    return build_operators(mesh, ThicknessBasis{s.thickness_degree, c.thickness});
}

Eigen::VectorXd interpolate_load(const Mesh1D& mesh, const CaseSpec& c) {
    Eigen::VectorXd g(mesh.n_dofs());
    for (int i = 0; i < mesh.n_dofs(); ++i) g[i] = load_profile(c, std::min(mesh.nodes[i], c.length));
    return g;
}

}  // namespace pgd_strip
