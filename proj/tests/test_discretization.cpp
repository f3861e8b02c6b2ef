#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "invariants.hpp"
#include "pgd_strip/discretization.hpp"

using namespace pgd_strip;
using pgd_strip::check::check_axial_invariants;
using pgd_strip::check::check_thickness_invariants;
using pgd_strip::check::random_mesh;

TEST(GaussLegendre, IntegratesPolynomialsUpToDegree2nMinus1) {
    for (int n = 1; n <= 12; ++n) {
        const auto q = gauss_legendre(n);
        ASSERT_EQ(static_cast<int>(q.points.size()), n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            long double s = 0;
            for (int i = 0; i < n; ++i) s += q.weights[i] * std::pow(q.points[i], k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            EXPECT_NEAR(static_cast<double>(s), exact, 1e-15) << "n=" << n << " k=" << k;
        }
    }
}

TEST(GaussLegendre, RejectsNonPositiveCount) {
    EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
}

TEST(Mesh, BoundaryLayerMeshHasSmallEndElements) {
    const double L = 1.0, t = 0.05;
    const Mesh1D m = build_mesh(L, t, 64, AxialOrder::Quadratic, true);
    m.validate();
    EXPECT_NEAR(m.element_size(0), 0.1 * t, 1e-14);
    EXPECT_NEAR(m.element_size(m.n_elements() - 1), 0.1 * t, 1e-14);
    EXPECT_NEAR(m.nodes[m.elements[1].back()], t, 1e-14);
    EXPECT_DOUBLE_EQ(m.nodes.back(), L);
    EXPECT_THROW(build_mesh(1.0, 0.5, 64, AxialOrder::Quadratic, true), std::exception);
}

TEST(Mesh, UniformMeshNodeCount) {
    EXPECT_EQ(build_mesh(1.0, 0.1, 64, AxialOrder::Linear, false).n_dofs(), 65);
    EXPECT_EQ(build_mesh(1.0, 0.1, 64, AxialOrder::Quadratic, false).n_dofs(), 129);
}

TEST(Mesh, MirrorMeshReversesOperators) {
    std::mt19937_64 rng(7);
    for (AxialOrder o : {AxialOrder::Linear, AxialOrder::Quadratic}) {
        const Mesh1D m = random_mesh(rng, o);
        const Mesh1D r = mirror_mesh(m);
        const auto a = assemble_axial_operators(m), b = assemble_axial_operators(r);
        const int n = m.n_dofs();
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) P(i, n - 1 - i) = 1.0;
        // x -> L - x flips the sign of derivatives once.
        EXPECT_LT(check::rel(b.k1.cast<double>(), P * a.k1.cast<double>() * P), 1e-12);
        EXPECT_LT(check::rel(b.m1.cast<double>(), P * a.m1.cast<double>() * P), 1e-12);
        EXPECT_LT(check::rel(b.m1_ri.cast<double>(), P * a.m1_ri.cast<double>() * P), 1e-12);
        EXPECT_LT(check::rel(b.h1.cast<double>(), -P * a.h1.cast<double>() * P), 1e-12);
    }
}

TEST(Axial, InvariantsOnRandomMeshes) {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 100; ++trial) {
        const AxialOrder o = trial % 2 ? AxialOrder::Quadratic : AxialOrder::Linear;
        const Mesh1D m = random_mesh(rng, o);
        for (const auto& msg : check_axial_invariants(m)) ADD_FAILURE() << "trial " << trial << ": " << msg;
    }
}

TEST(Axial, InterpolatesPolynomialsOfElementOrder) {
    std::mt19937_64 rng(3);
    const Mesh1D m = random_mesh(rng, AxialOrder::Quadratic);
    Eigen::VectorXd a(m.n_dofs());
    auto f = [](double x) { return 2.0 - 3.0 * x + 0.5 * x * x; };
    for (int i = 0; i < m.n_dofs(); ++i) a(i) = f(m.nodes[i]);
    for (double x = 0.0; x <= m.length(); x += m.length() / 37) {
        const auto v = eval_axial(m, a, x);
        EXPECT_NEAR(v.value, f(x), 1e-12);
        EXPECT_NEAR(v.slope, -3.0 + x, 1e-10);
    }
}

TEST(Axial, ReducedRuleUnderintegratesLinearMass) {
    const Mesh1D m = mesh_from_breakpoints({0.0, 0.5}, AxialOrder::Linear);
    const auto ops = assemble_axial_operators(m);
    // one-point rule: h/4 in every entry
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(static_cast<double>(ops.m1_ri(i, j)), 0.125, 1e-15);
    EXPECT_NEAR(static_cast<double>(ops.m1(0, 0)), 0.5 / 3.0, 1e-15);
}

TEST(Thickness, InvariantsAcrossDegreesAndThicknesses) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> tt(1e-4, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + trial % 6;
        for (const auto& msg : check_thickness_invariants(d, tt(rng)))
            ADD_FAILURE() << "degree " << d << ": " << msg;
    }
}

TEST(Thickness, BasisOrderIsDescendingPowers) {
    const ThicknessBasis b{4, 0.2};
    const Eigen::VectorXd v = b.values(0.1);
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(v(b.index_of_power(k)), std::pow(0.1, k), 1e-15);
    const Eigen::VectorXd d = b.derivatives(0.1);
    EXPECT_NEAR(d(b.index_of_power(2)), 0.2, 1e-15);
    EXPECT_EQ(d(b.index_of_power(0)), 0.0);
}

TEST(Load, InterpolationMatchesProfileAtNodes) {
    const CaseSpec c = make_case("SS-SP", 20.0);
    const Mesh1D m = build_mesh(c.length, c.thickness, 16, AxialOrder::Quadratic, true);
    const Eigen::VectorXd g = interpolate_load(m, c);
    for (int i = 0; i < m.n_dofs(); ++i) EXPECT_NEAR(g(i), load_profile(c, m.nodes[i]), 1e-15);
}
