#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "pgd_strip/model.hpp"

namespace pgd_strip {

// Operators are held in extended precision: the shear and bending parts of a
// thin strip differ by (L/t)^2, and double rounding of the assembled blocks
// alone breaks the discrete energy balance at large slenderness.
using Real = long double;
using MatrixXr = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXr = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

struct QuadratureRule {
    std::vector<Real> points;   // on [-1, 1]
    std::vector<Real> weights;
};

QuadratureRule gauss_legendre(int n);

struct Mesh1D {
    std::vector<double> nodes;              // ascending, nodes.front() = 0, nodes.back() = L
    std::vector<std::vector<int>> elements; // (left, right) or (left, mid, right)
    AxialOrder order = AxialOrder::Quadratic;

    int n_dofs() const { return static_cast<int>(nodes.size()); }
    int n_elements() const { return static_cast<int>(elements.size()); }
    double length() const { return nodes.back(); }
    int nodes_per_element() const { return order == AxialOrder::Linear ? 2 : 3; }
    double element_size(int e) const { return nodes[elements[e].back()] - nodes[elements[e].front()]; }
    void validate() const;
};

Mesh1D build_mesh(double L, double t, int n, AxialOrder order, bool boundary_layer);
// Mesh from explicit element breakpoints (ascending, first 0).
Mesh1D mesh_from_breakpoints(const std::vector<double>& breaks, AxialOrder order);
Mesh1D mirror_mesh(const Mesh1D& mesh);

// Lagrange shape functions on the reference element [-1, 1].
void lagrange_shape(AxialOrder order, double xi, Eigen::VectorXd& N, Eigen::VectorXd& dN_dxi);

struct AxialPoint {
    double x = 0.0;
    double weight = 0.0;  // physical weight (includes Jacobian)
    int element = 0;
    const std::vector<int>* dofs = nullptr;
    Eigen::VectorXd N;
    Eigen::VectorXd dN;  // d/dx1
};

void for_each_axial_point(const Mesh1D& mesh, int points_per_element,
                          const std::function<void(const AxialPoint&)>& fn);

// Value and first derivative of the interpolant with nodal coefficients a at x1.
struct AxialValue {
    double value = 0.0;
    double slope = 0.0;
};
AxialValue eval_axial(const Mesh1D& mesh, const Eigen::VectorXd& a, double x1);

int full_points(AxialOrder order);
int reduced_points(AxialOrder order);

struct AxialOperators {
    MatrixXr k1;     // int N' N'^T
    MatrixXr m1;     // int N N^T
    MatrixXr h1;     // int N' N^T, so x^T h1 y = int x' y
    MatrixXr m1_ri;  // m1 under the reduced rule
};

AxialOperators assemble_axial_operators(const Mesh1D& mesh);

// Monomials [x3^d, ..., x3, 1] on (-t/2, t/2).
struct ThicknessBasis {
    int degree = 4;
    double thickness = 0.1;

    int size() const { return degree + 1; }
    int index_of_power(int k) const { return degree - k; }
    Eigen::VectorXd values(double x3) const;
    Eigen::VectorXd derivatives(double x3) const;
};

struct ThicknessOperators {
    MatrixXr k3;
    MatrixXr m3;
    MatrixXr h3;  // x^T h3 y = int x' y
    VectorXr f3_trace;
    Eigen::VectorXd r3_const;
};

ThicknessOperators assemble_thickness_operators(const ThicknessBasis& basis);

struct OperatorBundle {
    Mesh1D mesh;
    ThicknessBasis basis;
    AxialOperators axial;
    ThicknessOperators thick;

    const MatrixXr& shear_mass(Integration i) const {
        return i == Integration::Selective ? axial.m1_ri : axial.m1;
    }
};

OperatorBundle build_operators(const CaseSpec& c, const SolverSettings& s);
OperatorBundle build_operators(const Mesh1D& mesh, const ThicknessBasis& basis);

// Nodal interpolant of g3.
Eigen::VectorXd interpolate_load(const Mesh1D& mesh, const CaseSpec& c);

}  // namespace pgd_strip
