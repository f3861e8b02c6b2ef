#include "pgd_strip/model.hpp"

#include <cmath>
#include <numbers>

namespace pgd_strip {

MaterialPlaneStrain plane_strain_moduli(double E, double nu) {
    if (!(E > 0.0) || !std::isfinite(E)) throw ModelError("Young modulus must be positive");
    if (!(nu > -1.0) || !(nu < 0.5)) throw ModelError("Poisson ratio must lie in (-1, 0.5)");
    // Below this the plane-strain coefficients blow up and the thickness
    // systems become meaningless in double precision.
    if (1.0 - 2.0 * nu < 1e-5) throw ModelError("Poisson ratio too close to the incompressible limit");

    MaterialPlaneStrain m;
    m.young_modulus = E;
    m.poisson_ratio = nu;
    const double d = (1.0 + nu) * (1.0 - 2.0 * nu);
    m.c11 = E * (1.0 - nu) / d;
    m.c33 = m.c11;
    m.c13 = E * nu / d;
    m.c55 = E / (2.0 * (1.0 + nu));
    return m;
}

std::string CaseSpec::id() const {
    std::string s = bc == BoundaryKind::Clamped ? "CC" : "SS";
    s += load == LoadKind::Sinus ? "-SP" : "-UP";
    return s;
}

void CaseSpec::validate() const {
    if (!(length > 0.0) || !(thickness > 0.0)) throw ModelError("length and thickness must be positive");
    if (!std::isfinite(load_amplitude)) throw ModelError("load amplitude must be finite");
}

CaseSpec make_case(const std::string& id, double slenderness, double length, double amplitude) {
    if (!(slenderness > 0.0)) throw ModelError("slenderness must be positive");
    CaseSpec c;
    if (id == "SS-SP") {
        c.bc = BoundaryKind::SimplySupported;
        c.load = LoadKind::Sinus;
    } else if (id == "SS-UP") {
        c.bc = BoundaryKind::SimplySupported;
        c.load = LoadKind::Uniform;
    } else if (id == "CC-SP") {
        c.bc = BoundaryKind::Clamped;
        c.load = LoadKind::Sinus;
    } else if (id == "CC-UP") {
        c.bc = BoundaryKind::Clamped;
        c.load = LoadKind::Uniform;
    } else {
        throw ModelError("unknown case id '" + id + "'");
    }
    c.length = length;
    c.thickness = length / slenderness;
    c.load_amplitude = amplitude;
    c.validate();
    return c;
}

double load_profile(const CaseSpec& c, double x1) {
    // Tolerate round-off from quadrature point mapping.
    const double slack = 1e-12 * c.length;
    if (!(x1 >= -slack && x1 <= c.length + slack)) throw ModelError("x1 outside [0, L]");
    if (c.load == LoadKind::Uniform) return c.load_amplitude;
    return c.load_amplitude * std::sin(std::numbers::pi * x1 / c.length);
}

std::string to_string(Integration i) { return i == Integration::Full ? "full" : "selective"; }
std::string to_string(AxialOrder o) { return o == AxialOrder::Linear ? "linear" : "quadratic"; }

Integration parse_integration(const std::string& s) {
    if (s == "full") return Integration::Full;
    if (s == "selective") return Integration::Selective;
    throw ModelError("integration must be 'full' or 'selective', got '" + s + "'");
}

AxialOrder parse_axial_order(const std::string& s) {
    if (s == "linear") return AxialOrder::Linear;
    if (s == "quadratic") return AxialOrder::Quadratic;
    throw ModelError("axial order must be 'linear' or 'quadratic', got '" + s + "'");
}

void SolverSettings::validate() const {
    if (!(fp_tolerance > 0.0)) throw ModelError("fixed-point tolerance eta must be > 0");
    if (fp_max_iters < 1) throw ModelError("fp_max_iters must be >= 1");
    if (thickness_degree < 1) throw ModelError("thickness degree must be >= 1");
    if (n_axial_elements < 1) throw ModelError("need at least one axial element");
    if (n_greedy_modes < 0) throw ModelError("number of greedy modes must be >= 0");
}

}  // namespace pgd_strip
