#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pgd_strip {

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Plane-strain Voigt stiffness in the (x1, x3) plane.
struct MaterialPlaneStrain {
    double young_modulus = 0.0;
    double poisson_ratio = 0.0;
    double c11 = 0.0;
    double c13 = 0.0;
    double c33 = 0.0;
    double c55 = 0.0;
};

MaterialPlaneStrain plane_strain_moduli(double E, double nu);

enum class BoundaryKind { Clamped, SimplySupported };
enum class LoadKind { Sinus, Uniform };

// g3 acts on both faces in +e3, so the net line load is 2*g3.
struct CaseSpec {
    double length = 1.0;
    double thickness = 0.1;
    BoundaryKind bc = BoundaryKind::SimplySupported;
    LoadKind load = LoadKind::Sinus;
    double load_amplitude = 1.0;

    double slenderness() const { return length / thickness; }
    std::string id() const;  // "SS-SP", "CC-UP", ...
    void validate() const;
};

// id is one of SS-SP, SS-UP, CC-SP, CC-UP.
CaseSpec make_case(const std::string& id, double slenderness, double length = 1.0,
                   double amplitude = 1.0);

double load_profile(const CaseSpec& c, double x1);

enum class Integration { Full, Selective };
enum class AxialOrder { Linear, Quadratic };
enum class InitialGuess { KirchhoffLove, Random };

std::string to_string(Integration i);
std::string to_string(AxialOrder o);
Integration parse_integration(const std::string& s);
AxialOrder parse_axial_order(const std::string& s);

struct SolverSettings {
    double fp_tolerance = 1e-3;
    int fp_max_iters = 100;
    Integration integration = Integration::Selective;
    int n_greedy_modes = 0;
    int thickness_degree = 4;
    AxialOrder axial_order = AxialOrder::Quadratic;
    int n_axial_elements = 64;
    bool boundary_layer_mesh = true;
    // Unit L2 scaling of the thickness factors after each thickness step.
    bool normalize = true;
    InitialGuess initial_guess = InitialGuess::KirchhoffLove;
    std::uint64_t seed = 12345;

    void validate() const;
};

}  // namespace pgd_strip
