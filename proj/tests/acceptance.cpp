// Acceptance driver: one PASS/FAIL line per criterion.
//
// Exit status is 0 only when the set of failing criteria equals the set given
// with --known-failure (empty by default). A known failure that starts passing
// is reported too, so the list cannot go stale silently.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "invariants.hpp"
#include "pgd_strip/experiment.hpp"
#include "pgd_strip/oracles.hpp"

using namespace pgd_strip;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char b[64];
    std::snprintf(b, sizeof b, f, v);
    return b;
}

// Block solves from every criterion, checked again by criterion 6.
std::vector<PGDSolution> g_block_solves;

PGDSolution block(const CaseSpec& c, const MaterialPlaneStrain& m, const SolverSettings& s) {
    PGDSolution sol = fixed_point_block(c, m, s);
    if (sol.converged()) g_block_solves.push_back(sol);
    return sol;
}

double signed_error(double w, double ref) { return (w - ref) / ref; }

Outcome locking_table_check() {
    const double sel[] = {1.1543, 1.0243, 1.0009, 0.9996, 0.9994, 0.9994, 0.9994, 0.9994};
    const double full[] = {1.1529, 1.0158, 0.8807, 0.5391, 0.0681, 0.0116, 0.0007, 0.0001};
    const auto cfg = parse_config("study = locking\nelements = 64\nthickness_degree = 4\ntiming = false");
    const auto rows = run_experiment(cfg);
    Outcome o;
    if (rows.size() != 16) return {false, "expected 16 rows, got " + std::to_string(rows.size())};
    double dsel = 0, dfull = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        const auto& f = rows[2 * i];
        const auto& s = rows[2 * i + 1];
        if (f.status != "ok" || s.status != "ok") o.pass = false;
        dsel = std::max(dsel, std::abs(s.normalized_deflection - sel[i]));
        dfull = std::max(dfull, std::abs(f.normalized_deflection - full[i]));
    }
    const double collapse = rows[14].normalized_deflection;
    o.pass = o.pass && dsel <= 0.005 && dfull <= 0.02 && collapse <= 1e-3;
    o.detail = "max |selective - table| " + fmt("%.2e", dsel) + " (<= 5e-3), max |full - table| " +
               fmt("%.2e", dfull) + " (<= 2e-2), full at 1e4 " + fmt("%.2e", collapse) + " (<= 1e-3)";
    return o;
}

double greedy1_error(const char* id, double s, double nu) {
    const auto m = plane_strain_moduli(1e9, nu);
    const CaseSpec c = make_case(id, s);
    const auto sol = greedy_solve(StripProblem::make(c, m, SolverSettings{}), 1);
    return deflection_errors(sol, kl_solution(c, m).w_center).err2;
}

Outcome first_mode_inconsistency() {
    Outcome o;
    std::ostringstream d;
    for (const char* id : {"SS-SP", "CC-SP", "CC-UP", "SS-UP"}) {
        const double e = greedy1_error(id, 1e3, 0.3);
        const bool want_small = std::string(id) == "SS-SP";
        const bool ok = want_small ? e < 1e-2 : e > 1e-2;
        o.pass = o.pass && ok;
        d << id << " " << fmt("%.2e", e) << (want_small ? " (< 1e-2)" : " (> 1e-2)") << (ok ? "" : " MISSED") << "; ";
    }
    d << "nu=0:";
    for (const char* id : {"SS-SP", "SS-UP", "CC-SP", "CC-UP"}) {
        const double e = greedy1_error(id, 1e3, 0.0);
        o.pass = o.pass && e < 1e-2;
        d << " " << id << " " << fmt("%.1e", e);
    }
    o.detail = d.str();
    return o;
}

Outcome limit_ode_cross_check() {
    const auto m = plane_strain_moduli(1e9, 0.3);
    const CaseSpec c = make_case("CC-UP", 1e4);
    const auto p = LimitOdeProblem::isotropic(0.3, c.bc, c.load);
    const double ratio = solve_limit_ode(p, 256).w_center / solve_limit_ode(p.kirchhoff_love(), 256).w_center;
    const double w_ode = ratio * kl_solution(c, m).w_center;
    const auto sol = greedy_solve(StripProblem::make(c, m, SolverSettings{}), 1);
    const double e1 = std::abs(midsurface_deflection(sol, true) / w_ode - 1.0);

    const auto ps = LimitOdeProblem::isotropic(0.3, BoundaryKind::SimplySupported, LoadKind::Sinus);
    const double w_kl = 1.0 / ((ps.a_coeff - ps.b_coeff) * std::pow(M_PI, 4));
    const double e2 = std::abs(solve_limit_ode(ps, 256).w_center / w_kl - 1.0);
    return {e1 < 1e-2 && e2 < 1e-4, "CC-UP greedy-1 vs limit ODE at 1e4 " + fmt("%.2e", e1) +
                                        " (< 1e-2); SS-SP limit ODE vs KL sinusoid " + fmt("%.2e", e2) + " (< 1e-4)"};
}

Outcome block_consistency() {
    const auto m = plane_strain_moduli(1e9, 0.3);
    const std::vector<double> grid{100, 200, 400, 700, 1000};
    Outcome o;
    std::ostringstream d;
    for (const char* id : {"SS-SP", "SS-UP", "CC-SP", "CC-UP"}) {
        std::vector<double> e;
        for (double s : grid) {
            const CaseSpec c = make_case(id, s);
            e.push_back(signed_error(midsurface_deflection(block(c, m, SolverSettings{}), true),
                                     kl_solution(c, m).w_center));
        }
        // |e| must not grow, except once where the error changes sign.
        int kinks = 0;
        bool ok = true;
        for (std::size_t i = 1; i < e.size(); ++i) {
            if (std::abs(e[i]) <= std::abs(e[i - 1])) continue;
            if (std::signbit(e[i]) != std::signbit(e[i - 1]) && kinks == 0) ++kinks;
            else ok = false;
        }
        ok = ok && std::abs(e.back()) < 1e-2;
        o.pass = o.pass && ok;
        d << id << (ok ? " ok" : " BAD") << " [";
        for (std::size_t i = 0; i < e.size(); ++i) d << (i ? " " : "") << fmt("%.1e", e[i]);
        d << "]; ";
    }
    o.detail = d.str();
    return o;
}

Outcome block_vs_greedy() {
    const auto m = plane_strain_moduli(1e9, 0.3);
    Outcome o;
    std::ostringstream d;
    for (double s : {200.0, 1000.0}) {
        const CaseSpec c = make_case("CC-UP", s);
        const double ref = solve_reference_2d(c, m, make_reference_mesh(c)).w_center;
        const auto p = StripProblem::make(c, m, SolverSettings{});
        const double eb = deflection_errors(block(c, m, SolverSettings{}), ref).err2;
        auto g = greedy_solve(p, 2);
        const double e2 = deflection_errors(g, ref).err2;
        g = greedy_enrich(g, 3);
        const double e5 = deflection_errors(g, ref).err2;
        const bool ok = s == 200.0 ? (eb <= e2 && eb <= 2.0 * e5) : eb < e5;
        o.pass = o.pass && ok;
        d << "s=" << s << ": block-2 " << fmt("%.2e", eb) << ", greedy-2 " << fmt("%.2e", e2) << ", greedy-5 "
          << fmt("%.2e", e5) << (ok ? "" : " MISSED") << "; ";
    }
    o.detail = d.str();
    return o;
}

Outcome energy_identity() {
    // Cover the criterion 1 and 2 settings with block solves as well.
    auto lin = SolverSettings{};
    lin.axial_order = AxialOrder::Linear;
    lin.boundary_layer_mesh = false;
    for (double s : {4.0, 10.0, 40.0, 1e2, 4e2, 1e3, 4e3, 1e4})
        for (Integration i : {Integration::Full, Integration::Selective}) {
            lin.integration = i;
            block(make_case("SS-SP", s), plane_strain_moduli(1e9, 0.3), lin);
        }
    for (double nu : {0.0, 0.3})
        for (const char* id : {"SS-SP", "SS-UP", "CC-SP", "CC-UP"})
            block(make_case(id, 1e3), plane_strain_moduli(1e9, nu), SolverSettings{});

    double worst = 0.0;
    for (const auto& s : g_block_solves) {
        const double w = external_work(s);
        worst = std::max(worst, std::abs(2.0 * strain_energy(s) - w) / std::abs(w));
    }
    return {worst <= 1e-8 && !g_block_solves.empty(),
            std::to_string(g_block_solves.size()) + " converged block solves, worst |2E - W| / W " +
                fmt("%.2e", worst) + " (<= 1e-8)"};
}

Outcome mode_shapes() {
    const auto sol = block(make_case("CC-UP", 20.0), plane_strain_moduli(1e9, 0.3), SolverSettings{});
    const auto k = kinematics_diagnostics(sol);
    const bool ok = k.r1_linearity_residual < 1e-2 && k.s3_dominant_power == 2 && k.shear_constraint_residual < 5e-2;
    return {ok, "r1 linear-fit residual " + fmt("%.2e", k.r1_linearity_residual) + " (< 1e-2), s3 dominant power " +
                    std::to_string(k.s3_dominant_power) + " (2), shear " + fmt("%.2e", k.shear_constraint_residual) +
                    " (< 5e-2)"};
}

Outcome relative_cost() {
    using Clock = std::chrono::steady_clock;
    const auto m = plane_strain_moduli(1e9, 0.3);
    Outcome o;
    std::ostringstream d;
    auto best_of = [](int n, const std::function<void()>& f) {
        double best = 1e300;
        for (int r = 0; r < n; ++r) {
            const auto t0 = Clock::now();
            f();
            best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
        }
        return best;
    };
    for (double s : {5.0, 10.0, 50.0, 100.0, 200.0}) {
        const auto p = StripProblem::make(make_case("CC-UP", s), m, SolverSettings{});
        const double tb = best_of(3, [&] { (void)fixed_point_block(p); });
        const double tg = best_of(3, [&] { (void)greedy_solve(p, 5); });
        const bool ok = tb < tg;
        o.pass = o.pass && ok;
        d << "s=" << s << " " << fmt("%.0f", tb) << " vs " << fmt("%.0f", tg) << " ms" << (ok ? "" : " MISSED")
          << "; ";
    }
    o.detail = "block-2 vs greedy-5: " + d.str();
    return o;
}

Outcome discretization_suite() {
    std::mt19937_64 rng(424242);
    int failures = 0;
    std::string first;
    for (int trial = 0; trial < 100; ++trial) {
        const Mesh1D mesh = check::random_mesh(rng, trial % 2 ? AxialOrder::Quadratic : AxialOrder::Linear);
        auto bad = check::check_axial_invariants(mesh);
        std::uniform_real_distribution<double> tt(1e-4, 1.0);
        auto tb = check::check_thickness_invariants(1 + trial % 6, tt(rng));
        bad.insert(bad.end(), tb.begin(), tb.end());
        if (!bad.empty() && first.empty()) first = bad.front();
        failures += !bad.empty();
    }
    return {failures == 0, "100 randomized meshes, " + std::to_string(failures) + " with violations" +
                               (first.empty() ? "" : " (" + first + ")")};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> known;
    app.add_option("--known-failure", known, "criteria expected to fail");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"locking table", locking_table_check},
        {"first-mode inconsistency", first_mode_inconsistency},
        {"limit ODE cross-validation", limit_ode_cross_check},
        {"block PGD consistency", block_consistency},
        {"block vs greedy", block_vs_greedy},
        {"energy identity", energy_identity},
        {"mode-shape structure", mode_shapes},
        {"relative cost", relative_cost},
        {"discretization invariants", discretization_suite},
    };
    std::set<int> failed;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const int id = static_cast<int>(i) + 1;
        if (!o.pass) failed.insert(id);
        std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    const std::set<int> expected(known.begin(), known.end());
    for (int k : expected)
        if (!failed.count(k)) std::printf("NOTE criterion %d was listed as a known failure but passed\n", k);
    for (int k : failed)
        if (expected.count(k)) std::printf("NOTE criterion %d is a recorded known failure\n", k);
    return failed == expected ? 0 : 1;
}
