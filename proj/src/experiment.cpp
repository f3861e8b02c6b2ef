#include "pgd_strip/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "pgd_strip/oracles.hpp"
#include "pgd_strip/pgd.hpp"

namespace pgd_strip {

std::string to_string(Study s) {
    switch (s) {
        case Study::Locking: return "locking";
        case Study::SlendernessSweep: return "sweep";
        case Study::CompareReference: return "compare-reference";
        case Study::DumpModes: return "dump-modes";
        case Study::LimitOde: return "limit-ode";
    }
    return "?";
}

Study parse_study(const std::string& s) {
    if (s == "locking") return Study::Locking;
    if (s == "sweep" || s == "slenderness-sweep") return Study::SlendernessSweep;
    if (s == "compare-reference" || s == "compare") return Study::CompareReference;
    if (s == "dump-modes") return Study::DumpModes;
    if (s == "limit-ode") return Study::LimitOde;
    throw ConfigError("unknown study '" + s + "' (locking, sweep, compare-reference, dump-modes, limit-ode)");
}

namespace {

const std::vector<std::string> kAllCases{"SS-SP", "SS-UP", "CC-SP", "CC-UP"};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects a number, got '" + v + "'");
    }
}

int to_int(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long n = std::stol(v, &pos);
        if (pos != v.size() || n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max())
            throw std::invalid_argument(v);
        return static_cast<int>(n);
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& v, int line, const std::string& key) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects true/false, got '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value', got '" + body + "'");
        const std::string key = trim(body.substr(0, eq));
        const std::string val = trim(body.substr(eq + 1));
        const std::string at = "line " + std::to_string(line) + ": ";
        if (val.empty()) throw ConfigError(at + "'" + key + "' has an empty value");
        auto check = [&](bool ok, const std::string& what) {
            if (!ok) throw ConfigError(at + what);
        };

        if (key == "study") {
            try {
                cfg.study = parse_study(val);
            } catch (const ConfigError& e) {
                throw ConfigError(at + e.what());
            }
        } else if (key == "cases") {
            cfg.cases = split_list(val);
            check(!cfg.cases.empty(), "'cases' must list at least one case");
            for (const auto& c : cfg.cases)
                check(std::find(kAllCases.begin(), kAllCases.end(), c) != kAllCases.end(),
                      "unknown case '" + c + "' (SS-SP, SS-UP, CC-SP, CC-UP)");
        } else if (key == "slenderness") {
            cfg.slenderness.clear();
            for (const auto& v : split_list(val)) cfg.slenderness.push_back(to_double(v, line, key));
            check(!cfg.slenderness.empty(), "'slenderness' grid is empty");
            for (double s : cfg.slenderness) check(s > 0.0, "slenderness values must be > 0");
            for (std::size_t i = 1; i < cfg.slenderness.size(); ++i)
                check(cfg.slenderness[i] > cfg.slenderness[i - 1], "'slenderness' grid must be strictly increasing");
        } else if (key == "eta") {
            cfg.settings.fp_tolerance = to_double(val, line, key);
            check(cfg.settings.fp_tolerance > 0.0, "eta must be > 0");
        } else if (key == "max_iters") {
            cfg.settings.fp_max_iters = to_int(val, line, key);
            check(cfg.settings.fp_max_iters >= 1, "max_iters must be >= 1");
        } else if (key == "integration") {
            try {
                cfg.settings.integration = parse_integration(val);
            } catch (const ModelError& e) {
                throw ConfigError(at + e.what());
            }
        } else if (key == "modes") {
            cfg.max_greedy = to_int(val, line, key);
            check(cfg.max_greedy >= 1, "modes must be >= 1");
            cfg.settings.n_greedy_modes = cfg.max_greedy;
        } else if (key == "enrich_modes") {
            cfg.enrich_modes = to_int(val, line, key);
            check(cfg.enrich_modes >= 0, "enrich_modes must be >= 0");
        } else if (key == "thickness_degree") {
            cfg.settings.thickness_degree = to_int(val, line, key);
            check(cfg.settings.thickness_degree >= 1, "thickness_degree must be >= 1");
        } else if (key == "axial_order") {
            try {
                cfg.settings.axial_order = parse_axial_order(val);
            } catch (const ModelError& e) {
                throw ConfigError(at + e.what());
            }
        } else if (key == "elements") {
            cfg.settings.n_axial_elements = to_int(val, line, key);
            check(cfg.settings.n_axial_elements >= 1, "elements must be >= 1");
        } else if (key == "boundary_layer") {
            cfg.settings.boundary_layer_mesh = to_bool(val, line, key);
        } else if (key == "normalize") {
            cfg.settings.normalize = to_bool(val, line, key);
        } else if (key == "initial_guess") {
            if (val == "kl") cfg.settings.initial_guess = InitialGuess::KirchhoffLove;
            else if (val == "random") cfg.settings.initial_guess = InitialGuess::Random;
            else throw ConfigError(at + "initial_guess must be 'kl' or 'random'");
        } else if (key == "seed") {
            cfg.settings.seed = static_cast<std::uint64_t>(to_int(val, line, key));
        } else if (key == "young") {
            cfg.young = to_double(val, line, key);
            check(cfg.young > 0.0, "young must be > 0");
        } else if (key == "poisson") {
            cfg.poisson = to_double(val, line, key);
            check(cfg.poisson > -1.0 && cfg.poisson < 0.5, "poisson must lie in (-1, 0.5)");
        } else if (key == "amplitude") {
            cfg.amplitude = to_double(val, line, key);
        } else if (key == "length") {
            cfg.length = to_double(val, line, key);
            check(cfg.length > 0.0, "length must be > 0");
        } else if (key == "reference_nz") {
            cfg.reference_nz = to_int(val, line, key);
            check(cfg.reference_nz >= 8, "reference_nz must be >= 8");
        } else if (key == "reference_aspect") {
            cfg.reference_aspect = to_double(val, line, key);
            check(cfg.reference_aspect > 0.0, "reference_aspect must be > 0");
        } else if (key == "ode_elements") {
            cfg.ode_elements = to_int(val, line, key);
            check(cfg.ode_elements >= 4, "ode_elements must be >= 4");
        } else if (key == "output") {
            cfg.output_path = val;
        } else if (key == "dump_dir") {
            cfg.dump_dir = val;
        } else if (key == "parallel") {
            cfg.parallel = to_bool(val, line, key);
        } else if (key == "timing") {
            cfg.timing = to_bool(val, line, key);
        } else {
            throw ConfigError(at + "unknown key '" + key + "'");
        }
        cfg.explicit_keys.insert(key);
    }
    cfg.finalize();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void ExperimentConfig::finalize() {
    auto unset = [&](const char* k) { return explicit_keys.count(k) == 0; };
    if (unset("cases")) {
        switch (study) {
            case Study::Locking: cases = {"SS-SP"}; break;
            case Study::CompareReference:
            case Study::DumpModes: cases = {"CC-UP"}; break;
            default: cases = kAllCases;
        }
    }
    if (unset("slenderness")) {
        switch (study) {
            case Study::Locking: slenderness = {4, 10, 40, 1e2, 4e2, 1e3, 4e3, 1e4}; break;
            case Study::SlendernessSweep: slenderness = {10, 20, 50, 1e2, 2e2, 5e2, 1e3, 2e3, 5e3, 1e4}; break;
            case Study::CompareReference: slenderness = {5, 10, 20, 50, 100, 200, 500, 1000}; break;
            case Study::DumpModes: slenderness = {20}; break;
            case Study::LimitOde: slenderness = {1e2, 1e3, 1e4}; break;
        }
    }
    if (study == Study::Locking) {
        if (unset("axial_order")) settings.axial_order = AxialOrder::Linear;
        if (unset("boundary_layer")) settings.boundary_layer_mesh = false;
    }
    if (study == Study::CompareReference) {
        if (unset("modes")) max_greedy = settings.n_greedy_modes = 5;
        if (unset("enrich_modes")) enrich_modes = 3;
    }
    validate();
}

void ExperimentConfig::validate() const {
    if (cases.empty()) throw ConfigError("at least one case is required");
    if (slenderness.empty()) throw ConfigError("slenderness grid is empty");
    for (std::size_t i = 1; i < slenderness.size(); ++i)
        if (!(slenderness[i] > slenderness[i - 1])) throw ConfigError("slenderness grid must be strictly increasing");
    for (double s : slenderness) {
        if (!(s > 0.0)) throw ConfigError("slenderness values must be > 0");
        if (settings.boundary_layer_mesh && !(s > 2.0))
            throw ConfigError("boundary-layer mesh needs slenderness > 2 (set boundary_layer = false)");
        if (study == Study::CompareReference && !(s > 4.0))
            throw ConfigError("the 2D reference mesh needs slenderness > 4");
    }
    try {
        settings.validate();
        (void)plane_strain_moduli(young, poisson);
    } catch (const ModelError& e) {
        throw ConfigError(e.what());
    }
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string status_of(const PGDSolution& sol) {
    if (sol.converged()) return "ok";
    bool diverged = sol.block && sol.report.diverged;
    for (const auto& g : sol.extras) diverged = diverged || g.report.diverged;
    return diverged ? "diverged" : "not-converged";
}

struct Reference {
    ReferenceKind kind;
    double center;
    double energy;
};

ConvergenceRecord record(const CaseSpec& c, const std::string& label, Integration integ, const Reference& ref,
                         const PGDSolution& sol, double ms) {
    ConvergenceRecord r;
    r.case_id = c.id();
    r.slenderness = c.slenderness();
    r.n_modes = label;
    r.integration = to_string(integ);
    r.reference = ref.kind;
    const auto e = deflection_errors(sol, ref.center);
    r.defl_err_1 = e.err1;
    r.defl_err_2 = e.err2;
    r.energy_err = std::isfinite(ref.energy) ? energy_error(strain_energy(sol), ref.energy)
                                             : std::numeric_limits<double>::quiet_NaN();
    r.fp_iterations = sol.total_iterations();
    r.runtime_ms = ms;
    r.status = status_of(sol);
    r.normalized_deflection = midsurface_deflection(sol, true) / ref.center;
    return r;
}

ConvergenceRecord oracle_record(const CaseSpec& c, const std::string& label, Integration integ, const Reference& ref,
                                double center, double energy, double ms) {
    ConvergenceRecord r;
    r.case_id = c.id();
    r.slenderness = c.slenderness();
    r.n_modes = label;
    r.integration = to_string(integ);
    r.reference = ref.kind;
    r.defl_err_1 = r.defl_err_2 = std::abs(center - ref.center) / std::abs(ref.center);
    r.energy_err = std::isfinite(energy) && std::isfinite(ref.energy) ? energy_error(energy, ref.energy)
                                                                      : std::numeric_limits<double>::quiet_NaN();
    r.runtime_ms = ms;
    r.normalized_deflection = center / ref.center;
    return r;
}

struct Task {
    std::string case_id;
    double slenderness;
};

std::vector<ConvergenceRecord> run_task(const ExperimentConfig& cfg, const Task& task) {
    const MaterialPlaneStrain mat = plane_strain_moduli(cfg.young, cfg.poisson);
    const CaseSpec c = make_case(task.case_id, task.slenderness, cfg.length, cfg.amplitude);
    const KLSolution kl = kl_solution(c, mat);
    const Reference klref{ReferenceKind::KL, kl.w_center, kl.energy};
    const Integration integ = cfg.settings.integration;
    std::vector<ConvergenceRecord> rows;

    auto timed = [&](const std::function<PGDSolution()>& f, double& ms) {
        const auto t0 = Clock::now();
        PGDSolution s = f();
        ms = elapsed_ms(t0);
        return s;
    };
    // Greedy-1..k from a single enrichment chain; each prefix is reported.
    auto greedy_rows = [&](const StripProblem& p, const Reference& ref, int kmax) {
        const auto t0 = Clock::now();
        PGDSolution sol = greedy_solve(p, 1);
        for (int k = 1; k <= kmax; ++k) {
            if (k > 1) sol = greedy_enrich(sol, 1);
            rows.push_back(record(c, "greedy-" + std::to_string(k), p.settings.integration, ref, sol, elapsed_ms(t0)));
        }
    };
    auto block_rows = [&](const StripProblem& p, const Reference& ref, int enrich) {
        double ms = 0.0;
        PGDSolution sol = timed([&] { return fixed_point_block(p); }, ms);
        rows.push_back(record(c, "block-2", p.settings.integration, ref, sol, ms));
        const auto t0 = Clock::now();
        for (int k = 1; k <= enrich; ++k) {
            sol = greedy_enrich(sol, 1);
            rows.push_back(record(c, "block-2+greedy-" + std::to_string(k), p.settings.integration, ref, sol,
                                  ms + elapsed_ms(t0)));
        }
        return sol;
    };

    switch (cfg.study) {
        case Study::Locking: {
            for (Integration i : {Integration::Full, Integration::Selective}) {
                SolverSettings s = cfg.settings;
                s.integration = i;
                greedy_rows(StripProblem::make(c, mat, s), klref, 1);
            }
            break;
        }
        case Study::SlendernessSweep: {
            const StripProblem p = StripProblem::make(c, mat, cfg.settings);
            greedy_rows(p, klref, cfg.max_greedy);
            block_rows(p, klref, cfg.enrich_modes);
            break;
        }
        case Study::CompareReference: {
            const auto t0 = Clock::now();
            const ReferenceSolution r =
                solve_reference_2d(c, mat, make_reference_mesh(c, cfg.reference_nz, cfg.reference_aspect));
            const Reference ref{ReferenceKind::Fine2D, r.w_center, r.energy};
            const double ref_ms = elapsed_ms(t0);
            const StripProblem p = StripProblem::make(c, mat, cfg.settings);
            block_rows(p, ref, cfg.enrich_modes);
            greedy_rows(p, ref, cfg.max_greedy);
            const auto t1 = Clock::now();
            const double wa = asymptotic_center_deflection(c, mat), ea = asymptotic_energy(c, mat);
            rows.push_back(oracle_record(c, "asymptotic", integ, ref, wa, ea, elapsed_ms(t1)));
            rows.push_back(oracle_record(c, "kirchhoff-love", integ, ref, kl.w_center, kl.energy, 0.0));
            (void)ref_ms;
            break;
        }
        case Study::DumpModes: {
            const StripProblem p = StripProblem::make(c, mat, cfg.settings);
            const PGDSolution sol = block_rows(p, klref, cfg.enrich_modes);
            std::filesystem::create_directories(cfg.dump_dir);
            char name[128];
            std::snprintf(name, sizeof name, "modes_%s_%g.txt", c.id().c_str(), c.slenderness());
            write_mode_dump(sol, (std::filesystem::path(cfg.dump_dir) / name).string());
            break;
        }
        case Study::LimitOde: {
            const auto t0 = Clock::now();
            const LimitOdeProblem lp = LimitOdeProblem::isotropic(cfg.poisson, c.bc, c.load);
            const LimitOdeSolution ode = solve_limit_ode(lp, cfg.ode_elements);
            const LimitOdeSolution ode_kl = solve_limit_ode(lp.kirchhoff_love(), cfg.ode_elements);
            const double ratio = ode.w_center / ode_kl.w_center;
            const double ms = elapsed_ms(t0);
            // The limit problem is linear in the load once mu is fixed, so center
            // deflections and energies scale alike; compare ratios only.
            rows.push_back(oracle_record(c, "limit-ode", integ, klref, ratio * kl.w_center,
                                         std::numeric_limits<double>::quiet_NaN(), ms));
            const Reference odref{ReferenceKind::LimitODE, ratio * kl.w_center,
                                  std::numeric_limits<double>::quiet_NaN()};
            greedy_rows(StripProblem::make(c, mat, cfg.settings), odref, 1);
            break;
        }
    }
    if (!cfg.timing)
        for (auto& r : rows) r.runtime_ms = 0.0;
    return rows;
}

}  // namespace

std::vector<ConvergenceRecord> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<Task> tasks;
    for (const auto& c : cfg.cases)
        for (double s : cfg.slenderness) tasks.push_back({c, s});
    std::vector<std::vector<ConvergenceRecord>> results(tasks.size());

    auto work = [&](std::size_t i) {
        try {
            results[i] = run_task(cfg, tasks[i]);
        } catch (const std::exception& e) {
            ConvergenceRecord r;
            r.case_id = tasks[i].case_id;
            r.slenderness = tasks[i].slenderness;
            r.n_modes = "-";
            r.integration = to_string(cfg.settings.integration);
            r.defl_err_1 = r.defl_err_2 = r.energy_err = std::numeric_limits<double>::quiet_NaN();
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            r.status = "error: " + msg;
            results[i] = {r};
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned nthreads = cfg.parallel ? std::min<unsigned>(hw, static_cast<unsigned>(tasks.size())) : 1u;
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < tasks.size(); i = next++) work(i);
            });
        for (auto& th : pool) th.join();
    }
    std::vector<ConvergenceRecord> out;
    for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
    return out;
}

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

}  // namespace

std::string format_csv(const std::vector<ConvergenceRecord>& records) {
    std::string s = "case,slenderness,n_modes,integration,reference,defl_err_1,defl_err_2,energy_err,fp_iters,"
                    "runtime_ms,status\n";
    for (const auto& r : records) {
        s += r.case_id + ',' + num(r.slenderness) + ',' + r.n_modes + ',' + r.integration + ',' +
             to_string(r.reference) + ',' + num(r.defl_err_1) + ',' + num(r.defl_err_2) + ',' + num(r.energy_err) +
             ',' + std::to_string(r.fp_iterations) + ',' + num(r.runtime_ms) + ',' + r.status + '\n';
    }
    return s;
}

void write_csv(const std::vector<ConvergenceRecord>& records, const std::string& path) {
    if (records.empty()) throw std::invalid_argument("no records to write");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << format_csv(records);
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string locking_table(const std::vector<ConvergenceRecord>& records) {
    std::vector<double> grid;
    std::map<std::string, std::map<double, double>> rows;
    for (const auto& r : records) {
        if (std::find(grid.begin(), grid.end(), r.slenderness) == grid.end()) grid.push_back(r.slenderness);
        rows[r.integration][r.slenderness] = r.normalized_deflection;
    }
    std::string s;
    char buf[64];
    s += "slenderness          ";
    for (double g : grid) {
        std::snprintf(buf, sizeof buf, "%9g", g);
        s += buf;
    }
    s += '\n';
    for (const char* name : {"full", "selective"}) {
        if (!rows.count(name)) continue;
        std::snprintf(buf, sizeof buf, "%-21s", name);
        s += buf;
        for (double g : grid) {
            const auto it = rows[name].find(g);
            std::snprintf(buf, sizeof buf, "%9.4f", it == rows[name].end() ? std::nan("") : it->second);
            s += buf;
        }
        s += '\n';
    }
    return s;
}

bool all_ok(const std::vector<ConvergenceRecord>& records) {
    return std::all_of(records.begin(), records.end(), [](const ConvergenceRecord& r) { return r.status == "ok"; });
}

}  // namespace pgd_strip
