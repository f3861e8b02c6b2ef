#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgd_strip/metrics.hpp"
#include "pgd_strip/model.hpp"

namespace pgd_strip {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Study { Locking, SlendernessSweep, CompareReference, DumpModes, LimitOde };

std::string to_string(Study s);
Study parse_study(const std::string& s);

struct ExperimentConfig {
    Study study = Study::SlendernessSweep;
    std::vector<std::string> cases;
    std::vector<double> slenderness;
    SolverSettings settings;
    double young = 1e9;
    double poisson = 0.3;
    double amplitude = 1.0;
    double length = 1.0;
    int max_greedy = 1;        // greedy-1..k rows
    int enrich_modes = 0;      // block-2+greedy-1..k rows
    int reference_nz = 10;
    double reference_aspect = 2.0;
    int ode_elements = 256;
    std::string output_path;
    std::string dump_dir = ".";
    bool parallel = false;
    bool timing = true;
    std::set<std::string> explicit_keys;

    // Fill study-specific defaults for keys the user did not set, then check invariants.
    void finalize();
    void validate() const;
};

// Line-oriented `key = value`; `#` starts a comment; lists are comma separated.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::vector<ConvergenceRecord> run_experiment(const ExperimentConfig& cfg);

std::string format_csv(const std::vector<ConvergenceRecord>& records);
void write_csv(const std::vector<ConvergenceRecord>& records, const std::string& path);

// Rows of the locking study rendered as the two-row normalized deflection table.
std::string locking_table(const std::vector<ConvergenceRecord>& records);

bool all_ok(const std::vector<ConvergenceRecord>& records);

}  // namespace pgd_strip
