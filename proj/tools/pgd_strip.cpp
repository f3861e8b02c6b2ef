// pgd-strip: runs one of the studies and writes the convergence CSV.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pgd_strip/experiment.hpp"

using namespace pgd_strip;

int main(int argc, char** argv) {
    CLI::App app{"Separated-representation solver for thick and thin elastic strips"};
    std::string study, config_path, out_path, grid, case_id, integration;
    int modes = 0;
    bool no_bl = false, parallel = false;

    app.add_option("study", study, "locking | sweep | compare-reference | dump-modes | limit-ode")->required();
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_path, "CSV output path (default: stdout)");
    app.add_option("--slenderness", grid, "comma separated slenderness grid");
    app.add_option("--case", case_id, "load case")->check(CLI::IsMember({"SS-SP", "SS-UP", "CC-SP", "CC-UP"}));
    app.add_option("--integration", integration, "shear integration")->check(CLI::IsMember({"full", "selective"}));
    app.add_option("--modes", modes, "number of greedy modes")->check(CLI::PositiveNumber);
    app.add_flag("--no-boundary-layer", no_bl, "uniform axial mesh");
    app.add_flag("--parallel", parallel, "run (case, slenderness) tasks on a thread pool");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    ExperimentConfig cfg;
    try {
        std::string text;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot read config file '" + config_path + "'");
            std::stringstream ss;
            ss << in.rdbuf();
            text = ss.str();
            if (!text.empty() && text.back() != '\n') text += '\n';
        }
        // Later lines win, so command line values override the file.
        std::string overrides = "study = " + study + "\n";
        if (!out_path.empty()) overrides += "output = " + out_path + "\n";
        if (!grid.empty()) overrides += "slenderness = " + grid + "\n";
        if (!case_id.empty()) overrides += "cases = " + case_id + "\n";
        if (!integration.empty()) overrides += "integration = " + integration + "\n";
        if (modes > 0) overrides += "modes = " + std::to_string(modes) + "\n";
        if (no_bl) overrides += "boundary_layer = false\n";
        if (parallel) overrides += "parallel = true\n";
        cfg = parse_config(text + overrides);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    std::vector<ConvergenceRecord> records;
    try {
        records = run_experiment(cfg);
        if (cfg.output_path.empty()) std::cout << format_csv(records);
        else write_csv(records, cfg.output_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (cfg.study == Study::Locking) std::cerr << locking_table(records);
    for (const auto& r : records)
        if (r.status != "ok")
            std::cerr << r.case_id << " s=" << r.slenderness << " " << r.n_modes << ": " << r.status << "\n";
    return all_ok(records) ? 0 : 2;
}
