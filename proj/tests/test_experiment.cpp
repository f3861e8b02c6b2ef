#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "pgd_strip/experiment.hpp"

using namespace pgd_strip;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Config, EmptyFileGivesDefaultSweep) {
    const auto c = parse_config("");
    EXPECT_EQ(c.study, Study::SlendernessSweep);
    EXPECT_EQ(c.cases, (std::vector<std::string>{"SS-SP", "SS-UP", "CC-SP", "CC-UP"}));
    EXPECT_DOUBLE_EQ(c.settings.fp_tolerance, 1e-3);
    EXPECT_EQ(c.settings.n_axial_elements, 64);
    EXPECT_EQ(c.settings.axial_order, AxialOrder::Quadratic);
    EXPECT_EQ(c.settings.thickness_degree, 4);
    EXPECT_EQ(c.settings.integration, Integration::Selective);
    EXPECT_TRUE(c.settings.boundary_layer_mesh);
    EXPECT_FALSE(c.parallel);
}

TEST(Config, LockingDefaults) {
    const auto c = parse_config("study = locking\n");
    EXPECT_EQ(c.study, Study::Locking);
    EXPECT_EQ(c.slenderness, (std::vector<double>{4, 10, 40, 1e2, 4e2, 1e3, 4e3, 1e4}));
    EXPECT_EQ(c.cases, std::vector<std::string>{"SS-SP"});
    EXPECT_EQ(c.settings.axial_order, AxialOrder::Linear);
    EXPECT_FALSE(c.settings.boundary_layer_mesh);
    const auto d = parse_config("study = locking\naxial_order = quadratic\nslenderness = 10, 20\nboundary_layer = yes");
    EXPECT_EQ(d.settings.axial_order, AxialOrder::Quadratic);
    EXPECT_TRUE(d.settings.boundary_layer_mesh);
    EXPECT_EQ(d.slenderness, (std::vector<double>{10, 20}));
}

TEST(Config, CommentsAndWhitespace) {
    const auto c = parse_config("# header\n\n  eta = 1e-5   # tighter\ncases = CC-UP ,SS-SP\r\n");
    EXPECT_DOUBLE_EQ(c.settings.fp_tolerance, 1e-5);
    EXPECT_EQ(c.cases, (std::vector<std::string>{"CC-UP", "SS-SP"}));
}

TEST(Config, ErrorsCarryLineNumbersAndConstraint) {
    EXPECT_NE(error_of("eta = -1").find("eta must be > 0"), std::string::npos);
    EXPECT_NE(error_of("eta = -1").find("line 1"), std::string::npos);
    EXPECT_NE(error_of("study = sweep\n\nfoo = 3").find("line 3"), std::string::npos);
    EXPECT_NE(error_of("study = sweep\n\nfoo = 3").find("unknown key 'foo'"), std::string::npos);
    EXPECT_NE(error_of("# c\nelements = many").find("line 2"), std::string::npos);
    EXPECT_NE(error_of("elements = 2.5").find("integer"), std::string::npos);
    EXPECT_NE(error_of("parallel = maybe").find("true/false"), std::string::npos);
    EXPECT_NE(error_of("slenderness = ,").find("empty"), std::string::npos);
    EXPECT_NE(error_of("slenderness =").find("empty"), std::string::npos);
    EXPECT_NE(error_of("slenderness = 10, 5").find("strictly increasing"), std::string::npos);
    EXPECT_NE(error_of("cases = XX-YY").find("unknown case"), std::string::npos);
    EXPECT_NE(error_of("no equals sign").find("line 1"), std::string::npos);
    EXPECT_NE(error_of("study = flight").find("unknown study"), std::string::npos);
    EXPECT_NE(error_of("poisson = 0.5").find("poisson"), std::string::npos);
    EXPECT_NE(error_of("slenderness = 1.5, 3").find("slenderness > 2"), std::string::npos);
    EXPECT_THROW(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST(Csv, HeaderRowsAndFormat) {
    ConvergenceRecord r;
    r.case_id = "SS-SP";
    r.slenderness = 10.0;
    r.n_modes = "greedy-1";
    r.integration = "selective";
    r.defl_err_1 = 0.125;
    const std::string s = format_csv({r});
    EXPECT_EQ(s,
              "case,slenderness,n_modes,integration,reference,defl_err_1,defl_err_2,energy_err,fp_iters,runtime_ms,"
              "status\nSS-SP,1.00000000000000000e+01,greedy-1,selective,KL,1.25000000000000000e-01,"
              "0.00000000000000000e+00,0.00000000000000000e+00,0,0.00000000000000000e+00,ok\n");
    const auto path = std::filesystem::temp_directory_path() / "pgd_strip_csv_test.csv";
    write_csv({r}, path.string());
    const std::string file = slurp(path);
    EXPECT_EQ(file, s);
    EXPECT_EQ(std::count(file.begin(), file.end(), '\n'), 2);
    EXPECT_EQ(file.find('\r'), std::string::npos);
    std::filesystem::remove(path);
    EXPECT_THROW(write_csv({}, path.string()), std::invalid_argument);
    EXPECT_THROW(write_csv({r}, "/nonexistent_dir/out.csv"), std::runtime_error);
}

TEST(Experiment, LockingStudyProducesSixteenRows) {
    auto cfg = parse_config("study = locking\ntiming = false");
    const auto rows = run_experiment(cfg);
    ASSERT_EQ(rows.size(), 16u);
    EXPECT_TRUE(all_ok(rows));
    EXPECT_EQ(rows[0].integration, "full");
    EXPECT_EQ(rows[1].integration, "selective");
    EXPECT_NEAR(rows[1].normalized_deflection, 1.1543, 5e-3);
    EXPECT_LE(rows[14].normalized_deflection, 1e-3);
    const std::string table = locking_table(rows);
    EXPECT_NE(table.find("selective"), std::string::npos);
    EXPECT_NE(table.find("0.9994"), std::string::npos);
}

TEST(Experiment, OrderingAndDeterminismUnderParallelism) {
    auto cfg = parse_config("slenderness = 10, 100\nmodes = 2\ntiming = false");
    const auto serial = format_csv(run_experiment(cfg));
    cfg.parallel = true;
    const auto parallel = format_csv(run_experiment(cfg));
    EXPECT_EQ(serial, parallel);
    const auto rows = run_experiment(cfg);
    ASSERT_EQ(rows.size(), 4u * 2u * 3u);  // greedy-1, greedy-2, block-2
    EXPECT_EQ(rows.front().case_id, "SS-SP");
    EXPECT_EQ(rows.back().case_id, "CC-UP");
    EXPECT_DOUBLE_EQ(rows[3].slenderness, 100.0);
}

TEST(Experiment, FailedSolvesAreRecordedPerRow) {
    auto cfg = parse_config("cases = CC-UP\nslenderness = 20\nmax_iters = 1\neta = 1e-300\ntiming = false");
    const auto rows = run_experiment(cfg);
    ASSERT_FALSE(rows.empty());
    EXPECT_FALSE(all_ok(rows));
    EXPECT_EQ(rows[0].status, "not-converged");
}

TEST(Experiment, DumpModesWritesFile) {
    const auto dir = std::filesystem::temp_directory_path() / "pgd_strip_dump";
    std::filesystem::remove_all(dir);
    auto cfg = parse_config("study = dump-modes\ndump_dir = " + dir.string());
    const auto rows = run_experiment(cfg);
    EXPECT_EQ(rows.size(), 1u);
    EXPECT_TRUE(std::filesystem::exists(dir / "modes_CC-UP_20.txt"));
    std::filesystem::remove_all(dir);
}

TEST(Experiment, LimitOdeRows) {
    auto cfg = parse_config("study = limit-ode\ncases = CC-UP\nslenderness = 10000");
    const auto rows = run_experiment(cfg);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].n_modes, "limit-ode");
    EXPECT_GT(rows[0].defl_err_1, 0.1);
    EXPECT_EQ(rows[1].reference, ReferenceKind::LimitODE);
    EXPECT_LT(rows[1].defl_err_1, 1e-2);
}
