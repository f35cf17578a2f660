#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "splinegabor/experiment.hpp"

using namespace splinegabor;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ExperimentConfig fast_config() {
    ExperimentConfig cfg;
    cfg.target = TargetKind::Cylinder;
    cfg.wavenumber = 5.0;
    cfg.method = Method::Dual2;
    cfg.modulation_limit = 40;  // keep the unit run small
    cfg.budgets = {20, 60};
    cfg.output_dir = "experiment_test_out";
    return cfg;
}

}  // namespace

TEST_CASE("configuration validation names the violated bounds") {
    ExperimentConfig cfg = fast_config();
    cfg.modulation_step = 0.6;  // outside (0, 1/order] for order 2
    const auto problems = cfg.validate();
    REQUIRE_FALSE(problems.empty());
    bool mentions_frame_bound = false, mentions_dual_bound = false;
    for (const auto& p : problems) {
        if (p.find("(0, 1/2]") != std::string::npos || p.find("admissibility") != std::string::npos)
            mentions_frame_bound = true;
        if (p.find("2*order - 1") != std::string::npos) mentions_dual_bound = true;
    }
    CHECK(mentions_frame_bound);
    CHECK(mentions_dual_bound);
    CHECK_THROWS_AS(run_experiment(cfg), ConfigurationError);

    ExperimentConfig dual_only = fast_config();
    dual_only.modulation_step = 0.4;  // admissible frame, inadmissible explicit dual
    dual_only.method = Method::Dual1;
    const auto dual_problems = dual_only.validate();
    REQUIRE(dual_problems.size() == 1);
    CHECK(dual_problems.front().find("2*order - 1") != std::string::npos);
}

TEST_CASE("an experiment writes its artifacts and decreasing-error outcomes") {
    const ExperimentConfig cfg = fast_config();
    const auto artifacts = run_experiment(cfg);
    REQUIRE(artifacts.outcomes.size() == 2);
    CHECK(artifacts.outcomes[0].budget == 20);
    CHECK(artifacts.outcomes[1].budget == 60);
    CHECK(artifacts.outcomes[1].report.average <= artifacts.outcomes[0].report.average);

    REQUIRE(artifacts.files.size() == 5);  // two error files, coefficients, summary, plot script
    for (const auto& file : artifacts.files) CHECK(std::filesystem::exists(file));

    const std::string errors = slurp(cfg.output_dir + "/errors_cylinder_k5_dual2_n20.csv");
    CHECK(errors.rfind("x,re_ref,im_ref,re_approx,im_approx,rel_err\n", 0) == 0);
    CHECK(std::count(errors.begin(), errors.end(), '\n') == 602);  // header + 601 rows

    const std::string coeffs = slurp(cfg.output_dir + "/coefficients_cylinder_k5_dual2.csv");
    CHECK(coeffs.rfind("rank,m,n,abs_coeff\n", 0) == 0);
}

TEST_CASE("identical configurations produce byte-identical artifacts") {
    ExperimentConfig cfg_a = fast_config();
    cfg_a.output_dir = "experiment_test_out_a";
    ExperimentConfig cfg_b = fast_config();
    cfg_b.output_dir = "experiment_test_out_b";

    const auto run_a = run_experiment(cfg_a);
    const auto run_b = run_experiment(cfg_b);
    REQUIRE(run_a.files.size() == run_b.files.size());
    for (std::size_t i = 0; i < run_a.files.size(); ++i)
        CHECK(slurp(run_a.files[i]) == slurp(run_b.files[i]));
}

TEST_CASE("spending the whole atom budget reproduces the target") {
    ExperimentConfig cfg = fast_config();
    cfg.method = Method::Canonical;
    cfg.modulation_limit = 30;
    const GaborSystem system = make_primal_system(cfg);
    cfg.budgets = {system.atom_count()};
    const auto artifacts = run_experiment(cfg);
    CHECK(artifacts.outcomes.front().report.average <= 1e-10);
}

TEST_CASE("summary table has the expected shape and survives bad cells") {
    std::vector<ExperimentConfig> configs;
    ExperimentConfig good = fast_config();
    good.output_dir = "experiment_table_out";
    configs.push_back(good);
    ExperimentConfig omp_cfg = good;
    omp_cfg.method = Method::Omp;
    omp_cfg.blocksize = 10;
    configs.push_back(omp_cfg);
    ExperimentConfig bad = good;
    bad.modulation_step = 0.9;  // invalid: the cell must come out as nan
    configs.push_back(bad);

    const std::string csv = emit_table1(configs, "experiment_table_out");
    std::istringstream lines(csv);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "target,k,method,err_20,err_60");
    int rows = 0, nan_rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        if (line.find("nan") != std::string::npos) ++nan_rows;
    }
    CHECK(rows == 3);
    CHECK(nan_rows == 1);
    CHECK(std::filesystem::exists("experiment_table_out/summary_table.csv"));
}
