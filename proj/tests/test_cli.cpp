#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qreact/config.hpp"
#include "qreact/pipeline.hpp"

using namespace qreact;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string temp_dir(const char* tag) {
    auto p = std::filesystem::temp_directory_path() / (std::string("qreact_test_") + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p.string();
}

RunConfig small_config(const char* tag) {
    RunConfig cfg;
    cfg.n_t_qubits = 2;
    cfg.n_phi_qubits = 3;
    cfg.dt = 0.3;
    cfg.output_dir = temp_dir(tag);
    return cfg;
}

}  // namespace

TEST_CASE("config files parse with comments, defaults and overrides") {
    auto dir = temp_dir("cfg");
    auto path = dir + "/run.cfg";
    {
        std::ofstream out(path);
        out << "# comment line\n"
            << "n_t_qubits = 3\n"
            << "n_phi_qubits = 4   # trailing comment\n"
            << "dt = 0.2\n"
            << "solver = hhl\n"
            << "clock_qubits = 5\n"
            << "orders = 2, 4\n"
            << "seed = 11\n";
    }
    auto cfg = RunConfig::from_file(path);
    CHECK(cfg.n_t_qubits == 3);
    CHECK(cfg.n_phi_qubits == 4);
    CHECK(cfg.dt == doctest::Approx(0.2));
    CHECK(cfg.solver == SolverMode::hhl);
    CHECK(cfg.hhl.clock_qubits == 5);
    CHECK(cfg.orders == std::vector<int>{2, 4});
    CHECK(cfg.seed == 11);
    CHECK(cfg.horizon() == doctest::Approx(0.2 * 7));

    cfg.apply_key("horizon", "1.4");
    cfg.finalize();
    CHECK(cfg.dt == doctest::Approx(0.2));

    CHECK_THROWS_AS(cfg.apply_key("no_such_key", "1"), std::invalid_argument);
}

TEST_CASE("config invariants") {
    RunConfig cfg;
    cfg.n_t_qubits = 9;
    cfg.n_phi_qubits = 9;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = RunConfig{};
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = RunConfig{};
    cfg.orders = {40};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("ideal end-to-end run writes every CSV with the demanded headers") {
    auto cfg = small_config("ideal");
    auto report = run_end_to_end(cfg);
    CHECK(report.status == "ok");

    auto pdf = slurp(cfg.output_dir + "/pdf_evolution.csv");
    CHECK(pdf.rfind("time,phi,f\n", 0) == 0);

    auto mom = slurp(cfg.output_dir + "/moments.csv");
    CHECK(mom.rfind("time,mean_exact,var_exact,mean_m2,var_m2,mean_m4,var_m4,"
                    "mean_m6,var_m6,mean_oracle,var_oracle\n", 0) == 0);

    auto gc = slurp(cfg.output_dir + "/gate_counts.csv");
    CHECK(gc.rfind("n,exact_count,approx_m2,approx_m4,approx_m6\n", 0) == 0);

    auto rs = slurp(cfg.output_dir + "/run_summary.csv");
    CHECK(rs.rfind("mode,n_system,clock,t0,c,success_prob,fidelity,kappa,status\n", 0) == 0);
    CHECK(rs.find(",ok") != std::string::npos);

    // exact-operator means match the grid-moment oracle
    for (const auto& b : report.blocks) {
        CHECK(b.mean_exact == doctest::Approx(b.mean_oracle).epsilon(1e-8));
    }
}

TEST_CASE("classical and ideal modes export identical evolutions") {
    auto c1 = small_config("cls");
    c1.solver = SolverMode::classical;
    run_end_to_end(c1);
    auto c2 = small_config("idl2");
    c2.solver = SolverMode::ideal;
    run_end_to_end(c2);
    std::istringstream a(slurp(c1.output_dir + "/pdf_evolution.csv"));
    std::istringstream b(slurp(c2.output_dir + "/pdf_evolution.csv"));
    std::string la, lb;
    std::getline(a, la);
    std::getline(b, lb);
    CHECK(la == lb);
    while (std::getline(a, la) && std::getline(b, lb)) {
        double ta, pa, fa, tb, pb, fb;
        REQUIRE(std::sscanf(la.c_str(), "%lf,%lf,%lf", &ta, &pa, &fa) == 3);
        REQUIRE(std::sscanf(lb.c_str(), "%lf,%lf,%lf", &tb, &pb, &fb) == 3);
        CHECK(ta == tb);
        CHECK(pa == pb);
        CHECK(fa == doctest::Approx(fb).epsilon(1e-12));
    }
}

TEST_CASE("identical config and seed give bit-identical outputs") {
    auto c1 = small_config("det1");
    c1.seed = 5;
    run_end_to_end(c1);
    auto c2 = small_config("det2");
    c2.seed = 5;
    run_end_to_end(c2);
    for (const char* f : {"pdf_evolution.csv", "moments.csv", "run_summary.csv"})
        CHECK(slurp(c1.output_dir + "/" + f) == slurp(c2.output_dir + "/" + f));
}

TEST_CASE("hhl end-to-end at reduced size") {
    auto cfg = small_config("hhl");
    cfg.solver = SolverMode::hhl;
    cfg.hhl.clock_qubits = 8;
    auto report = run_end_to_end(cfg);
    CHECK(report.fidelity >= 0.99);
    CHECK(report.success_probability > 1e-8);
    auto rs = slurp(cfg.output_dir + "/run_summary.csv");
    CHECK(rs.find("hhl,") != std::string::npos);
}

TEST_CASE("failures still leave a run summary with a status") {
    auto cfg = small_config("fail");
    cfg.solver = SolverMode::hhl;
    cfg.hhl.clock_qubits = 20;  // exceeds the qubit budget
    CHECK_THROWS(run_end_to_end(cfg));
    auto rs = slurp(cfg.output_dir + "/run_summary.csv");
    CHECK(rs.find("failed:") != std::string::npos);
}

TEST_CASE("gate-count table values") {
    auto dir = temp_dir("gc");
    emit_gate_count_table(dir + "/gate_counts.csv", 1, 3, {2});
    auto text = slurp(dir + "/gate_counts.csv");
    CHECK(text == "n,exact_count,approx_m2\n"
                  "1,3,9\n"
                  "2,17,14\n"
                  "3,64,14\n");
}

TEST_CASE("compiled tallies are emitted next to the formula table") {
    auto dir = temp_dir("gcc");
    emit_gate_count_table(dir + "/gate_counts.csv", 1, 6, {2, 4}, dir + "/compiled.csv");
    auto text = slurp(dir + "/compiled.csv");
    CHECK(text.rfind("n,mode,cnots,rzs,compiled_total,formula_total\n", 0) == 0);
    CHECK(text.find("6,exact,") != std::string::npos);
}

TEST_CASE("run report carries the gate-count table") {
    auto cfg = small_config("gcr");
    auto report = run_end_to_end(cfg);
    REQUIRE(report.gate_counts.size() == 20);
    CHECK(report.gate_counts[1].n == 2);
    CHECK(report.gate_counts[1].exact == 17);
    CHECK(report.gate_counts[1].approx_by_order.at(2) == 14);
}

TEST_CASE("malformed config lines carry file and line context") {
    auto dir = temp_dir("badcfg");
    auto path = dir + "/bad.cfg";
    {
        std::ofstream out(path);
        out << "dt = 0.2\nthis line has no equals\n";
    }
    try {
        RunConfig::from_file(path);
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }

    {
        std::ofstream out(path);
        out << "dt = not_a_number\n";
    }
    CHECK_THROWS_AS(RunConfig::from_file(path), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::from_file(dir + "/missing.cfg"), std::invalid_argument);
}

TEST_CASE("sampled end-to-end runs are reproducible for a fixed seed") {
    auto c1 = small_config("shots1");
    c1.shots = 20000;
    c1.seed = 77;
    auto r1 = run_end_to_end(c1);
    auto c2 = small_config("shots2");
    c2.shots = 20000;
    c2.seed = 77;
    auto r2 = run_end_to_end(c2);
    CHECK(slurp(c1.output_dir + "/moments.csv") == slurp(c2.output_dir + "/moments.csv"));
    // sampled moments sit near the exact ones
    for (std::size_t k = 0; k < r1.blocks.size(); ++k)
        CHECK(r1.blocks[k].mean_exact == doctest::Approx(r1.blocks[k].mean_oracle).epsilon(0.05));
}

TEST_CASE("fitting against phi instead of the index changes nothing on uniform grids") {
    auto c1 = small_config("fidx");
    auto r1 = run_end_to_end(c1);
    auto c2 = small_config("fphi");
    c2.fit_domain_phi = true;
    auto r2 = run_end_to_end(c2);
    for (int m : {2, 4, 6}) {
        CHECK(r1.mean_error_by_order.at(m) ==
              doctest::Approx(r2.mean_error_by_order.at(m)).epsilon(1e-8));
    }
}
