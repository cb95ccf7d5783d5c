// Command-line driver: classical evolution, history build, solves, moment
// measurement, gate-count tables, the full pipeline, and config sweeps.
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qreact/config.hpp"
#include "qreact/pipeline.hpp"
#include "qreact/qlsa.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value
};

qreact::RunConfig load_config(const CommonOpts& o) {
    qreact::RunConfig cfg;
    if (!o.config_path.empty()) cfg = qreact::RunConfig::from_file(o.config_path);
    for (const auto& kv : o.overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("override must be key=value: " + kv);
        cfg.apply_key(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.finalize();
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required = false) {
    auto* copt = cmd->add_option("--config", o.config_path, "configuration file (key = value)");
    if (config_required) copt->required();
    cmd->add_option("--set", o.overrides, "override a config key (key=value, repeatable)");
}

std::string outpath(const qreact::RunConfig& cfg, const char* name) {
    std::filesystem::create_directories(cfg.output_dir);
    return cfg.output_dir + "/" + name;
}

// stage subcommands also leave a run summary, with a failure status if the
// stage throws
int with_summary(const qreact::RunConfig& cfg, const char* mode,
                 const std::function<void(qreact::RunReport&)>& stage) {
    qreact::RunReport report;
    report.mode = mode;
    report.n_system_qubits = cfg.n_t_qubits + cfg.n_phi_qubits;
    try {
        stage(report);
    } catch (...) {
        report.status = "failed";
        qreact::write_run_summary_csv(outpath(cfg, "run_summary.csv"), report, cfg);
        throw;
    }
    qreact::write_run_summary_csv(outpath(cfg, "run_summary.csv"), report, cfg);
    return 0;
}

int run_evolve_classical(const qreact::RunConfig& cfg) {
    return with_summary(cfg, "classical", [&](qreact::RunReport&) {
        qreact::CompositionGrid grid;
        auto traj = qreact::stage_classical(cfg, grid);
        std::vector<qreact::DiscretePdf> blocks(traj.size());
        for (std::size_t k = 0; k < traj.size(); ++k) blocks[k] = qreact::normalized(traj[k], grid);
        qreact::write_pdf_evolution_csv(outpath(cfg, "pdf_evolution.csv"), grid, blocks, cfg.dt);
        std::cout << "wrote " << cfg.output_dir << "/pdf_evolution.csv (" << traj.size()
                  << " time levels, " << grid.n_cells << " cells)\n";
    });
}

int run_build_history(const qreact::RunConfig& cfg) {
    return with_summary(cfg, "build-history", [&](qreact::RunReport& report) {
        qreact::HistoryLinearSystem sys = qreact::stage_history(cfg);
        {
            std::ofstream out(outpath(cfg, "history_A.coo"));
            sys.A.write_coo(out);
        }
        {
            std::ofstream out(outpath(cfg, "history_b.coo"));
            qreact::write_vector_coo(out, sys.b);
        }
        report.kappa = qreact::condition_estimate(sys);
        std::cout << "history system: N_total = " << sys.total_dim() << ", nnz = " << sys.A.nnz()
                  << " (" << static_cast<double>(sys.A.nnz()) / sys.total_dim()
                  << " per row, max " << sys.A.max_nnz_per_row() << ")\n"
                  << "kappa estimate: " << report.kappa << "\n"
                  << "wrote " << cfg.output_dir << "/history_A.coo, history_b.coo\n";
    });
}

int run_solve(const qreact::RunConfig& cfg) {
    auto report = qreact::run_end_to_end(cfg);
    std::cout << report.summary_text();
    return 0;
}

int run_measure(const qreact::RunConfig& cfg) {
    auto report = qreact::run_end_to_end(cfg);
    std::cout << report.summary_text();
    std::cout << "wrote " << cfg.output_dir << "/moments.csv\n";
    return 0;
}

int run_gate_count(const qreact::RunConfig& cfg, int n_min, int n_max) {
    return with_summary(cfg, "gate-count", [&](qreact::RunReport&) {
        qreact::emit_gate_count_table(outpath(cfg, "gate_counts.csv"), n_min, n_max, cfg.orders,
                                      outpath(cfg, "gate_counts_compiled.csv"));
        std::cout << "wrote " << cfg.output_dir
                  << "/gate_counts.csv and gate_counts_compiled.csv\n";
    });
}

int run_sweep(const std::vector<std::string>& config_paths) {
    std::vector<std::future<int>> jobs;
    for (const auto& p : config_paths) {
        jobs.push_back(std::async(std::launch::async, [p]() -> int {
            try {
                auto cfg = qreact::RunConfig::from_file(p);
                cfg.validate();
                auto report = qreact::run_end_to_end(cfg);
                std::cout << "[" + p + "] status " + report.status + "\n";
                return 0;
            } catch (const std::exception& e) {
                std::cerr << "[" + p + "] failed: " + e.what() + "\n";
                return 2;
            }
        }));
    }
    int rc = 0;
    for (auto& j : jobs) rc = std::max(rc, j.get());
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum PDF-method reacting-flow simulator"};
    app.require_subcommand(1);

    CommonOpts evolve_o, hist_o, solve_o, measure_o, gc_o, e2e_o;
    std::string solve_mode;
    int gc_nmin = 1, gc_nmax = 20;
    std::vector<std::string> sweep_configs;

    auto* evolve = app.add_subcommand("evolve-classical", "backward-Euler reference evolution");
    add_common(evolve, evolve_o);

    auto* hist = app.add_subcommand("build-history", "assemble and export the history system");
    add_common(hist, hist_o);

    auto* solve = app.add_subcommand("solve", "solve the history system and export the evolution");
    add_common(solve, solve_o);
    solve->add_option("--mode", solve_mode, "classical | ideal | hhl");

    auto* measure = app.add_subcommand("measure", "run the moment-measurement suite");
    add_common(measure, measure_o);

    auto* gc = app.add_subcommand("gate-count", "emit gate-count tables");
    add_common(gc, gc_o);
    gc->add_option("--n-min", gc_nmin, "smallest qubit count")->check(CLI::Range(1, 30));
    gc->add_option("--n-max", gc_nmax, "largest qubit count")->check(CLI::Range(1, 30));

    auto* e2e = app.add_subcommand("end-to-end", "full pipeline with all CSV outputs");
    add_common(e2e, e2e_o, /*config_required=*/true);

    auto* sweep = app.add_subcommand("sweep", "run several configs concurrently");
    sweep->add_option("--configs", sweep_configs, "configuration files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (evolve->parsed()) return run_evolve_classical(load_config(evolve_o));
        if (hist->parsed()) return run_build_history(load_config(hist_o));
        if (solve->parsed()) {
            auto cfg = load_config(solve_o);
            if (!solve_mode.empty()) cfg.solver = qreact::solver_mode_from_string(solve_mode);
            cfg.validate();
            return run_solve(cfg);
        }
        if (measure->parsed()) return run_measure(load_config(measure_o));
        if (gc->parsed()) return run_gate_count(load_config(gc_o), gc_nmin, gc_nmax);
        if (e2e->parsed()) return run_solve(load_config(e2e_o));
        if (sweep->parsed()) return run_sweep(sweep_configs);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
