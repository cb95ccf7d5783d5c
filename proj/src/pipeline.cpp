#include "qreact/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qreact/qlsa.hpp"

namespace qreact {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

double rel_err(double x, double ref) { return std::fabs(x - ref) / std::max(std::fabs(ref), 1e-12); }

}  // namespace

std::string RunReport::summary_text() const {
    std::ostringstream os;
    os << "mode " << mode << ", status " << status << "\n";
    os << "kappa(A) ~ " << kappa << ", fidelity " << fidelity;
    if (mode == "hhl") os << ", success probability " << success_probability;
    os << "\n";
    os << "drift equilibria:";
    for (const auto& e : equilibria)
        os << " " << e.location << (e.stability == Stability::stable ? " (stable)" : " (unstable)");
    os << "\n";
    for (const auto& [m, err] : mean_error_by_order) {
        os << "order " << m << ": mean err " << 100.0 * err << "%, var err "
           << 100.0 * var_error_by_order.at(m) << "%\n";
    }
    return os.str();
}

std::vector<DiscretePdf> stage_classical(const RunConfig& config, CompositionGrid& grid_out) {
    grid_out = build_grid(config.n_phi_qubits);
    TransportOperator op = assemble_transport_operator(grid_out, config.psr);
    DiscretePdf f0 = init_beta(grid_out, config.beta_a, config.beta_b);
    return evolve_classical(f0, op, config.dt, config.n_time_steps());
}

HistoryLinearSystem stage_history(const RunConfig& config) {
    CompositionGrid grid = build_grid(config.n_phi_qubits);
    TransportOperator op = assemble_transport_operator(grid, config.psr);
    DiscretePdf f0 = init_beta(grid, config.beta_a, config.beta_b);
    return assemble_history_system(op, f0, config.dt, config.n_t_qubits);
}

void write_pdf_evolution_csv(const std::string& path, const CompositionGrid& grid,
                             const std::vector<DiscretePdf>& blocks, double dt) {
    auto out = open_out(path);
    out << "time,phi,f\n";
    for (std::size_t k = 0; k < blocks.size(); ++k)
        for (int j = 0; j < grid.n_cells; ++j)
            out << fmt(k * dt) << ',' << fmt(grid.centers[j]) << ',' << fmt(blocks[k].values[j])
                << '\n';
}

void write_moments_csv(const std::string& path, const std::vector<int>& orders,
                       const std::vector<BlockMoments>& blocks) {
    auto out = open_out(path);
    out << "time,mean_exact,var_exact";
    for (int m : orders) out << ",mean_m" << m << ",var_m" << m;
    out << ",mean_oracle,var_oracle\n";
    for (const auto& b : blocks) {
        out << fmt(b.time) << ',' << fmt(b.mean_exact) << ',' << fmt(b.var_exact);
        for (int m : orders) out << ',' << fmt(b.mean_by_order.at(m)) << ',' << fmt(b.var_by_order.at(m));
        out << ',' << fmt(b.mean_oracle) << ',' << fmt(b.var_oracle) << '\n';
    }
}

void write_run_summary_csv(const std::string& path, const RunReport& report,
                           const RunConfig& config) {
    auto out = open_out(path);
    out << "mode,n_system,clock,t0,c,success_prob,fidelity,kappa,status\n";
    out << report.mode << ',' << report.n_system_qubits << ',';
    if (report.mode == "hhl")
        out << config.hhl.clock_qubits << ',' << fmt(report.t0_used) << ',' << fmt(report.c_used)
            << ',' << fmt(report.success_probability);
    else
        out << ",,,";
    out << ',' << fmt(report.fidelity) << ',' << fmt(report.kappa) << ',' << report.status << '\n';
}

void emit_gate_count_table(const std::string& path, int n_min, int n_max,
                           const std::vector<int>& orders, const std::string& compiled_path) {
    if (n_min < 1 || n_max > 30 || n_min > n_max)
        throw std::invalid_argument("emit_gate_count_table: n range must lie in [1,30]");
    {
        auto out = open_out(path);
        out << "n,exact_count";
        for (int m : orders) out << ",approx_m" << m;
        out << '\n';
        for (int n = n_min; n <= n_max; ++n) {
            out << n << ',' << gate_count_exact(n);
            for (int m : orders) out << ',' << gate_count_approx(n, m);
            out << '\n';
        }
    }
    if (compiled_path.empty()) return;

    // compiled tallies for the q = phi statistic, desk-scale register sizes
    auto out = open_out(compiled_path);
    out << "n,mode,cnots,rzs,compiled_total,formula_total\n";
    for (int n = std::max(1, n_min); n <= std::min(8, n_max); ++n) {
        CompositionGrid grid = build_grid(n);
        PhaseProfile prof = phase_profile(grid.centers, "phi");
        DiagonalPhaseProgram ex = exact_program(prof, n);
        out << n << ",exact," << ex.cnot_count << ',' << ex.rz_count << ','
            << (ex.cnot_count + ex.rz_count) << ',' << gate_count_exact(n) << '\n';
        for (int m : orders) {
            if (m >= grid.n_cells) continue;
            DiagonalPhaseProgram ap = approx_program(prof, m, n);
            out << n << ",approx_m" << m << ',' << ap.cnot_count << ',' << ap.rz_count << ','
                << (ap.cnot_count + ap.rz_count) << ',' << gate_count_approx(n, m) << '\n';
        }
    }
}

RunReport run_end_to_end(const RunConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.output_dir);
    auto path = [&](const char* name) { return config.output_dir + "/" + name; };

    RunReport report;
    report.mode = to_string(config.solver);

    try {
        CompositionGrid grid;
        std::vector<DiscretePdf> oracle_traj = stage_classical(config, grid);
        HistoryLinearSystem sys = stage_history(config);
        report.kappa = condition_estimate(sys);
        report.n_system_qubits = config.n_t_qubits + config.n_phi_qubits;
        report.equilibria = find_equilibria(config.psr, 1e-12);

        const int n_blocks = sys.n_blocks();
        const int bs = sys.block_size();

        // chosen solve
        QuantumState psi;           // measurement source
        int block_offset = 0;       // index of time block 0 within psi
        std::vector<DiscretePdf> export_blocks(n_blocks);
        if (config.solver == SolverMode::classical) {
            std::vector<double> concat;
            concat.reserve(static_cast<std::size_t>(n_blocks) * bs);
            for (const auto& f : oracle_traj)
                concat.insert(concat.end(), f.values.begin(), f.values.end());
            psi = prepare_amplitudes(std::span<const double>(concat));
            for (int k = 0; k < n_blocks; ++k) export_blocks[k] = normalized(oracle_traj[k], grid);
        } else if (config.solver == SolverMode::ideal) {
            HistoryVector v = solve_ideal(sys);
            psi = prepare_amplitudes(std::span<const double>(v.data));
            for (int k = 0; k < n_blocks; ++k) export_blocks[k] = extract_time_block(v, k);
        } else {
            HhlResult hhl = hhl_solve(sys, config.hhl);
            report.success_probability = hhl.success_probability;
            report.fidelity = hhl.fidelity_vs_reference;
            report.t0_used = hhl.t0_used;
            report.c_used = hhl.c_used;
            psi = hhl.solution_state;
            block_offset = n_blocks;  // solution lives in the dilated lower half
            for (int k = 0; k < n_blocks; ++k) {
                DiscretePdf f;
                f.values.resize(bs);
                for (int j = 0; j < bs; ++j)
                    f.values[j] = psi.amps[static_cast<std::size_t>(n_blocks + k) * bs + j].real();
                export_blocks[k] = normalized(std::move(f), grid);
            }
        }

        write_pdf_evolution_csv(path("pdf_evolution.csv"), grid, export_blocks, config.dt);

        // moment measurement: exact operator plus each configured order
        std::mt19937_64 rng(config.seed);
        auto q_mean = [](double phi) { return phi; };
        auto q_sq = [](double phi) { return phi * phi; };
        report.blocks.resize(n_blocks);
        for (int k = 0; k < n_blocks; ++k) {
            BlockMoments& bm = report.blocks[k];
            bm.time = k * config.dt;
            DiscretePdf oracle_f = normalized(oracle_traj[k], grid);
            bm.mean_oracle = grid_moment(oracle_f, grid, q_mean);
            bm.var_oracle = grid_moment(oracle_f, grid, q_sq) - bm.mean_oracle * bm.mean_oracle;

            MeasureOptions opt;
            opt.shots = config.shots;
            opt.rng = &rng;
            opt.fit_domain_phi = config.fit_domain_phi;
            opt.mode = PhaseMode::exact;
            double e1 = estimate_statistic(psi, grid, q_mean, block_offset + k, opt);
            double e2 = estimate_statistic(psi, grid, q_sq, block_offset + k, opt);
            bm.mean_exact = e1;
            bm.var_exact = e2 - e1 * e1;
            for (int m : config.orders) {
                opt.mode = PhaseMode::approx;
                opt.order = m;
                double a1 = estimate_statistic(psi, grid, q_mean, block_offset + k, opt);
                double a2 = estimate_statistic(psi, grid, q_sq, block_offset + k, opt);
                bm.mean_by_order[m] = a1;
                bm.var_by_order[m] = a2 - a1 * a1;
            }
        }
        for (int m : config.orders) {
            double em = 0.0, ev = 0.0;
            for (const auto& b : report.blocks) {
                em += rel_err(b.mean_by_order.at(m), b.mean_exact);
                ev += rel_err(b.var_by_order.at(m), b.var_exact);
            }
            report.mean_error_by_order[m] = em / n_blocks;
            report.var_error_by_order[m] = ev / n_blocks;
        }

        write_moments_csv(path("moments.csv"), config.orders, report.blocks);
        for (int n = 1; n <= 20; ++n) {
            GateCountRow row;
            row.n = n;
            row.exact = gate_count_exact(n);
            for (int m : config.orders) row.approx_by_order[m] = gate_count_approx(n, m);
            report.gate_counts.push_back(std::move(row));
        }
        emit_gate_count_table(path("gate_counts.csv"), 1, 20, config.orders,
                              path("gate_counts_compiled.csv"));
        write_run_summary_csv(path("run_summary.csv"), report, config);
    } catch (const std::exception& e) {
        report.status = std::string("failed: ") + e.what();
        write_run_summary_csv(path("run_summary.csv"), report, config);
        throw;
    }
    return report;
}

}  // namespace qreact
