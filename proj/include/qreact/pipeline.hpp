// Orchestration: classical oracle, history build, solve, block extraction,
// moment measurement, CSV emission.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qreact/config.hpp"
#include "qreact/history_state.hpp"
#include "qreact/moment_meas.hpp"

namespace qreact {

struct BlockMoments {
    double time = 0.0;
    double mean_oracle = 0.0, var_oracle = 0.0;   // direct grid sums
    double mean_exact = 0.0, var_exact = 0.0;     // exact-operator circuit
    std::map<int, double> mean_by_order;          // approximate operators
    std::map<int, double> var_by_order;
};

struct GateCountRow {
    int n = 0;
    long long exact = 0;
    std::map<int, long long> approx_by_order;
};

struct RunReport {
    std::vector<BlockMoments> blocks;
    std::vector<GateCountRow> gate_counts;
    // |x - x_exact| / max(|x_exact|, 1e-12) averaged over time blocks
    std::map<int, double> mean_error_by_order;
    std::map<int, double> var_error_by_order;
    double kappa = 0.0;
    double success_probability = 0.0;  // hhl only
    double fidelity = 1.0;             // vs the ideal solve (1 for classical/ideal)
    double t0_used = 0.0, c_used = 0.0;
    int n_system_qubits = 0;
    std::string mode;
    std::string status = "ok";
    std::vector<Equilibrium> equilibria;

    std::string summary_text() const;
};

// Full pipeline; writes pdf_evolution.csv, moments.csv, gate_counts.csv and
// run_summary.csv into config.output_dir. Deterministic for a fixed seed.
RunReport run_end_to_end(const RunConfig& config);

// Stage entry points used by the CLI subcommands.
std::vector<DiscretePdf> stage_classical(const RunConfig& config, CompositionGrid& grid_out);
HistoryLinearSystem stage_history(const RunConfig& config);

void write_pdf_evolution_csv(const std::string& path, const CompositionGrid& grid,
                             const std::vector<DiscretePdf>& blocks, double dt);
void write_moments_csv(const std::string& path, const std::vector<int>& orders,
                       const std::vector<BlockMoments>& blocks);
void write_run_summary_csv(const std::string& path, const RunReport& report,
                           const RunConfig& config);

// Gate-cost tables: closed-form counts for n in [n_min, n_max]; also emits
// compiled-circuit tallies for n <= 8 next to it when compiled_path != "".
void emit_gate_count_table(const std::string& path, int n_min, int n_max,
                           const std::vector<int>& orders,
                           const std::string& compiled_path = "");

}  // namespace qreact
