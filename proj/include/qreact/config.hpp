// Run configuration: flat "key = value" text files with full defaults.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qreact/chemistry.hpp"
#include "qreact/qlsa.hpp"

namespace qreact {

enum class SolverMode { classical, ideal, hhl };

std::string to_string(SolverMode m);
SolverMode solver_mode_from_string(const std::string& s);

struct RunConfig {
    PsrParams psr;
    int n_t_qubits = 4;
    int n_phi_qubits = 5;
    double dt = 0.15;
    double beta_a = 8.0;
    double beta_b = 8.0;
    SolverMode solver = SolverMode::ideal;
    HhlConfig hhl;
    std::vector<int> orders = {2, 4, 6};
    bool fit_domain_phi = false;
    long shots = 0;  // 0 = exact expectation values
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    double horizon_request = 0.0;  // when set, resolved into dt by finalize()

    int n_time_steps() const { return (1 << n_t_qubits) - 1; }
    double horizon() const { return dt * n_time_steps(); }

    void finalize();  // call after the last key override
    void validate() const;

    // Unknown keys are errors. "horizon" may be given instead of "dt".
    static RunConfig from_file(const std::string& path);
    void apply_key(const std::string& key, const std::string& value);
    std::string describe() const;
};

}  // namespace qreact
