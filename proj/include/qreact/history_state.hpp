// History-state formulation: one block lower-bidiagonal system A psi = b
// coupling every backward-Euler time level, with direct solve, block
// extraction and a condition-number estimate.
#pragma once

#include <span>
#include <vector>

#include "qreact/fokker_planck.hpp"
#include "qreact/sparse.hpp"

namespace qreact {

struct HistoryLinearSystem {
    SparseMatrix A;          // N_total x N_total
    std::vector<double> b;   // (f0, 0, ..., 0)
    SparseMatrix L;          // the transport generator behind the blocks
    int n_t_qubits = 0;
    int n_phi_qubits = 0;
    double dt = 0.0;

    int block_size() const { return 1 << n_phi_qubits; }
    int n_blocks() const { return 1 << n_t_qubits; }
    int total_dim() const { return block_size() * n_blocks(); }
};

struct HistoryVector {
    std::vector<double> data;
    int n_blocks = 0;
    int block_size = 0;
    double dt = 0.0;

    std::span<const double> block(int k) const;
};

// Block 0 carries the identity row psi_0 = f0; blocks 1..N_t carry
// (I - dt L) psi_k - psi_{k-1} = 0.
HistoryLinearSystem assemble_history_system(const TransportOperator& op, const DiscretePdf& f0,
                                            double dt, int n_t_qubits);

// Direct sparse solve by forward block substitution with the factored
// diagonal block; block k reproduces the k-th backward-Euler iterate.
HistoryVector solve_ideal(const HistoryLinearSystem& sys);

// Block k renormalized to unit integral.
DiscretePdf extract_time_block(const HistoryVector& v, int k);

// kappa(A) estimated by power / inverse-power iteration on A^T A.
double condition_estimate(const HistoryLinearSystem& sys);

// Solves with A and A^T via block substitution (exposed for diagnostics).
std::vector<double> history_solve(const HistoryLinearSystem& sys, std::vector<double> rhs);
std::vector<double> history_solve_transpose(const HistoryLinearSystem& sys, std::vector<double> rhs);

}  // namespace qreact
