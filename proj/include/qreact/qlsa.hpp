// Harrow-Hassidim-Lloyd solve over the statevector simulator: Hermitian
// dilation, phase estimation with exact controlled matrix exponentials,
// eigenvalue-inversion rotation, post-selection and fidelity reporting.
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qreact/history_state.hpp"
#include "qreact/linalg.hpp"
#include "qreact/qsim.hpp"
#include "qreact/sparse.hpp"

namespace qreact {

struct HhlConfig {
    int clock_qubits = 6;
    double t0 = 0.0;        // evolution-time scale; <= 0 selects 3/4 of the
                            // aliasing-free window from the spectrum
    double c = 0.0;         // inversion constant; <= 0 selects 0.9 * sigma_min
    bool shots_mode = false;  // downstream measurements sample instead of
                              // reading exact expectations

    void validate() const;
};

struct HhlResult {
    QuantumState solution_state;      // dilated register, proportional to (0, x)
    double success_probability = 0.0;
    double fidelity_vs_reference = 0.0;
    double t0_used = 0.0;
    double c_used = 0.0;
    int total_qubits = 0;
};

// H = [[0, A], [A^T, 0]], b' = (b, 0); solving H y = b' yields y = (0, x)
// with A x = b.
std::pair<DenseMatrix, std::vector<double>> hermitian_dilation(const DenseMatrix& A,
                                                               std::span<const double> b);

// reference_x is the classical solution of A x = b used for the fidelity
// report (the dilated reference (0, x) is formed internally).
HhlResult hhl_solve(const SparseMatrix& A, std::span<const double> b, const HhlConfig& cfg,
                    std::span<const double> reference_x);

// Convenience overload; the reference is solve_ideal(sys).
HhlResult hhl_solve(const HistoryLinearSystem& sys, const HhlConfig& cfg);

// |<state | ref/||ref||>|^2
double fidelity(const QuantumState& state, std::span<const double> reference);
double fidelity(const QuantumState& state, std::span<const cdouble> reference);

}  // namespace qreact
