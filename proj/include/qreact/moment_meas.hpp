// Statistics measurement: phase profiles theta_j = arccos q(phi_j), exact
// Pauli-Z / Vandermonde decomposition of the diagonal unitary, polynomial
// approximation, CNOT+Rz compilation, the ancilla interference circuit, and
// closed-form gate-count formulas.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qreact/bigfloat.hpp"
#include "qreact/fokker_planck.hpp"
#include "qreact/qsim.hpp"

namespace qreact {

struct PhaseProfile {
    std::vector<double> theta;   // arccos of the statistic, in [0, pi]
    std::string statistic_label;
    double max_clip = 0.0;       // largest |q|-1 excess absorbed by clipping
};

// theta_j = arccos(q_j) with q_j clipped to [-1,1]; |q_j| beyond 1+1e-12 is a
// domain error (unnormalized statistic).
PhaseProfile phase_profile(std::span<const double> q_values, std::string label = "q");

// Real polynomial in the commuting Z-string algebra. Masks live in
// basis-index bit space: mask bit (n-1-q) set means a Z on qubit q, so
// evaluate() is a signed sum over popcount(mask & j).
struct ZStringPolynomial {
    int n_qubits = 0;
    std::map<std::uint32_t, Coeff> terms;  // empty mask = identity term

    double evaluate(std::uint32_t basis_index) const;
    Coeff coefficient(std::uint32_t mask) const;
    // one-indexed qubit labels, qubit 1 = most significant
    static std::uint32_t mask_of_qubits(int n, std::span<const int> one_indexed_qubits);
};

// D = diag(0,...,2^n-1) expanded over {I, Z_j}.
ZStringPolynomial pauli_decompose_D(int n);
ZStringPolynomial zstring_multiply(const ZStringPolynomial& a, const ZStringPolynomial& b);
ZStringPolynomial zstring_power(const ZStringPolynomial& base, int k);

// Monomial coefficients of the interpolant of theta_j against the index j
// (Newton divided differences; algebraically the Vandermonde solve).
// Limited to N <= 32; throws on residual > 1e-8.
std::vector<Coeff> exact_alpha(const PhaseProfile& profile);

// Degree-m least-squares fit of theta_j against j (Chebyshev basis mapped to
// [0, N-1], re-expanded in monomials). fit_domain_phi fits against phi = j/N
// instead; on a uniform grid this is an affine reparametrization.
std::vector<Coeff> fit_beta(const PhaseProfile& profile, int m, bool fit_domain_phi = false);

// p(x) = sum_k coeffs[k] x^k, Horner in quad precision.
double poly_eval(std::span<const Coeff> coeffs, double x);

enum class PhaseMode { exact, approx };

struct DiagonalPhaseProgram {
    PhaseMode mode = PhaseMode::exact;
    int order = -1;                       // approx order m, -1 for exact
    int n_qubits = 0;
    std::vector<double> diagonal_phases;  // the program's action: e^{i phase_j}
    std::vector<Coeff> coeffs;            // alpha or beta (empty when unavailable)
    std::optional<Circuit> compiled;      // CNOT+Rz realization
    double global_phase = 0.0;            // identity-term phase of the compilation
    long long cnot_count = 0;
    long long rz_count = 0;
};

// Compile exp(i sum_k coeffs[k] D^k): expand through the Z-string algebra,
// one CNOT ladder + Rz(-2c) per string. Verified against the direct diagonal
// exponential for n <= 5; n <= 10 overall.
DiagonalPhaseProgram compile_phase_unitary(std::span<const Coeff> coeffs, PhaseMode which, int n);

// Compile an arbitrary phase diagonal through its Walsh-Hadamard Z-string
// coefficients (stable at any n <= 10; used for exact-mode circuits past the
// Vandermonde conditioning limit).
DiagonalPhaseProgram compile_diagonal(std::span<const double> theta, int n);

// Program whose diagonal is exactly e^{i theta_j}; carries the alpha
// coefficients and a compiled circuit where feasible.
DiagonalPhaseProgram exact_program(const PhaseProfile& profile, int n);

// Program whose diagonal is e^{i p_m(j)} for the degree-m fit.
DiagonalPhaseProgram approx_program(const PhaseProfile& profile, int m, int n);

// The ancilla interference circuit: H_a, controlled state preparation, X_a,
// controlled-(U H^{xn}), H_a. Ancilla is qubit 0; <Z>_a = Re<q~|psi>.
Circuit build_measurement_circuit(std::span<const cdouble> psi, const DiagonalPhaseProgram& program,
                                  int n);

struct MeasureOptions {
    PhaseMode mode = PhaseMode::exact;
    int order = -1;               // required for approx
    bool fit_domain_phi = false;
    long shots = 0;               // 0 = exact expectations
    std::mt19937_64* rng = nullptr;
};

// Ratio protocol: <Z> with q on the target block over <Z> with the block
// indicator; equals sum_block q_j f_j / sum_block f_j. block_index addresses
// aligned blocks of grid.n_cells amplitudes; -1 treats the whole state as one
// composition register.
double estimate_statistic(const QuantumState& psi, const CompositionGrid& grid,
                          const std::function<double(double)>& q, int block_index,
                          const MeasureOptions& opts = {});

// Closed-form operation counts.
long long gate_count_term(int k);                  // sum_j C(k,j)(2j+1)
long long gate_count_exact(int n);                 // 2^{n-1}(n^2+2n+2) - (n+1)
long long gate_count_approx(int n, int m);         // truncated term sums

}  // namespace qreact
