// Statevector simulator. Convention fixed repo-wide: qubit 0 is the most
// significant bit of the computational-basis index.
#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qreact {

using cdouble = std::complex<double>;

struct QuantumState {
    int n_qubits = 0;
    std::vector<cdouble> amps;

    std::size_t dim() const { return amps.size(); }
    double norm() const;
    // bit of `qubit` within basis index `idx`
    bool bit(std::size_t idx, int qubit) const {
        return (idx >> (n_qubits - 1 - qubit)) & 1u;
    }
};

// |0...0> on n qubits, n in [1,22].
QuantumState new_state(int n_qubits);

struct Gate {
    enum class Kind { H, X, Z, Rz, Ry, CNOT, CPhase, Diagonal, Prepare, HLayer };

    Kind kind = Kind::H;
    int target = -1;               // single-qubit kinds and CNOT/CPhase
    int control = -1;              // -1 = uncontrolled
    double angle = 0.0;            // Rz, Ry, CPhase
    std::vector<int> targets;      // register kinds: Diagonal, Prepare, HLayer
    std::vector<double> phases;    // Diagonal: theta over the register index
    std::vector<cdouble> prep;     // Prepare: normalized target amplitudes
    std::string label;             // Prepare: display label

    static Gate single(Kind k, int q, double angle = 0.0, int control = -1);
    static Gate h(int q) { return single(Kind::H, q); }
    static Gate x(int q) { return single(Kind::X, q); }
    static Gate z(int q) { return single(Kind::Z, q); }
    static Gate rz(int q, double theta) { return single(Kind::Rz, q, theta); }
    static Gate ry(int q, double theta) { return single(Kind::Ry, q, theta); }
    static Gate cnot(int control, int target) { return single(Kind::CNOT, target, 0.0, control); }
    static Gate cphase(int control, int target, double theta) {
        return single(Kind::CPhase, target, theta, control);
    }
    static Gate diagonal(std::vector<int> regs, std::vector<double> theta, int control = -1);
    static Gate prepare(std::vector<int> regs, std::vector<cdouble> target_amps,
                        int control = -1, std::string label = "U_psi");
    static Gate h_layer(std::vector<int> regs, int control = -1);

    std::string kind_name() const;
};

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;
    std::map<std::string, int> tally;

    explicit Circuit(int n = 0) : n_qubits(n) {}
    void add(Gate g);  // validates qubit ranges
};

void apply_gate(QuantumState& state, const Gate& gate);
void apply_circuit(QuantumState& state, const Circuit& circuit);

// Normalized copy of an arbitrary nonzero vector as a state.
QuantumState prepare_amplitudes(std::span<const cdouble> target);
QuantumState prepare_amplitudes(std::span<const double> target);

// Exact <Z> on `qubit` from the amplitudes.
double expectation_z(const QuantumState& state, int qubit);
// Unbiased finite-shot estimate.
double expectation_z_sampled(const QuantumState& state, int qubit, long shots, std::mt19937_64& rng);

cdouble inner_product(const QuantumState& a, const QuantumState& b);

// Debug dump, one "index,re,im" row per amplitude.
void dump_statevector_csv(const QuantumState& state, std::ostream& os);

}  // namespace qreact
