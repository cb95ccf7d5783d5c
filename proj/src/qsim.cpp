#include "qreact/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace qreact {

namespace {
constexpr double kSqrt1_2 = 0.70710678118654752440;

std::size_t qubit_mask(int n_qubits, int q) {
    return std::size_t{1} << (n_qubits - 1 - q);
}
}  // namespace

double QuantumState::norm() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

QuantumState new_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 22)
        throw std::out_of_range("new_state: n_qubits must be in [1,22]");
    QuantumState s;
    s.n_qubits = n_qubits;
    s.amps.assign(std::size_t{1} << n_qubits, cdouble{});
    s.amps[0] = 1.0;
    return s;
}

Gate Gate::single(Kind k, int q, double angle, int control) {
    Gate g;
    g.kind = k;
    g.target = q;
    g.angle = angle;
    g.control = control;
    return g;
}

Gate Gate::diagonal(std::vector<int> regs, std::vector<double> theta, int control) {
    Gate g;
    g.kind = Kind::Diagonal;
    if (theta.size() != (std::size_t{1} << regs.size()))
        throw std::invalid_argument("Gate::diagonal: phase table size must be 2^register");
    g.targets = std::move(regs);
    g.phases = std::move(theta);
    g.control = control;
    return g;
}

Gate Gate::prepare(std::vector<int> regs, std::vector<cdouble> target_amps, int control,
                   std::string label) {
    Gate g;
    g.kind = Kind::Prepare;
    if (target_amps.size() != (std::size_t{1} << regs.size()))
        throw std::invalid_argument("Gate::prepare: amplitude table size must be 2^register");
    double n2 = 0.0;
    for (const auto& a : target_amps) n2 += std::norm(a);
    if (n2 == 0.0) throw std::invalid_argument("Gate::prepare: zero target vector");
    double inv = 1.0 / std::sqrt(n2);
    for (auto& a : target_amps) a *= inv;
    g.targets = std::move(regs);
    g.prep = std::move(target_amps);
    g.control = control;
    g.label = std::move(label);
    return g;
}

Gate Gate::h_layer(std::vector<int> regs, int control) {
    Gate g;
    g.kind = Kind::HLayer;
    g.targets = std::move(regs);
    g.control = control;
    return g;
}

std::string Gate::kind_name() const {
    switch (kind) {
        case Kind::H: return "H";
        case Kind::X: return "X";
        case Kind::Z: return "Z";
        case Kind::Rz: return "Rz";
        case Kind::Ry: return "Ry";
        case Kind::CNOT: return "CNOT";
        case Kind::CPhase: return "CPhase";
        case Kind::Diagonal: return control >= 0 ? "C-Diagonal" : "Diagonal";
        case Kind::Prepare: return control >= 0 ? "C-" + label : label;
        case Kind::HLayer: return control >= 0 ? "C-HLayer" : "HLayer";
    }
    return "?";
}

void Circuit::add(Gate g) {
    auto check = [&](int q) {
        if (q < 0 || q >= n_qubits) throw std::out_of_range("Circuit::add: qubit out of range");
    };
    std::vector<int> used;
    if (g.target >= 0 || (g.targets.empty() && g.kind != Gate::Kind::Diagonal)) check(g.target);
    if (g.target >= 0) used.push_back(g.target);
    for (int q : g.targets) {
        check(q);
        used.push_back(q);
    }
    if (g.control >= 0) {
        check(g.control);
        used.push_back(g.control);
    }
    std::sort(used.begin(), used.end());
    if (std::adjacent_find(used.begin(), used.end()) != used.end())
        throw std::invalid_argument("Circuit::add: targets and controls must be disjoint");
    ++tally[g.kind_name()];
    gates.push_back(std::move(g));
}

namespace {

// u = [[a,b],[c,d]] on `target`, optionally controlled
void apply_single(QuantumState& s, int target, int control, cdouble a, cdouble b, cdouble c,
                  cdouble d) {
    const std::size_t tm = qubit_mask(s.n_qubits, target);
    const std::size_t cm = control >= 0 ? qubit_mask(s.n_qubits, control) : 0;
    const std::size_t dim = s.dim();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & tm) continue;
        if (cm && !(i & cm)) continue;
        const std::size_t j = i | tm;
        cdouble a0 = s.amps[i], a1 = s.amps[j];
        s.amps[i] = a * a0 + b * a1;
        s.amps[j] = c * a0 + d * a1;
    }
}

// register subindex of basis index i, targets ordered MSB first
std::size_t subindex(const QuantumState& s, std::size_t i, const std::vector<int>& targets) {
    std::size_t sub = 0;
    for (int q : targets) sub = (sub << 1) | (s.bit(i, q) ? 1u : 0u);
    return sub;
}

void apply_diagonal(QuantumState& s, const Gate& g) {
    const std::size_t cm = g.control >= 0 ? qubit_mask(s.n_qubits, g.control) : 0;
    const std::size_t dim = s.dim();
    std::vector<cdouble> ph(g.phases.size());
    for (std::size_t k = 0; k < ph.size(); ++k) ph[k] = std::polar(1.0, g.phases[k]);
    for (std::size_t i = 0; i < dim; ++i) {
        if (cm && !(i & cm)) continue;
        s.amps[i] *= ph[subindex(s, i, g.targets)];
    }
}

void apply_prepare(QuantumState& s, const Gate& g) {
    const std::size_t cm = g.control >= 0 ? qubit_mask(s.n_qubits, g.control) : 0;
    const std::size_t dim = s.dim();
    // the affected subspace must hold |0...0> on the register
    double residual = 0.0, anchor = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        if (cm && !(i & cm)) continue;
        double p = std::norm(s.amps[i]);
        if (subindex(s, i, g.targets) == 0) anchor += p;
        else residual += p;
    }
    if (residual > 1e-20 * std::max(anchor, 1.0))
        throw std::runtime_error("Prepare gate: register is not |0> on the controlled branch");

    // scatter each anchor amplitude over the register
    std::vector<std::size_t> bitmasks(g.targets.size());
    for (std::size_t t = 0; t < g.targets.size(); ++t)
        bitmasks[t] = qubit_mask(s.n_qubits, g.targets[t]);
    for (std::size_t i = 0; i < dim; ++i) {
        if (cm && !(i & cm)) continue;
        if (subindex(s, i, g.targets) != 0) continue;
        cdouble alpha = s.amps[i];
        if (alpha == cdouble{}) continue;
        for (std::size_t sub = 0; sub < g.prep.size(); ++sub) {
            std::size_t j = i;
            for (std::size_t t = 0; t < bitmasks.size(); ++t)
                if ((sub >> (bitmasks.size() - 1 - t)) & 1u) j |= bitmasks[t];
            s.amps[j] = alpha * g.prep[sub];
        }
    }
}

}  // namespace

void apply_gate(QuantumState& s, const Gate& g) {
    using K = Gate::Kind;
    auto check = [&](int q) {
        if (q < 0 || q >= s.n_qubits) throw std::out_of_range("apply_gate: qubit out of range");
    };
    const bool register_kind =
        g.kind == K::Diagonal || g.kind == K::Prepare || g.kind == K::HLayer;
    if (register_kind)
        for (int q : g.targets) check(q);
    else
        check(g.target);
    if (g.control >= 0) check(g.control);
    if (g.kind == K::CNOT || g.kind == K::CPhase)
        if (g.control < 0 || g.control == g.target)
            throw std::invalid_argument("apply_gate: two-qubit gate needs a distinct control");
    switch (g.kind) {
        case K::H:
            apply_single(s, g.target, g.control, kSqrt1_2, kSqrt1_2, kSqrt1_2, -kSqrt1_2);
            break;
        case K::X:
            apply_single(s, g.target, g.control, 0, 1, 1, 0);
            break;
        case K::Z:
            apply_single(s, g.target, g.control, 1, 0, 0, -1);
            break;
        case K::Rz: {
            cdouble e0 = std::polar(1.0, -g.angle / 2), e1 = std::polar(1.0, g.angle / 2);
            apply_single(s, g.target, g.control, e0, 0, 0, e1);
            break;
        }
        case K::Ry: {
            double c = std::cos(g.angle / 2), sn = std::sin(g.angle / 2);
            apply_single(s, g.target, g.control, c, -sn, sn, c);
            break;
        }
        case K::CNOT:
            apply_single(s, g.target, g.control, 0, 1, 1, 0);
            break;
        case K::CPhase:
            apply_single(s, g.target, g.control, 1, 0, 0, std::polar(1.0, g.angle));
            break;
        case K::Diagonal:
            apply_diagonal(s, g);
            break;
        case K::Prepare:
            apply_prepare(s, g);
            break;
        case K::HLayer:
            for (int q : g.targets)
                apply_single(s, q, g.control, kSqrt1_2, kSqrt1_2, kSqrt1_2, -kSqrt1_2);
            break;
    }
}

void apply_circuit(QuantumState& s, const Circuit& c) {
    if (c.n_qubits != s.n_qubits) throw std::invalid_argument("apply_circuit: qubit count mismatch");
    for (const Gate& g : c.gates) apply_gate(s, g);
}

QuantumState prepare_amplitudes(std::span<const cdouble> target) {
    if (target.empty()) throw std::invalid_argument("prepare_amplitudes: empty vector");
    int n = 0;
    while ((std::size_t{1} << n) < target.size()) ++n;
    if ((std::size_t{1} << n) != target.size())
        throw std::invalid_argument("prepare_amplitudes: length must be a power of two");
    double n2 = 0.0;
    for (const auto& a : target) n2 += std::norm(a);
    if (n2 == 0.0) throw std::invalid_argument("prepare_amplitudes: zero vector");
    QuantumState s;
    s.n_qubits = std::max(n, 1);
    s.amps.assign(std::size_t{1} << s.n_qubits, cdouble{});
    double inv = 1.0 / std::sqrt(n2);
    for (std::size_t i = 0; i < target.size(); ++i) s.amps[i] = target[i] * inv;
    return s;
}

QuantumState prepare_amplitudes(std::span<const double> target) {
    std::vector<cdouble> c(target.begin(), target.end());
    return prepare_amplitudes(std::span<const cdouble>(c));
}

double expectation_z(const QuantumState& s, int qubit) {
    if (qubit < 0 || qubit >= s.n_qubits) throw std::out_of_range("expectation_z: qubit out of range");
    const std::size_t m = qubit_mask(s.n_qubits, qubit);
    double z = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        double p = std::norm(s.amps[i]);
        z += (i & m) ? -p : p;
    }
    return z;
}

double expectation_z_sampled(const QuantumState& s, int qubit, long shots, std::mt19937_64& rng) {
    if (shots <= 0) throw std::invalid_argument("expectation_z_sampled: shots must be positive");
    const std::size_t m = qubit_mask(s.n_qubits, qubit);
    double p0 = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i)
        if (!(i & m)) p0 += std::norm(s.amps[i]);
    p0 = std::clamp(p0, 0.0, 1.0);
    std::binomial_distribution<long> dist(shots, p0);
    long zeros = dist(rng);
    return (2.0 * zeros - shots) / shots;
}

void dump_statevector_csv(const QuantumState& state, std::ostream& os) {
    os << "index,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < state.dim(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, state.amps[i].real(),
                      state.amps[i].imag());
        os << buf;
    }
}

cdouble inner_product(const QuantumState& a, const QuantumState& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("inner_product: size mismatch");
    cdouble s{};
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return s;
}

}  // namespace qreact
