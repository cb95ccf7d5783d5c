#include "qreact/moment_meas.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qreact {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Coeff kOverflowGuard = Coeff(1e4600L);

bool is_power_of_two(std::size_t x) { return x && (x & (x - 1)) == 0; }


// Gaussian elimination with partial pivoting in quad precision.
std::vector<Coeff> gauss_solve(std::vector<std::vector<Coeff>> G, std::vector<Coeff> r) {
    const int n = static_cast<int>(r.size());
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int i = c + 1; i < n; ++i)
            if (qabs(G[i][c]) > qabs(G[p][c])) p = i;
        if (qabs(G[p][c]) == 0)
            throw std::runtime_error("polynomial fit: rank-deficient normal equations");
        std::swap(G[c], G[p]);
        std::swap(r[c], r[p]);
        for (int i = c + 1; i < n; ++i) {
            Coeff w = G[i][c] / G[c][c];
            for (int k = c; k < n; ++k) G[i][k] -= w * G[c][k];
            r[i] -= w * r[c];
        }
    }
    std::vector<Coeff> x(n);
    for (int i = n - 1; i >= 0; --i) {
        Coeff s = r[i];
        for (int k = i + 1; k < n; ++k) s -= G[i][k] * x[k];
        x[i] = s / G[i][i];
    }
    return x;
}

}  // namespace

PhaseProfile phase_profile(std::span<const double> q_values, std::string label) {
    PhaseProfile p;
    p.statistic_label = std::move(label);
    p.theta.reserve(q_values.size());
    for (double q : q_values) {
        double excess = std::fabs(q) - 1.0;
        if (excess > 1e-12)
            throw std::domain_error("phase_profile: statistic exceeds [-1,1]; state not normalized");
        p.max_clip = std::max(p.max_clip, std::max(excess, 0.0));
        p.theta.push_back(std::acos(std::clamp(q, -1.0, 1.0)));
    }
    return p;
}

double ZStringPolynomial::evaluate(std::uint32_t basis_index) const {
    Coeff s = 0;
    for (const auto& [mask, c] : terms)
        s += (std::popcount(mask & basis_index) & 1) ? -c : c;
    return to_double(s);
}

Coeff ZStringPolynomial::coefficient(std::uint32_t mask) const {
    auto it = terms.find(mask);
    return it == terms.end() ? Coeff(0) : it->second;
}

std::uint32_t ZStringPolynomial::mask_of_qubits(int n, std::span<const int> one_indexed_qubits) {
    std::uint32_t mask = 0;
    for (int j : one_indexed_qubits) {
        if (j < 1 || j > n) throw std::out_of_range("mask_of_qubits: qubit label out of range");
        mask |= std::uint32_t{1} << (n - j);  // label 1 = most significant
    }
    return mask;
}

ZStringPolynomial pauli_decompose_D(int n) {
    if (n < 1 || n > 12) throw std::out_of_range("pauli_decompose_D: n must be in [1,12]");
    ZStringPolynomial p;
    p.n_qubits = n;
    p.terms[0] = (Coeff(1) * ((std::uint32_t{1} << n) - 1)) / 2;
    for (int b = 0; b < n; ++b)
        p.terms[std::uint32_t{1} << b] = -Coeff(std::uint32_t{1} << b) / 2;
    return p;
}

ZStringPolynomial zstring_multiply(const ZStringPolynomial& a, const ZStringPolynomial& b) {
    if (a.n_qubits != b.n_qubits)
        throw std::invalid_argument("zstring_multiply: qubit count mismatch");
    ZStringPolynomial r;
    r.n_qubits = a.n_qubits;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            Coeff v = r.terms[ma ^ mb] += ca * cb;  // Z^2 = I on shared support
            if (qabs(v) > kOverflowGuard)
                throw std::overflow_error("zstring_multiply: coefficient overflow");
        }
    std::erase_if(r.terms, [](const auto& kv) { return kv.second == Coeff(0); });
    return r;
}

ZStringPolynomial zstring_power(const ZStringPolynomial& base, int k) {
    if (k < 0) throw std::invalid_argument("zstring_power: negative exponent");
    ZStringPolynomial r;
    r.n_qubits = base.n_qubits;
    r.terms[0] = 1;
    for (int i = 0; i < k; ++i) r = zstring_multiply(r, base);
    return r;
}

std::vector<Coeff> exact_alpha(const PhaseProfile& profile) {
    const std::size_t N = profile.theta.size();
    if (!is_power_of_two(N) || N > 32)
        throw std::invalid_argument("exact_alpha: profile length must be 2^n with n <= 5");

    // Newton divided differences on integer nodes 0..N-1
    std::vector<Coeff> dd(profile.theta.begin(), profile.theta.end());
    for (std::size_t lvl = 1; lvl < N; ++lvl)
        for (std::size_t i = N - 1; i >= lvl; --i)
            dd[i] = (dd[i] - dd[i - 1]) / Coeff(lvl);

    // expand to monomials: p(x) = dd_0 + (x-0)(dd_1 + (x-1)(...))
    std::vector<Coeff> c{dd[N - 1]};
    for (int k = static_cast<int>(N) - 2; k >= 0; --k) {
        std::vector<Coeff> nc(c.size() + 1, Coeff(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            nc[i + 1] += c[i];
            nc[i] -= c[i] * Coeff(k);
        }
        nc[0] += dd[k];
        c = std::move(nc);
    }

    double max_resid = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        Coeff s = 0;
        for (std::size_t k = c.size(); k-- > 0;) s = s * Coeff(j) + c[k];
        max_resid = std::max(max_resid, std::fabs(to_double(s - Coeff(profile.theta[j]))));
    }
    if (max_resid > 1e-8)
        throw std::runtime_error("exact_alpha: interpolation residual exceeds 1e-8 (conditioning)");
    return c;
}

std::vector<Coeff> fit_beta(const PhaseProfile& profile, int m, bool fit_domain_phi) {
    const std::size_t N = profile.theta.size();
    if (N == 0) throw std::invalid_argument("fit_beta: empty profile");
    if (m < 0 || m > static_cast<int>(N) - 1)
        throw std::invalid_argument("fit_beta: order must satisfy 0 <= m <= N-1");

    // abscissae: index j, or phi_j = (j+1/2)/N; both affine in j
    auto x_of = [&](std::size_t j) -> Coeff {
        return fit_domain_phi ? (Coeff(j) + Coeff(1) / 2) / Coeff(N) : Coeff(j);
    };
    const Coeff x0 = x_of(0), x1 = x_of(N - 1);
    const Coeff span = (N > 1) ? x1 - x0 : Coeff(1);

    // Chebyshev design matrix on s = 2(x - x0)/span - 1
    std::vector<std::vector<Coeff>> T(m + 1, std::vector<Coeff>(N));
    for (std::size_t j = 0; j < N; ++j) {
        Coeff s = (N > 1) ? 2 * (x_of(j) - x0) / span - 1 : Coeff(0);
        T[0][j] = 1;
        if (m >= 1) T[1][j] = s;
        for (int k = 2; k <= m; ++k) T[k][j] = 2 * s * T[k - 1][j] - T[k - 2][j];
    }
    std::vector<std::vector<Coeff>> G(m + 1, std::vector<Coeff>(m + 1, Coeff(0)));
    std::vector<Coeff> r(m + 1, Coeff(0));
    for (int a = 0; a <= m; ++a) {
        for (int b = a; b <= m; ++b) {
            Coeff s = 0;
            for (std::size_t j = 0; j < N; ++j) s += T[a][j] * T[b][j];
            G[a][b] = G[b][a] = s;
        }
        Coeff s = 0;
        for (std::size_t j = 0; j < N; ++j) s += T[a][j] * Coeff(profile.theta[j]);
        r[a] = s;
    }
    std::vector<Coeff> cheb = gauss_solve(std::move(G), std::move(r));

    // Chebyshev -> monomial in s
    std::vector<std::vector<Coeff>> tpoly(m + 1);
    tpoly[0] = {1};
    if (m >= 1) tpoly[1] = {0, 1};
    for (int k = 2; k <= m; ++k) {
        tpoly[k].assign(k + 1, Coeff(0));
        for (std::size_t i = 0; i < tpoly[k - 1].size(); ++i) tpoly[k][i + 1] += 2 * tpoly[k - 1][i];
        for (std::size_t i = 0; i < tpoly[k - 2].size(); ++i) tpoly[k][i] -= tpoly[k - 2][i];
    }
    std::vector<Coeff> mono_s(m + 1, Coeff(0));
    for (int k = 0; k <= m; ++k)
        for (std::size_t i = 0; i < tpoly[k].size(); ++i) mono_s[i] += cheb[k] * tpoly[k][i];

    // substitute s = A j + B (s is affine in the index on a uniform grid)
    Coeff A, B;
    if (N > 1) {
        A = 2 * (x_of(1) - x_of(0)) / span;
        B = 2 * (x_of(0) - x0) / span - 1;
    } else {
        A = 0;
        B = 0;
    }
    std::vector<Coeff> beta{mono_s[m]};
    for (int k = m - 1; k >= 0; --k) {
        std::vector<Coeff> nb(beta.size() + 1, Coeff(0));
        for (std::size_t i = 0; i < beta.size(); ++i) {
            nb[i + 1] += beta[i] * A;
            nb[i] += beta[i] * B;
        }
        nb[0] += mono_s[k];
        beta = std::move(nb);
    }
    return beta;
}

double poly_eval(std::span<const Coeff> coeffs, double x) {
    Coeff s = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) s = s * Coeff(x) + coeffs[k];
    return to_double(s);
}

namespace {

// Shared circuit builder: one CNOT ladder + Rz(-2c) per Z-string; the
// identity term becomes the recorded global phase.
void build_zstring_circuit(DiagonalPhaseProgram& prog,
                           const std::map<std::uint32_t, Coeff>& terms) {
    const int n = prog.n_qubits;
    Circuit circ(n);
    for (const auto& [mask, coeff] : terms) {
        double c = to_double(coeff);
        if (mask == 0) {
            prog.global_phase += c;
            continue;
        }
        if (c == 0.0) continue;
        std::vector<int> qubits;
        for (int b = 0; b < n; ++b)
            if (mask & (std::uint32_t{1} << b)) qubits.push_back(n - 1 - b);
        std::sort(qubits.begin(), qubits.end());  // ladder ends on the highest index
        for (std::size_t i = 0; i + 1 < qubits.size(); ++i)
            circ.add(Gate::cnot(qubits[i], qubits[i + 1]));
        circ.add(Gate::rz(qubits.back(), -2.0 * c));
        for (std::size_t i = qubits.size() - 1; i-- > 0;)
            circ.add(Gate::cnot(qubits[i], qubits[i + 1]));
    }
    prog.cnot_count = circ.tally.count("CNOT") ? circ.tally["CNOT"] : 0;
    prog.rz_count = circ.tally.count("Rz") ? circ.tally["Rz"] : 0;
    prog.compiled = std::move(circ);
}

void verify_compiled_diagonal(const DiagonalPhaseProgram& prog) {
    const int n = prog.n_qubits;
    if (n > 5 || !prog.compiled) return;
    QuantumState st = new_state(n);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    apply_gate(st, Gate::h_layer(all));
    apply_circuit(st, *prog.compiled);
    const double root = std::sqrt(static_cast<double>(st.dim()));
    for (std::size_t j = 0; j < st.dim(); ++j) {
        cdouble got = st.amps[j] * root * std::polar(1.0, prog.global_phase);
        cdouble want = std::polar(1.0, prog.diagonal_phases[j]);
        if (std::abs(got - want) > 1e-8)
            throw std::runtime_error("compiled diagonal verification failed");
    }
}

}  // namespace

DiagonalPhaseProgram compile_phase_unitary(std::span<const Coeff> coeffs, PhaseMode which, int n) {
    if (n < 1 || n > 10)
        throw std::out_of_range("compile_phase_unitary: n must be in [1,10]");
    if (coeffs.empty()) throw std::invalid_argument("compile_phase_unitary: empty coefficients");

    DiagonalPhaseProgram prog;
    prog.mode = which;
    prog.order = which == PhaseMode::approx ? static_cast<int>(coeffs.size()) - 1 : -1;
    prog.n_qubits = n;
    prog.coeffs.assign(coeffs.begin(), coeffs.end());

    const std::size_t dim = std::size_t{1} << n;
    prog.diagonal_phases.resize(dim);
    for (std::size_t j = 0; j < dim; ++j)
        prog.diagonal_phases[j] = poly_eval(coeffs, static_cast<double>(j));

    ZStringPolynomial D = pauli_decompose_D(n);
    ZStringPolynomial Dk;
    Dk.n_qubits = n;
    Dk.terms[0] = 1;
    std::map<std::uint32_t, Coeff> total;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (k > 0) Dk = zstring_multiply(Dk, D);
        if (coeffs[k] == Coeff(0)) continue;
        for (const auto& [mask, c] : Dk.terms) total[mask] += coeffs[k] * c;
    }
    build_zstring_circuit(prog, total);
    verify_compiled_diagonal(prog);
    return prog;
}

DiagonalPhaseProgram compile_diagonal(std::span<const double> theta, int n) {
    if (n < 1 || n > 10) throw std::out_of_range("compile_diagonal: n must be in [1,10]");
    const std::size_t dim = std::size_t{1} << n;
    if (theta.size() != dim) throw std::invalid_argument("compile_diagonal: wrong profile length");

    // Walsh-Hadamard transform gives the Z-string coefficients directly
    std::vector<Coeff> w(theta.begin(), theta.end());
    for (std::size_t len = 1; len < dim; len <<= 1)
        for (std::size_t i = 0; i < dim; i += 2 * len)
            for (std::size_t j = i; j < i + len; ++j) {
                Coeff a = w[j], b = w[j + len];
                w[j] = (a + b) / 2;
                w[j + len] = (a - b) / 2;
            }

    DiagonalPhaseProgram prog;
    prog.mode = PhaseMode::exact;
    prog.n_qubits = n;
    prog.diagonal_phases.assign(theta.begin(), theta.end());
    std::map<std::uint32_t, Coeff> total;
    for (std::size_t mask = 0; mask < dim; ++mask)
        if (w[mask] != Coeff(0)) total[static_cast<std::uint32_t>(mask)] = w[mask];
    build_zstring_circuit(prog, total);
    verify_compiled_diagonal(prog);
    return prog;
}

DiagonalPhaseProgram exact_program(const PhaseProfile& profile, int n) {
    const std::size_t dim = std::size_t{1} << n;
    if (profile.theta.size() != dim)
        throw std::invalid_argument("exact_program: profile length mismatch");
    DiagonalPhaseProgram prog;
    if (n <= 5) {
        prog = compile_phase_unitary(exact_alpha(profile), PhaseMode::exact, n);
    } else if (n <= 10) {
        prog = compile_diagonal(profile.theta, n);
    } else {
        prog.n_qubits = n;
        prog.mode = PhaseMode::exact;
    }
    // the program acts with the exact phases; the compiled circuit agrees
    // with them to the verified 1e-8
    prog.diagonal_phases = profile.theta;
    return prog;
}

DiagonalPhaseProgram approx_program(const PhaseProfile& profile, int m, int n) {
    const std::size_t dim = std::size_t{1} << n;
    if (profile.theta.size() != dim)
        throw std::invalid_argument("approx_program: profile length mismatch");
    std::vector<Coeff> beta = fit_beta(profile, m);
    if (n <= 10) return compile_phase_unitary(beta, PhaseMode::approx, n);
    DiagonalPhaseProgram prog;
    prog.mode = PhaseMode::approx;
    prog.order = m;
    prog.n_qubits = n;
    prog.coeffs = std::move(beta);
    prog.diagonal_phases.resize(dim);
    for (std::size_t j = 0; j < dim; ++j)
        prog.diagonal_phases[j] = poly_eval(prog.coeffs, static_cast<double>(j));
    return prog;
}

Circuit build_measurement_circuit(std::span<const cdouble> psi, const DiagonalPhaseProgram& program,
                                  int n) {
    if (psi.size() != (std::size_t{1} << n))
        throw std::invalid_argument("build_measurement_circuit: state size mismatch");
    if (program.diagonal_phases.size() != psi.size())
        throw std::invalid_argument("build_measurement_circuit: program size mismatch");
    std::vector<int> reg(n);
    std::iota(reg.begin(), reg.end(), 1);  // ancilla is qubit 0

    Circuit c(n + 1);
    c.add(Gate::h(0));
    c.add(Gate::prepare(reg, std::vector<cdouble>(psi.begin(), psi.end()), 0));
    c.add(Gate::x(0));
    c.add(Gate::h_layer(reg, 0));
    c.add(Gate::diagonal(reg, program.diagonal_phases, 0));
    c.add(Gate::h(0));
    return c;
}

double estimate_statistic(const QuantumState& psi, const CompositionGrid& grid,
                          const std::function<double(double)>& q, int block_index,
                          const MeasureOptions& opts) {
    const std::size_t dim = psi.dim();
    const int bs = grid.n_cells;
    std::size_t offset;
    if (block_index < 0) {
        if (dim != static_cast<std::size_t>(bs))
            throw std::invalid_argument("estimate_statistic: whole-state mode needs dim == n_cells");
        offset = 0;
    } else {
        offset = static_cast<std::size_t>(block_index) * bs;
        if (offset + bs > dim) throw std::out_of_range("estimate_statistic: block index out of range");
    }
    if (opts.mode == PhaseMode::approx && opts.order < 0)
        throw std::invalid_argument("estimate_statistic: approx mode needs an order");
    if (opts.shots > 0 && opts.rng == nullptr)
        throw std::invalid_argument("estimate_statistic: sampled mode needs an rng");

    // the circuit extracts Re<q~|psi>: rotate the global phase away so a
    // PDF-encoding state presents real amplitudes
    QuantumState work = psi;
    cdouble mass{};
    for (const auto& a : work.amps) mass += a;
    if (std::abs(mass) < 1e-14) {
        std::size_t imax = 0;
        for (std::size_t i = 1; i < dim; ++i)
            if (std::norm(work.amps[i]) > std::norm(work.amps[imax])) imax = i;
        mass = work.amps[imax];
    }
    cdouble rot = std::polar(1.0, -std::arg(mass));
    for (auto& a : work.amps) a *= rot;

    // local statistic values over the block
    std::vector<double> q_local(bs), one_local(bs, 1.0);
    for (int j = 0; j < bs; ++j) q_local[j] = q(grid.centers[j]);

    auto block_phases = [&](std::span<const double> local_q) {
        PhaseProfile local = phase_profile(local_q, "block");
        std::vector<double> phases(dim, kPi / 2);  // arccos(0) off the block
        if (opts.mode == PhaseMode::exact) {
            for (int j = 0; j < bs; ++j) phases[offset + j] = local.theta[j];
        } else {
            std::vector<Coeff> beta = fit_beta(local, opts.order, opts.fit_domain_phi);
            for (int j = 0; j < bs; ++j)
                phases[offset + j] = poly_eval(beta, static_cast<double>(j));
        }
        return phases;
    };

    const int n = psi.n_qubits;
    auto run = [&](std::vector<double> phases) {
        DiagonalPhaseProgram prog;
        prog.mode = opts.mode;
        prog.order = opts.order;
        prog.n_qubits = n;
        prog.diagonal_phases = std::move(phases);
        Circuit circ = build_measurement_circuit(work.amps, prog, n);
        QuantumState st = new_state(n + 1);
        apply_circuit(st, circ);
        return opts.shots > 0 ? expectation_z_sampled(st, 0, opts.shots, *opts.rng)
                              : expectation_z(st, 0);
    };

    double numerator = run(block_phases(q_local));
    double denominator = run(block_phases(one_local));
    if (std::fabs(denominator) < 1e-10)
        throw std::runtime_error("estimate_statistic: block mass below measurable threshold");
    return numerator / denominator;
}

namespace {

unsigned long long binomial(int k, int j) {
    unsigned long long r = 1;
    for (int i = 1; i <= j; ++i) r = r * (k - j + i) / i;
    return r;
}

}  // namespace

long long gate_count_term(int k) {
    if (k < 1 || k > 57) throw std::out_of_range("gate_count_term: k must be in [1,57]");
    unsigned long long s = 0;
    for (int j = 1; j <= k; ++j) s += binomial(k, j) * (2ull * j + 1);
    return static_cast<long long>(s);
}

long long gate_count_exact(int n) {
    if (n < 1 || n > 52) throw std::out_of_range("gate_count_exact: n must be in [1,52]");
    long long pot = 1ll << (n - 1);
    return pot * (1ll * n * n + 2ll * n + 2) - (n + 1);
}

long long gate_count_approx(int n, int m) {
    if (n < 1) throw std::out_of_range("gate_count_approx: n must be positive");
    if (m < 0 || m > 57) throw std::out_of_range("gate_count_approx: m must be in [0,57]");
    unsigned long long s = 0;
    for (int k = 1; k <= m; ++k) {
        int top = std::min(k, n);
        for (int j = 1; j <= top; ++j) s += binomial(k, j) * (2ull * j + 1);
    }
    return static_cast<long long>(s);
}

}  // namespace qreact
