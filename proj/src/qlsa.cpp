#include "qreact/qlsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qreact {

namespace {

constexpr double kPi = 3.14159265358979323846;

using CMat = std::vector<cdouble>;  // dense complex, row-major

// W = V diag(e^{i lam t}) V^T for a real symmetric eigensystem
CMat evolution_operator(const SymEig& eig, double t) {
    const int d = static_cast<int>(eig.values.size());
    std::vector<cdouble> ph(d);
    for (int k = 0; k < d; ++k) ph[k] = std::polar(1.0, eig.values[k] * t);
    CMat W(static_cast<size_t>(d) * d, cdouble{});
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            cdouble vik = eig.vectors(i, k) * ph[k];
            if (vik == cdouble{}) continue;
            for (int j = 0; j < d; ++j) W[static_cast<size_t>(i) * d + j] += vik * eig.vectors(j, k);
        }
    return W;
}

// Apply a dense operator to the top (most significant) register of
// `width` qubits, optionally controlled on `control_mask` being set.
void apply_on_system(std::vector<cdouble>& amps, int low_bits, const CMat& W, int d,
                     std::size_t control_mask) {
    const std::size_t low_dim = std::size_t{1} << low_bits;
    std::vector<cdouble> tmp(d), out(d);
    for (std::size_t rest = 0; rest < low_dim; ++rest) {
        if (control_mask && !(rest & control_mask)) continue;
        for (int i = 0; i < d; ++i) tmp[i] = amps[(static_cast<std::size_t>(i) << low_bits) | rest];
        for (int i = 0; i < d; ++i) {
            cdouble s{};
            const cdouble* row = &W[static_cast<size_t>(i) * d];
            for (int j = 0; j < d; ++j) s += row[j] * tmp[j];
            out[i] = s;
        }
        for (int i = 0; i < d; ++i) amps[(static_cast<std::size_t>(i) << low_bits) | rest] = out[i];
    }
}

}  // namespace

void HhlConfig::validate() const {
    if (clock_qubits < 2) throw std::invalid_argument("HhlConfig: clock_qubits must be >= 2");
}

std::pair<DenseMatrix, std::vector<double>> hermitian_dilation(const DenseMatrix& A,
                                                               std::span<const double> b) {
    if (A.rows != A.cols) throw std::invalid_argument("hermitian_dilation: matrix not square");
    if (static_cast<int>(b.size()) != A.rows)
        throw std::invalid_argument("hermitian_dilation: rhs size mismatch");
    const int m = A.rows;
    DenseMatrix H(2 * m, 2 * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            H(i, m + j) = A(i, j);
            H(m + i, j) = A(j, i);
        }
    std::vector<double> bp(2 * m, 0.0);
    std::copy(b.begin(), b.end(), bp.begin());
    return {std::move(H), std::move(bp)};
}

HhlResult hhl_solve(const SparseMatrix& A, std::span<const double> b, const HhlConfig& cfg,
                    std::span<const double> reference_x) {
    cfg.validate();
    const int m = A.rows();
    if (A.cols() != m) throw std::invalid_argument("hhl_solve: matrix not square");
    if (static_cast<int>(b.size()) != m) throw std::invalid_argument("hhl_solve: rhs size mismatch");
    if (m & (m - 1)) throw std::invalid_argument("hhl_solve: dimension must be a power of two");

    const int d = 2 * m;  // dilated dimension
    int n_sys = 1;
    while ((1 << n_sys) < d) ++n_sys;
    const int clock = cfg.clock_qubits;
    const int n_total = n_sys + clock + 1;
    if (n_total > 22) throw std::invalid_argument("hhl_solve: qubit budget exceeded (22)");

    auto [H, bp] = hermitian_dilation(A.to_dense(), b);
    SymEig eig = sym_eig(std::move(H));

    double sigma_max = 0.0, sigma_min = std::numeric_limits<double>::infinity();
    for (double lam : eig.values) {
        sigma_max = std::max(sigma_max, std::fabs(lam));
        sigma_min = std::min(sigma_min, std::fabs(lam));
    }
    if (!(sigma_min > 0.0)) throw std::runtime_error("hhl_solve: singular system");

    // two's-complement clock window is (-1/2, 1/2) in phase units; keep the
    // symmetric +-sigma_max spectrum inside 3/4 of it
    const double t0 = cfg.t0 > 0.0 ? cfg.t0 : 0.75 * kPi / sigma_max;
    const double c = cfg.c > 0.0 ? cfg.c : 0.9 * sigma_min;
    if (!(c > 0.0)) throw std::invalid_argument("hhl_solve: inversion constant must be positive");

    const int low_bits = clock + 1;  // clock + ancilla sit below the system register
    const std::size_t dim = std::size_t{1} << n_total;
    const std::size_t T = std::size_t{1} << clock;

    std::vector<cdouble> amps(dim, cdouble{});
    double bnorm = 0.0;
    for (double v : bp) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0) throw std::invalid_argument("hhl_solve: zero rhs");
    for (int i = 0; i < d; ++i)
        amps[static_cast<std::size_t>(i) << low_bits] = bp[i] / bnorm;

    // clock bit k (MSB first) has weight 2^{clock-1-k}; its mask within the
    // low_bits index includes the trailing ancilla bit
    auto clock_mask = [&](int k) { return std::size_t{1} << (clock - k); };

    // QPE: Hadamards, controlled U^{2^{clock-1-k}}, inverse QFT
    {
        for (int k = 0; k < clock; ++k) {
            const std::size_t mask = clock_mask(k);
            const double r = 1.0 / std::sqrt(2.0);
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & mask) continue;
                cdouble a0 = amps[i], a1 = amps[i | mask];
                amps[i] = r * (a0 + a1);
                amps[i | mask] = r * (a0 - a1);
            }
        }
    }
    for (int k = 0; k < clock; ++k) {
        CMat W = evolution_operator(eig, t0 * static_cast<double>(std::size_t{1} << (clock - 1 - k)));
        apply_on_system(amps, low_bits, W, d, clock_mask(k));
    }
    // inverse QFT on the clock register (dense over the clock field)
    auto fourier = [&](double sign) {
        std::vector<cdouble> F(T * T);
        const double invr = 1.0 / std::sqrt(static_cast<double>(T));
        for (std::size_t a = 0; a < T; ++a)
            for (std::size_t b2 = 0; b2 < T; ++b2)
                F[a * T + b2] = std::polar(invr, sign * 2.0 * kPi * static_cast<double>(a * b2) /
                                                     static_cast<double>(T));
        std::vector<cdouble> tmp(T);
        for (std::size_t hi = 0; hi < (dim >> low_bits); ++hi)
            for (std::size_t anc = 0; anc < 2; ++anc) {
                const std::size_t base = (hi << low_bits) | anc;
                for (std::size_t t = 0; t < T; ++t) tmp[t] = amps[base | (t << 1)];
                for (std::size_t a = 0; a < T; ++a) {
                    cdouble s{};
                    for (std::size_t b2 = 0; b2 < T; ++b2) s += F[a * T + b2] * tmp[b2];
                    amps[base | (a << 1)] = s;
                }
            }
    };
    fourier(-1.0);

    // eigenvalue-inversion rotation conditioned on the clock value
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & 1) continue;  // visit ancilla-0 members of each pair once
        const std::size_t ell = (i >> 1) & (T - 1);
        if (ell == 0) continue;
        const double signed_ell =
            ell >= T / 2 ? static_cast<double>(ell) - static_cast<double>(T) : static_cast<double>(ell);
        const double lambda_hat = signed_ell * 2.0 * kPi / (static_cast<double>(T) * t0);
        const double ratio = std::clamp(c / lambda_hat, -1.0, 1.0);
        const double half = std::asin(ratio);
        const double cs = std::cos(half), sn = std::sin(half);
        cdouble a0 = amps[i], a1 = amps[i | 1];
        amps[i] = cs * a0 - sn * a1;
        amps[i | 1] = sn * a0 + cs * a1;
    }

    // uncompute the phase estimation
    fourier(+1.0);
    for (int k = clock - 1; k >= 0; --k) {
        CMat W = evolution_operator(eig, -t0 * static_cast<double>(std::size_t{1} << (clock - 1 - k)));
        apply_on_system(amps, low_bits, W, d, clock_mask(k));
    }
    for (int k = 0; k < clock; ++k) {
        const std::size_t mask = clock_mask(k);
        const double r = 1.0 / std::sqrt(2.0);
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & mask) continue;
            cdouble a0 = amps[i], a1 = amps[i | mask];
            amps[i] = r * (a0 + a1);
            amps[i | mask] = r * (a0 - a1);
        }
    }

    // post-select the rotation ancilla
    double prob = 0.0;
    for (std::size_t i = 1; i < dim; i += 2) prob += std::norm(amps[i]);
    if (prob < 1e-8)
        throw std::runtime_error("hhl_solve: post-selection probability below 1e-8");

    // reduced density matrix of the system register on the success branch
    const std::size_t n_low = std::size_t{1} << low_bits;
    CMat rho(static_cast<size_t>(d) * d, cdouble{});
    for (std::size_t rest = 1; rest < n_low; rest += 2) {
        for (int i = 0; i < d; ++i) {
            cdouble ai = amps[(static_cast<std::size_t>(i) << low_bits) | rest];
            if (ai == cdouble{}) continue;
            for (int j = 0; j < d; ++j)
                rho[static_cast<size_t>(i) * d + j] +=
                    ai * std::conj(amps[(static_cast<std::size_t>(j) << low_bits) | rest]);
        }
    }
    for (auto& v : rho) v /= prob;

    // dominant eigenvector by power iteration (rho is near rank one)
    std::vector<cdouble> v(d);
    int imax = 0;
    for (int i = 1; i < d; ++i)
        if (rho[static_cast<size_t>(i) * d + i].real() > rho[static_cast<size_t>(imax) * d + imax].real())
            imax = i;
    for (int i = 0; i < d; ++i) v[i] = rho[static_cast<size_t>(i) * d + imax];
    for (int it = 0; it < 200; ++it) {
        std::vector<cdouble> w(d, cdouble{});
        for (int i = 0; i < d; ++i) {
            cdouble s{};
            for (int j = 0; j < d; ++j) s += rho[static_cast<size_t>(i) * d + j] * v[j];
            w[i] = s;
        }
        double nrm = 0.0;
        for (const auto& x : w) nrm += std::norm(x);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) break;
        for (auto& x : w) x /= nrm;
        double delta = 0.0;
        for (int i = 0; i < d; ++i) delta = std::max(delta, std::abs(w[i] - v[i]));
        v = std::move(w);
        if (it > 2 && delta < 1e-14) break;
    }
    // rotate the global phase so the dominant-mass direction is real positive
    cdouble heavy{};
    for (const auto& x : v) heavy += x * std::norm(x);
    if (std::abs(heavy) > 1e-14) {
        cdouble rot = std::polar(1.0, -std::arg(heavy));
        for (auto& x : v) x *= rot;
    }

    HhlResult res;
    res.solution_state.n_qubits = n_sys;
    res.solution_state.amps = std::move(v);
    res.success_probability = prob;
    res.t0_used = t0;
    res.c_used = c;
    res.total_qubits = n_total;

    std::vector<double> dilated_ref(d, 0.0);
    std::copy(reference_x.begin(), reference_x.end(), dilated_ref.begin() + m);
    res.fidelity_vs_reference = fidelity(res.solution_state, dilated_ref);
    return res;
}

HhlResult hhl_solve(const HistoryLinearSystem& sys, const HhlConfig& cfg) {
    HistoryVector ref = solve_ideal(sys);
    return hhl_solve(sys.A, sys.b, cfg, ref.data);
}

double fidelity(const QuantumState& state, std::span<const double> reference) {
    std::vector<cdouble> ref(reference.begin(), reference.end());
    return fidelity(state, std::span<const cdouble>(ref));
}

double fidelity(const QuantumState& state, std::span<const cdouble> reference) {
    if (state.dim() != reference.size()) throw std::invalid_argument("fidelity: size mismatch");
    double n2 = 0.0;
    cdouble ip{};
    for (std::size_t i = 0; i < reference.size(); ++i) {
        n2 += std::norm(reference[i]);
        ip += std::conj(state.amps[i]) * reference[i];
    }
    if (n2 == 0.0) throw std::invalid_argument("fidelity: zero reference");
    return std::norm(ip) / n2;
}

}  // namespace qreact
