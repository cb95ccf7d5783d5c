#include "qreact/history_state.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace qreact {

std::span<const double> HistoryVector::block(int k) const {
    if (k < 0 || k >= n_blocks) throw std::out_of_range("HistoryVector: block index out of range");
    return {data.data() + static_cast<size_t>(k) * block_size, static_cast<size_t>(block_size)};
}

HistoryLinearSystem assemble_history_system(const TransportOperator& op, const DiscretePdf& f0,
                                            double dt, int n_t_qubits) {
    const int m = op.matrix.rows();
    if (static_cast<int>(f0.values.size()) != m)
        throw std::invalid_argument("assemble_history_system: f0 size does not match operator");
    if (n_t_qubits < 0) throw std::invalid_argument("assemble_history_system: negative n_t_qubits");
    int n_phi_qubits = 0;
    while ((1 << n_phi_qubits) < m) ++n_phi_qubits;
    if ((1 << n_phi_qubits) != m)
        throw std::invalid_argument("assemble_history_system: block size must be a power of two");
    if (n_t_qubits + n_phi_qubits > 14)
        throw std::invalid_argument("assemble_history_system: total qubits exceed 14");

    const int blocks = 1 << n_t_qubits;
    std::vector<std::tuple<int, int, double>> t;
    for (int i = 0; i < m; ++i) t.emplace_back(i, i, 1.0);  // block 0: psi_0 = f0
    for (int k = 1; k < blocks; ++k) {
        int r0 = k * m;
        for (int i = 0; i < m; ++i) {
            t.emplace_back(r0 + i, r0 + i, 1.0);
            t.emplace_back(r0 + i, r0 - m + i, -1.0);
        }
        op.matrix.for_each([&](int i, int j, double v) {
            t.emplace_back(r0 + i, r0 + j, -dt * v);
        });
    }

    HistoryLinearSystem sys;
    sys.A = SparseMatrix::from_triplets(blocks * m, blocks * m, std::move(t));
    sys.b.assign(static_cast<size_t>(blocks) * m, 0.0);
    for (int i = 0; i < m; ++i) sys.b[i] = f0.values[i];
    sys.L = op.matrix;
    sys.n_t_qubits = n_t_qubits;
    sys.n_phi_qubits = n_phi_qubits;
    sys.dt = dt;
    return sys;
}

std::vector<double> history_solve(const HistoryLinearSystem& sys, std::vector<double> rhs) {
    const int m = sys.block_size();
    if (static_cast<int>(rhs.size()) != sys.total_dim())
        throw std::invalid_argument("history_solve: size mismatch");
    TriDiagLu lu = backward_euler_factor(sys.L, sys.dt);
    // x_0 = b_0 ; (I - dt L) x_k = b_k + x_{k-1}
    std::vector<double> blockv(rhs.begin(), rhs.begin() + m);
    std::copy(blockv.begin(), blockv.end(), rhs.begin());
    for (int k = 1; k < sys.n_blocks(); ++k) {
        for (int i = 0; i < m; ++i) blockv[i] += rhs[static_cast<size_t>(k) * m + i];
        blockv = lu.solve(std::move(blockv));
        std::copy(blockv.begin(), blockv.end(), rhs.begin() + static_cast<size_t>(k) * m);
    }
    return rhs;
}

std::vector<double> history_solve_transpose(const HistoryLinearSystem& sys, std::vector<double> rhs) {
    const int m = sys.block_size();
    if (static_cast<int>(rhs.size()) != sys.total_dim())
        throw std::invalid_argument("history_solve_transpose: size mismatch");
    TriDiagLu lut = backward_euler_factor(sys.L, sys.dt, /*transpose=*/true);
    // A^T is upper block bidiagonal: D_k^T x_k - x_{k+1} = b_k (D_0 = I)
    const int last = sys.n_blocks() - 1;
    std::vector<double> blockv(rhs.begin() + static_cast<size_t>(last) * m, rhs.end());
    if (last > 0) blockv = lut.solve(std::move(blockv));
    std::copy(blockv.begin(), blockv.end(), rhs.begin() + static_cast<size_t>(last) * m);
    for (int k = last - 1; k >= 0; --k) {
        for (int i = 0; i < m; ++i) blockv[i] = rhs[static_cast<size_t>(k) * m + i] + blockv[i];
        if (k > 0) blockv = lut.solve(std::move(blockv));
        std::copy(blockv.begin(), blockv.end(), rhs.begin() + static_cast<size_t>(k) * m);
    }
    return rhs;
}

HistoryVector solve_ideal(const HistoryLinearSystem& sys) {
    HistoryVector v;
    v.data = history_solve(sys, sys.b);
    v.n_blocks = sys.n_blocks();
    v.block_size = sys.block_size();
    v.dt = sys.dt;
    return v;
}

DiscretePdf extract_time_block(const HistoryVector& v, int k) {
    auto blk = v.block(k);
    DiscretePdf f{std::vector<double>(blk.begin(), blk.end())};
    double mass = 0.0;
    for (double x : f.values) mass += x;
    mass /= v.block_size;  // unit spacing on [0,1]
    if (mass == 0.0) throw std::runtime_error("extract_time_block: zero-mass block");
    for (double& x : f.values) x /= mass;
    return f;
}

double condition_estimate(const HistoryLinearSystem& sys) {
    const int n = sys.total_dim();
    auto normalize = [](std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        s = std::sqrt(s);
        for (double& v : x) v /= s;
        return s;
    };

    // deterministic start with energy in every direction
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = 1.0 + 0.37 * std::sin(0.7 * i + 0.3);
    normalize(x);

    double sigma_max2 = 0.0;
    double resid = 1.0;
    for (int it = 0; it < 1000; ++it) {
        x = sys.A.apply_transpose(sys.A.apply(x));
        double s = normalize(x);
        resid = std::fabs(s - sigma_max2) / s;
        sigma_max2 = s;
        if (it > 3 && resid < 1e-11) break;
    }
    if (resid > 1e-6)
        std::cerr << "condition_estimate: power iteration not fully converged\n";

    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = 1.0 + 0.11 * std::cos(1.3 * i);
    normalize(y);
    double inv_sigma_min2 = 0.0;
    resid = 1.0;
    for (int it = 0; it < 1000; ++it) {
        y = history_solve(sys, history_solve_transpose(sys, y));
        double s = normalize(y);
        resid = std::fabs(s - inv_sigma_min2) / s;
        inv_sigma_min2 = s;
        if (it > 3 && resid < 1e-11) break;
    }
    if (resid > 1e-6)
        std::cerr << "condition_estimate: inverse iteration not fully converged\n";

    return std::sqrt(sigma_max2 * inv_sigma_min2);
}

}  // namespace qreact
