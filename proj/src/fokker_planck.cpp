#include "qreact/fokker_planck.hpp"

#include <cmath>
#include <stdexcept>

namespace qreact {

CompositionGrid build_grid(int n_qubits_phi) {
    if (n_qubits_phi < 1 || n_qubits_phi > 12)
        throw std::out_of_range("build_grid: n_qubits_phi must be in [1,12]");
    CompositionGrid g;
    g.n_qubits_phi = n_qubits_phi;
    g.n_cells = 1 << n_qubits_phi;
    g.spacing = 1.0 / g.n_cells;
    g.centers.resize(g.n_cells);
    for (int j = 0; j < g.n_cells; ++j) g.centers[j] = (j + 0.5) * g.spacing;
    return g;
}

TransportOperator assemble_transport_operator(const CompositionGrid& grid, const PsrParams& params) {
    params.validate();
    const int n = grid.n_cells;
    const double h = grid.spacing;
    std::vector<std::tuple<int, int, double>> t;
    // interior faces only; boundary fluxes are identically zero
    for (int f = 0; f < n - 1; ++f) {
        double g = drift((f + 1) * h, params);
        double gp = std::max(g, 0.0);
        double gm = std::min(g, 0.0);
        // flux through the face: gp * f_left + gm * f_right
        t.emplace_back(f, f, -gp / h);
        t.emplace_back(f, f + 1, -gm / h);
        t.emplace_back(f + 1, f, gp / h);
        t.emplace_back(f + 1, f + 1, gm / h);
    }
    TransportOperator op;
    op.matrix = SparseMatrix::from_triplets(n, n, std::move(t));
    return op;
}

DiscretePdf init_beta(const CompositionGrid& grid, double shape_a, double shape_b) {
    if (!(shape_a > 0.0 && shape_b > 0.0))
        throw std::domain_error("init_beta: shape parameters must be positive");
    DiscretePdf f;
    f.values.resize(grid.n_cells);
    double mass = 0.0;
    for (int j = 0; j < grid.n_cells; ++j) {
        double p = grid.centers[j];
        f.values[j] = std::pow(p, shape_a - 1.0) * std::pow(1.0 - p, shape_b - 1.0);
        mass += f.values[j] * grid.spacing;
    }
    for (double& v : f.values) v /= mass;
    return f;
}

TriDiagLu backward_euler_factor(const SparseMatrix& L, double dt, bool transpose) {
    TriDiag T = L.to_tridiag();
    for (int i = 0; i < T.n; ++i) {
        T.diag[i] = 1.0 - dt * T.diag[i];
        T.lower[i] = -dt * T.lower[i];
        T.upper[i] = -dt * T.upper[i];
    }
    if (transpose) {
        // transpose of a tridiagonal: swap the off-diagonals, shifted by one
        TriDiag Tt(T.n);
        Tt.diag = T.diag;
        for (int i = 0; i + 1 < T.n; ++i) {
            Tt.upper[i] = T.lower[i + 1];
            Tt.lower[i + 1] = T.upper[i];
        }
        return TriDiagLu(Tt);
    }
    return TriDiagLu(T);
}

std::vector<DiscretePdf> evolve_classical(const DiscretePdf& f0, const TransportOperator& op,
                                          double dt, int n_steps) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_classical: dt must be positive");
    if (static_cast<int>(f0.values.size()) != op.matrix.rows())
        throw std::invalid_argument("evolve_classical: f0 size does not match operator");
    TriDiagLu lu = backward_euler_factor(op.matrix, dt);
    std::vector<DiscretePdf> traj;
    traj.reserve(n_steps + 1);
    traj.push_back(f0);
    for (int k = 0; k < n_steps; ++k) traj.push_back({lu.solve(traj.back().values)});
    return traj;
}

double grid_moment(const DiscretePdf& f, const CompositionGrid& grid,
                   const std::function<double(double)>& q) {
    double s = 0.0;
    for (int j = 0; j < grid.n_cells; ++j) s += q(grid.centers[j]) * f.values[j] * grid.spacing;
    return s;
}

double pdf_mass(const DiscretePdf& f, const CompositionGrid& grid) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * grid.spacing;
}

DiscretePdf normalized(DiscretePdf f, const CompositionGrid& grid) {
    double m = pdf_mass(f, grid);
    if (m == 0.0) throw std::runtime_error("normalized: zero-mass density");
    for (double& v : f.values) v /= m;
    return f;
}

}  // namespace qreact
