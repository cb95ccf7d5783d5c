// Finite-volume discretization of the composition-space PDF transport
// equation for the zero-dimensional reactor: grid, upwind generator,
// backward-Euler reference evolution and grid moments.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qreact/chemistry.hpp"
#include "qreact/sparse.hpp"

namespace qreact {

struct CompositionGrid {
    int n_qubits_phi = 0;
    int n_cells = 0;
    double spacing = 0.0;
    std::vector<double> centers;  // phi_j = (j + 1/2) * spacing
};

// Cell-centered grid on [0,1] with 2^n_qubits_phi cells; n in [1,12].
CompositionGrid build_grid(int n_qubits_phi);

struct DiscretePdf {
    std::vector<double> values;  // density samples f_j, units 1/composition
};

struct TransportOperator {
    SparseMatrix matrix;  // generator L, df/dt = L f
    std::string scheme = "upwind1";
};

// Conservative first-order upwind discretization of the drift term with
// zero-flux boundaries. Columns of L sum to zero.
TransportOperator assemble_transport_operator(const CompositionGrid& grid, const PsrParams& params);

// f_j proportional to phi_j^{a-1} (1-phi_j)^{b-1}, normalized to unit integral.
DiscretePdf init_beta(const CompositionGrid& grid, double shape_a, double shape_b);

// Backward-Euler trajectory f^{k+1} = (I - dt L)^{-1} f^k; trajectory[0] = f0.
std::vector<DiscretePdf> evolve_classical(const DiscretePdf& f0, const TransportOperator& op,
                                          double dt, int n_steps);

// Sum_j q(phi_j) f_j * spacing.
double grid_moment(const DiscretePdf& f, const CompositionGrid& grid,
                   const std::function<double(double)>& q);

double pdf_mass(const DiscretePdf& f, const CompositionGrid& grid);
DiscretePdf normalized(DiscretePdf f, const CompositionGrid& grid);

// Factorization of the backward-Euler step matrix I - dt L (or its
// transpose); shared with the history-state solver.
TriDiagLu backward_euler_factor(const SparseMatrix& L, double dt, bool transpose = false);

}  // namespace qreact
