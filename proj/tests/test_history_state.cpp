#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include "qreact/history_state.hpp"
#include "qreact/linalg.hpp"

using namespace qreact;

namespace {

double rel_l2(std::span<const double> a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

HistoryLinearSystem default_system(int n_t = 4, int n_phi = 5, double dt = 0.15) {
    auto grid = build_grid(n_phi);
    auto op = assemble_transport_operator(grid, PsrParams{});
    auto f0 = init_beta(grid, 8.0, 8.0);
    return assemble_history_system(op, f0, dt, n_t);
}

}  // namespace

TEST_CASE("structure for one time step and L = 0") {
    TransportOperator op;
    op.matrix = SparseMatrix::from_triplets(2, 2, {});
    DiscretePdf f0{{0.75, 0.25}};
    auto sys = assemble_history_system(op, f0, 0.5, 1);
    // A = [[I, 0], [-I, I]], b = (f0, 0)
    CHECK(sys.total_dim() == 4);
    for (int i = 0; i < 4; ++i) CHECK(sys.A.at(i, i) == 1.0);
    CHECK(sys.A.at(2, 0) == -1.0);
    CHECK(sys.A.at(3, 1) == -1.0);
    CHECK(sys.A.at(0, 2) == 0.0);
    CHECK(sys.b[0] == 0.75);
    CHECK(sys.b[1] == 0.25);
    CHECK(sys.b[2] == 0.0);
    CHECK(sys.b[3] == 0.0);
}

TEST_CASE("default split gives the 9-qubit system") {
    auto sys = default_system();
    CHECK(sys.total_dim() == 512);
    CHECK(sys.n_t_qubits + sys.n_phi_qubits == 9);
    CHECK(sys.A.max_nnz_per_row() <= 4);  // identity coupling + tridiagonal stencil
    CHECK(sys.A.nnz() <= sys.total_dim() * 4);
}

TEST_CASE("solving the history system preserves block mass") {
    auto sys = default_system();
    auto v = solve_ideal(sys);
    double f0_sum = 0.0;
    for (int i = 0; i < sys.block_size(); ++i) f0_sum += sys.b[i];
    for (int k = 0; k < sys.n_blocks(); ++k) {
        double s = 0.0;
        for (double x : v.block(k)) s += x;
        CHECK(s == doctest::Approx(f0_sum).epsilon(1e-10));
    }
}

TEST_CASE("ideal solve reproduces the backward-Euler trajectory blockwise") {
    auto grid = build_grid(5);
    auto op = assemble_transport_operator(grid, PsrParams{});
    auto f0 = init_beta(grid, 8.0, 8.0);
    const double dt = 0.15;
    auto sys = assemble_history_system(op, f0, dt, 4);
    auto v = solve_ideal(sys);
    auto traj = evolve_classical(f0, op, dt, 15);
    for (int k = 0; k < 16; ++k)
        CHECK(rel_l2(v.block(k), traj[k].values) < 1e-10);
}

TEST_CASE("blocks equal f0 when L = 0") {
    TransportOperator op;
    op.matrix = SparseMatrix::from_triplets(4, 4, {});
    DiscretePdf f0{{4.0, 3.0, 2.0, 1.0}};
    auto sys = assemble_history_system(op, f0, 1.0, 2);
    auto v = solve_ideal(sys);
    for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j) CHECK(v.block(k)[j] == doctest::Approx(f0.values[j]));
}

TEST_CASE("one dense 2x2 step checked against the hand inverse") {
    TransportOperator op;
    op.matrix = SparseMatrix::from_triplets(2, 2, {{0, 0, -1.0}, {0, 1, 0.5},
                                                   {1, 0, 1.0}, {1, 1, -0.5}});
    DiscretePdf f0{{1.0, 2.0}};
    const double dt = 0.4;
    auto sys = assemble_history_system(op, f0, dt, 1);
    auto v = solve_ideal(sys);
    // (I - dt L) = [[1.4, -0.2], [-0.4, 1.2]]; inverse = [[1.2, 0.2], [0.4, 1.4]] / 1.6
    double det = 1.4 * 1.2 - 0.2 * 0.4;
    double x0 = (1.2 * 1.0 + 0.2 * 2.0) / det;
    double x1 = (0.4 * 1.0 + 1.4 * 2.0) / det;
    CHECK(v.block(1)[0] == doctest::Approx(x0).epsilon(1e-14));
    CHECK(v.block(1)[1] == doctest::Approx(x1).epsilon(1e-14));
}

TEST_CASE("extract_time_block renormalizes and indexes correctly") {
    auto grid = build_grid(5);
    auto op = assemble_transport_operator(grid, PsrParams{});
    auto f0 = init_beta(grid, 8.0, 8.0);
    auto sys = assemble_history_system(op, f0, 0.15, 4);
    auto v = solve_ideal(sys);

    auto b0 = extract_time_block(v, 0);
    for (int j = 0; j < 32; ++j) CHECK(b0.values[j] == doctest::Approx(f0.values[j]).epsilon(1e-12));

    auto traj = evolve_classical(f0, op, 0.15, 15);
    auto last = extract_time_block(v, 15);
    auto ref = normalized(traj[15], grid);
    CHECK(rel_l2(last.values, ref.values) < 1e-10);

    CHECK_THROWS_AS(extract_time_block(v, 16), std::out_of_range);
    CHECK_THROWS_AS(extract_time_block(v, -1), std::out_of_range);
}

TEST_CASE("transpose solve agrees with the dense transpose") {
    auto sys = default_system(2, 2, 0.3);
    DenseMatrix At = transpose(sys.A.to_dense());
    LuFactor lu = lu_factor(At);
    std::vector<double> rhs(sys.total_dim());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = std::sin(0.9 * i) + 1.2;
    auto got = history_solve_transpose(sys, rhs);
    auto want = lu.solve(rhs);
    CHECK(rel_l2(got, want) < 1e-12);
}

TEST_CASE("condition estimate: identity system") {
    TransportOperator op;
    op.matrix = SparseMatrix::from_triplets(2, 2, {});
    DiscretePdf f0{{1.0, 1.0}};
    auto sys = assemble_history_system(op, f0, 1.0, 0);  // single block: A = I
    CHECK(condition_estimate(sys) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("condition estimate vs dense singular values, small system") {
    TransportOperator op;
    op.matrix = SparseMatrix::from_triplets(2, 2, {});
    DiscretePdf f0{{1.0, 0.0}};
    auto sys = assemble_history_system(op, f0, 1.0, 1);  // A = [[I,0],[-I,I]] (4x4)
    auto sv = singular_values(sys.A.to_dense());
    double kappa_dense = sv.front() / sv.back();
    double kappa = condition_estimate(sys);
    CHECK(kappa > kappa_dense / 2);
    CHECK(kappa < kappa_dense * 2);
}

TEST_CASE("condition estimate vs dense singular values, default system") {
    auto sys = default_system();
    auto sv = singular_values(sys.A.to_dense());
    double kappa_dense = sv.front() / sv.back();
    double kappa = condition_estimate(sys);
    CHECK(std::isfinite(kappa));
    CHECK(kappa > kappa_dense / 2);
    CHECK(kappa < kappa_dense * 2);
}

TEST_CASE("assembly rejects inconsistent inputs") {
    TransportOperator op;
    op.matrix = SparseMatrix::from_triplets(4, 4, {});
    DiscretePdf f0{{1.0, 1.0}};
    CHECK_THROWS_AS(assemble_history_system(op, f0, 0.1, 2), std::invalid_argument);

    TransportOperator op3;
    op3.matrix = SparseMatrix::from_triplets(3, 3, {});
    DiscretePdf f3{{1.0, 1.0, 1.0}};
    CHECK_THROWS_AS(assemble_history_system(op3, f3, 0.1, 2), std::invalid_argument);

    TransportOperator big;
    big.matrix = SparseMatrix::from_triplets(1 << 12, 1 << 12, {});
    DiscretePdf fb{std::vector<double>(1 << 12, 1.0)};
    CHECK_THROWS_AS(assemble_history_system(big, fb, 0.1, 3), std::invalid_argument);
}

TEST_CASE("coo export format") {
    TransportOperator op;
    op.matrix = SparseMatrix::from_triplets(2, 2, {{0, 0, -2.0}, {1, 0, 2.0}});
    DiscretePdf f0{{1.0, 0.0}};
    auto sys = assemble_history_system(op, f0, 0.25, 1);
    std::ostringstream os;
    sys.A.write_coo(os);
    std::istringstream in(os.str());
    int n, nnz;
    in >> n >> nnz;
    CHECK(n == 4);
    CHECK(nnz == sys.A.nnz());
    int r, c;
    double val;
    int count = 0;
    while (in >> r >> c >> val) {
        CHECK(sys.A.at(r, c) == doctest::Approx(val));
        ++count;
    }
    CHECK(count == nnz);
}

TEST_CASE("singular step blocks are reported by the history solve") {
    TransportOperator op;
    op.matrix = SparseMatrix::identity(2);  // I - dt L = 0 at dt = 1
    DiscretePdf f0{{1.0, 0.0}};
    auto sys = assemble_history_system(op, f0, 1.0, 1);
    CHECK_THROWS_AS(solve_ideal(sys), std::runtime_error);
}
