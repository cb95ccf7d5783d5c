// Small dense/banded linear algebra kernels used across the solver stack.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qreact {

struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;  // row-major

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static DenseMatrix identity(int n);
};

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix transpose(const DenseMatrix& A);
std::vector<double> matvec(const DenseMatrix& A, std::span<const double> x);

// LU with partial pivoting. Throws std::runtime_error on a singular pivot.
struct LuFactor {
    DenseMatrix lu;
    std::vector<int> piv;
    std::vector<double> solve(std::vector<double> b) const;
};
LuFactor lu_factor(DenseMatrix A);

// Cyclic Jacobi for real symmetric matrices; eigenvalues ascending,
// eigenvectors in the columns of `vectors`.
struct SymEig {
    std::vector<double> values;
    DenseMatrix vectors;
};
SymEig sym_eig(DenseMatrix A);

// Singular values (descending) via the symmetric eigenproblem of A^T A.
// Test-oracle quality, O(n^3) dense.
std::vector<double> singular_values(const DenseMatrix& A);

// Tridiagonal matrix, rows i: (lower[i], diag[i], upper[i]); lower[0] and
// upper[n-1] are unused.
struct TriDiag {
    int n = 0;
    std::vector<double> lower, diag, upper;

    explicit TriDiag(int size = 0)
        : n(size), lower(size, 0.0), diag(size, 0.0), upper(size, 0.0) {}
};

// LU factorization of a tridiagonal matrix with partial pivoting
// (dgttrf-style, with second superdiagonal fill-in).
class TriDiagLu {
  public:
    explicit TriDiagLu(const TriDiag& T);
    std::vector<double> solve(std::vector<double> b) const;
    int size() const { return n_; }

  private:
    int n_;
    std::vector<double> dl_, d_, du_, du2_;
    std::vector<int> ipiv_;
};

}  // namespace qreact
