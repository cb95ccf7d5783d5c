// CSR sparse matrix with just enough functionality for the transport and
// history-state systems.
#pragma once

#include <ostream>
#include <span>
#include <tuple>
#include <vector>

#include "qreact/linalg.hpp"

namespace qreact {

class SparseMatrix {
  public:
    SparseMatrix() = default;
    static SparseMatrix from_triplets(int rows, int cols,
                                      std::vector<std::tuple<int, int, double>> triplets);
    static SparseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(vals_.size()); }
    int max_nnz_per_row() const;

    std::vector<double> apply(std::span<const double> x) const;
    std::vector<double> apply_transpose(std::span<const double> x) const;

    double at(int i, int j) const;
    std::vector<double> column_sums() const;
    DenseMatrix to_dense() const;
    TriDiag to_tridiag() const;  // throws if bandwidth exceeds 1
    int bandwidth() const;

    // Coordinate text format: one header line "N nnz", then 0-indexed
    // "row col value" triples.
    void write_coo(std::ostream& os) const;

    template <typename F>
    void for_each(F&& f) const {
        for (int i = 0; i < rows_; ++i)
            for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) f(i, col_idx_[k], vals_[k]);
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> vals_;
};

// "N nnz" header plus "row 0 value" triples; shares the sparse export format.
void write_vector_coo(std::ostream& os, std::span<const double> v);

}  // namespace qreact
