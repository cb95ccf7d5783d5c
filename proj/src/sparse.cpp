#include "qreact/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qreact {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols,
                                         std::vector<std::tuple<int, int, double>> triplets) {
    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    for (auto& [i, j, v] : triplets)
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw std::out_of_range("SparseMatrix: triplet index out of range");
    std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    m.row_ptr_.assign(rows + 1, 0);
    for (size_t k = 0; k < triplets.size();) {
        auto [i, j, v] = triplets[k];
        double acc = v;
        size_t k2 = k + 1;
        while (k2 < triplets.size() && std::get<0>(triplets[k2]) == i &&
               std::get<1>(triplets[k2]) == j) {
            acc += std::get<2>(triplets[k2]);
            ++k2;
        }
        if (acc != 0.0) {
            m.col_idx_.push_back(j);
            m.vals_.push_back(acc);
            ++m.row_ptr_[i + 1];
        }
        k = k2;
    }
    for (int i = 0; i < rows; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
    return m;
}

SparseMatrix SparseMatrix::identity(int n) {
    std::vector<std::tuple<int, int, double>> t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
    return from_triplets(n, n, std::move(t));
}

int SparseMatrix::max_nnz_per_row() const {
    int m = 0;
    for (int i = 0; i < rows_; ++i) m = std::max(m, row_ptr_[i + 1] - row_ptr_[i]);
    return m;
}

std::vector<double> SparseMatrix::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("SparseMatrix::apply: size mismatch");
    std::vector<double> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * x[col_idx_[k]];
        y[i] = s;
    }
    return y;
}

std::vector<double> SparseMatrix::apply_transpose(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != rows_)
        throw std::invalid_argument("SparseMatrix::apply_transpose: size mismatch");
    std::vector<double> y(cols_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += vals_[k] * x[i];
    return y;
}

double SparseMatrix::at(int i, int j) const {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (col_idx_[k] == j) return vals_[k];
    return 0.0;
}

std::vector<double> SparseMatrix::column_sums() const {
    std::vector<double> s(cols_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s[col_idx_[k]] += vals_[k];
    return s;
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(rows_, cols_);
    for_each([&](int i, int j, double v) { d(i, j) = v; });
    return d;
}

int SparseMatrix::bandwidth() const {
    int b = 0;
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            b = std::max(b, std::abs(col_idx_[k] - i));
    return b;
}

TriDiag SparseMatrix::to_tridiag() const {
    if (rows_ != cols_) throw std::invalid_argument("to_tridiag: matrix not square");
    if (bandwidth() > 1) throw std::invalid_argument("to_tridiag: bandwidth exceeds 1");
    TriDiag t(rows_);
    for_each([&](int i, int j, double v) {
        if (j == i) t.diag[i] = v;
        else if (j == i - 1) t.lower[i] = v;
        else t.upper[i] = v;
    });
    return t;
}

void SparseMatrix::write_coo(std::ostream& os) const {
    os << rows_ << ' ' << nnz() << '\n';
    char buf[64];
    for_each([&](int i, int j, double v) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, j, v);
        os << buf;
    });
}

void write_vector_coo(std::ostream& os, std::span<const double> v) {
    int nnz = 0;
    for (double x : v)
        if (x != 0.0) ++nnz;
    os << v.size() << ' ' << nnz << '\n';
    char buf[64];
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) continue;
        std::snprintf(buf, sizeof buf, "%zu 0 %.17g\n", i, v[i]);
        os << buf;
    }
}

}  // namespace qreact
