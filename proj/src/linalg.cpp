#include "qreact/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qreact {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: dimension mismatch");
    DenseMatrix C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            double aik = A(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}

DenseMatrix transpose(const DenseMatrix& A) {
    DenseMatrix T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
    return T;
}

std::vector<double> matvec(const DenseMatrix& A, std::span<const double> x) {
    if (static_cast<int>(x.size()) != A.cols) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<double> y(A.rows, 0.0);
    for (int i = 0; i < A.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

LuFactor lu_factor(DenseMatrix A) {
    if (A.rows != A.cols) throw std::invalid_argument("lu_factor: matrix not square");
    const int n = A.rows;
    LuFactor f;
    f.piv.resize(n);
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int i = c + 1; i < n; ++i)
            if (std::fabs(A(i, c)) > std::fabs(A(p, c))) p = i;
        if (A(p, c) == 0.0) throw std::runtime_error("lu_factor: singular matrix");
        if (p != c)
            for (int j = 0; j < n; ++j) std::swap(A(c, j), A(p, j));
        f.piv[c] = p;
        for (int i = c + 1; i < n; ++i) {
            A(i, c) /= A(c, c);
            double w = A(i, c);
            for (int j = c + 1; j < n; ++j) A(i, j) -= w * A(c, j);
        }
    }
    f.lu = std::move(A);
    return f;
}

std::vector<double> LuFactor::solve(std::vector<double> b) const {
    const int n = lu.rows;
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("LuFactor::solve: size mismatch");
    for (int i = 0; i < n; ++i) std::swap(b[i], b[piv[i]]);
    for (int i = 1; i < n; ++i) {
        double s = b[i];
        for (int j = 0; j < i; ++j) s -= lu(i, j) * b[j];
        b[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= lu(i, j) * b[j];
        b[i] = s / lu(i, i);
    }
    return b;
}

SymEig sym_eig(DenseMatrix A) {
    if (A.rows != A.cols) throw std::invalid_argument("sym_eig: matrix not square");
    const int n = A.rows;
    DenseMatrix V = DenseMatrix::identity(n);
    double scale = 0.0;
    for (double v : A.a) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (std::sqrt(off) < 1e-15 * scale * n) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = A(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return A(i, i) < A(j, j); });

    SymEig e;
    e.values.resize(n);
    e.vectors = DenseMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        e.values[j] = A(order[j], order[j]);
        for (int i = 0; i < n; ++i) e.vectors(i, j) = V(i, order[j]);
    }
    return e;
}

std::vector<double> singular_values(const DenseMatrix& A) {
    DenseMatrix G = matmul(transpose(A), A);
    SymEig e = sym_eig(std::move(G));
    std::vector<double> s(e.values.size());
    for (size_t i = 0; i < s.size(); ++i)
        s[i] = std::sqrt(std::max(0.0, e.values[e.values.size() - 1 - i]));
    return s;
}

TriDiagLu::TriDiagLu(const TriDiag& T) : n_(T.n) {
    dl_ = T.lower;
    d_ = T.diag;
    du_ = T.upper;
    du2_.assign(std::max(0, n_ - 2), 0.0);
    ipiv_.resize(n_);
    // dl_[i] is the subdiagonal element in row i; shift so dl_[i] couples rows i and i+1
    for (int i = 0; i + 1 < n_; ++i) dl_[i] = T.lower[i + 1];
    if (n_ > 0) dl_[n_ - 1] = 0.0;

    for (int i = 0; i < n_ - 1; ++i) {
        if (std::fabs(d_[i]) >= std::fabs(dl_[i])) {
            ipiv_[i] = i;
            if (d_[i] == 0.0) throw std::runtime_error("tridiagonal solve: singular matrix");
            double fac = dl_[i] / d_[i];
            dl_[i] = fac;
            d_[i + 1] -= fac * du_[i];
            if (i < n_ - 2) du2_[i] = 0.0;
        } else {
            ipiv_[i] = i + 1;
            double fac = d_[i] / dl_[i];
            d_[i] = dl_[i];
            dl_[i] = fac;
            double tmp = du_[i];
            du_[i] = d_[i + 1];
            d_[i + 1] = tmp - fac * d_[i + 1];
            if (i < n_ - 2) {
                du2_[i] = du_[i + 1];
                du_[i + 1] = -fac * du_[i + 1];
            }
        }
    }
    if (n_ > 0) {
        ipiv_[n_ - 1] = n_ - 1;
        if (d_[n_ - 1] == 0.0) throw std::runtime_error("tridiagonal solve: singular matrix");
    }
}

std::vector<double> TriDiagLu::solve(std::vector<double> b) const {
    if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("TriDiagLu::solve: size mismatch");
    for (int i = 0; i < n_ - 1; ++i) {
        if (ipiv_[i] != i) std::swap(b[i], b[i + 1]);
        b[i + 1] -= dl_[i] * b[i];
    }
    b[n_ - 1] /= d_[n_ - 1];
    if (n_ >= 2) b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) / d_[n_ - 2];
    for (int i = n_ - 3; i >= 0; --i)
        b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    return b;
}

}  // namespace qreact
