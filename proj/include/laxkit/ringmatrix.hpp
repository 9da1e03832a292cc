#pragma once

#include "laxkit/error.hpp"
#include "laxkit/multipoly.hpp"
#include "laxkit/ratpoly.hpp"

#include <complex>
#include <string>
#include <vector>

namespace laxkit {

// Dense rows x cols matrix over a commutative ring T.
template <class T>
class RingMatrix {
public:
    RingMatrix() = default;
    RingMatrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static RingMatrix identity(std::size_t n) {
        RingMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    RingMatrix& operator+=(const RingMatrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    RingMatrix& operator-=(const RingMatrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    friend RingMatrix operator+(RingMatrix a, const RingMatrix& b) { return a += b; }
    friend RingMatrix operator-(RingMatrix a, const RingMatrix& b) { return a -= b; }
    friend RingMatrix operator*(const RingMatrix& a, const RingMatrix& b) {
        if (a.cols_ != b.rows_) throw Error("matrix product dimension mismatch");
        RingMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& x = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
            }
        return c;
    }
    friend RingMatrix operator*(const T& s, RingMatrix a) {
        for (auto& x : a.a_) x = s * x;
        return a;
    }
    friend bool operator==(const RingMatrix& a, const RingMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    RingMatrix transpose() const {
        RingMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    T trace() const {
        if (rows_ != cols_) throw Error("trace of a non-square matrix");
        T s(0);
        for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
        return s;
    }

private:
    void check_same(const RingMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix dimension mismatch");
    }
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using RationalMatrix = RingMatrix<BigRational>;
using PolyMatrix = RingMatrix<MultiPoly>;

// Division-free determinant (Berkowitz); works over any commutative ring.
template <class T>
T berkowitz_determinant(const RingMatrix<T>& m);

// Characteristic polynomial det(zI - M) over the rationals.
RatPoly charpoly(const RationalMatrix& m);
BigRational determinant(const RationalMatrix& m);
RationalMatrix inverse(const RationalMatrix& m);
int rank(const RationalMatrix& m);
// Basis of {x : M x = 0}.
std::vector<std::vector<BigRational>> nullspace(const RationalMatrix& m);
// Basis of {y : y^T M = 0}.
std::vector<std::vector<BigRational>> left_nullspace(const RationalMatrix& m);

// Solves M x = rhs with polynomial right-hand side by exact elimination.
// Returns false when the system is inconsistent; `certificate` then holds a
// rational row vector y with y^T M = 0 and y^T rhs != 0.
struct PolySolveResult {
    bool consistent = true;
    bool unique = true;
    std::vector<MultiPoly> x;
    std::vector<BigRational> certificate;
    MultiPoly defect;  // y^T rhs for the certificate
    // Non-pivot columns; x has zeros there.
    std::vector<std::size_t> free_columns;
};
PolySolveResult solve_poly_system(const RationalMatrix& m, const std::vector<MultiPoly>& rhs);

// Eigen-backed numeric eigenvalues of a float matrix (row-major storage).
std::vector<std::complex<double>> eigenvalues(const std::vector<double>& a, std::size_t n);
std::vector<std::complex<double>> eigenvalues(const RingMatrix<double>& m);

struct ExactSpectrum {
    std::vector<std::pair<BigRational, int>> rational;  // value, multiplicity
    std::vector<std::complex<double>> other;            // roots of the remaining factor
    RatPoly charpoly;
};
// Rational eigenvalues exactly, the rest numerically.
ExactSpectrum exact_eigenvalues(const RationalMatrix& m);

bool is_near_integer(std::complex<double> z, double tol = 1e-6);

RationalMatrix to_rational(const RingMatrix<double>& m);

}  // namespace laxkit
