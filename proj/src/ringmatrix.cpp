#include "laxkit/ringmatrix.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace laxkit {

template <class T>
T berkowitz_determinant(const RingMatrix<T>& a) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw Error("determinant of a non-square matrix");
    if (n == 0) return T(1);
    // Coefficient vector of the characteristic polynomial, built column by column.
    std::vector<T> v{T(1), T(-1) * a(0, 0)};
    for (std::size_t r = 1; r < n; ++r) {
        // Toeplitz column for the leading (r+1) block.
        std::vector<T> col(r + 2, T(0));
        col[0] = T(1);
        col[1] = T(-1) * a(r, r);
        // powers: R * A_r^k * C where R = row r (cols < r), C = col r (rows < r)
        std::vector<T> cvec(r);
        for (std::size_t i = 0; i < r; ++i) cvec[i] = a(i, r);
        for (std::size_t k = 2; k < r + 2; ++k) {
            T s(0);
            for (std::size_t i = 0; i < r; ++i) s += a(r, i) * cvec[i];
            col[k] = T(-1) * s;
            std::vector<T> next(r, T(0));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) next[i] += a(i, j) * cvec[j];
            cvec = std::move(next);
        }
        std::vector<T> nv(r + 2, T(0));
        for (std::size_t i = 0; i < r + 2; ++i)
            for (std::size_t j = 0; j <= i && j < v.size(); ++j) nv[i] += col[i - j] * v[j];
        v = std::move(nv);
    }
    // v holds coefficients of det(zI - A) from the top degree down.
    T d = v[n];
    return n % 2 == 0 ? d : T(-1) * d;
}

template BigRational berkowitz_determinant<BigRational>(const RingMatrix<BigRational>&);
template MultiPoly berkowitz_determinant<MultiPoly>(const RingMatrix<MultiPoly>&);

namespace {

// Row echelon form in place; returns pivot columns.
std::vector<std::size_t> echelon(RationalMatrix& m, std::vector<MultiPoly>* rhs = nullptr,
                                 RationalMatrix* track = nullptr) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != row) {
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
            if (rhs) std::swap((*rhs)[p], (*rhs)[row]);
            if (track)
                for (std::size_t j = 0; j < track->cols(); ++j) std::swap((*track)(p, j), (*track)(row, j));
        }
        BigRational inv = 1 / m(row, col);
        for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) *= inv;
        if (rhs) (*rhs)[row] *= inv;
        if (track)
            for (std::size_t j = 0; j < track->cols(); ++j) (*track)(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            BigRational f = m(i, col);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
            if (rhs) (*rhs)[i] -= (*rhs)[row] * f;
            if (track)
                for (std::size_t j = 0; j < track->cols(); ++j) (*track)(i, j) -= f * (*track)(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

RatPoly charpoly(const RationalMatrix& a) {
    // Faddeev-LeVerrier.
    const std::size_t n = a.rows();
    if (n != a.cols()) throw Error("characteristic polynomial of a non-square matrix");
    std::vector<BigRational> c(n + 1, 0);
    c[n] = 1;
    RationalMatrix mk(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        RationalMatrix next = a * mk;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        mk = next;
        RationalMatrix am = a * mk;
        c[n - k] = -am.trace() / BigRational(static_cast<long>(k));
    }
    return RatPoly(c);
}

BigRational determinant(const RationalMatrix& m) {
    if (m.rows() != m.cols()) throw Error("determinant of a non-square matrix");
    RationalMatrix a = m;
    const std::size_t n = a.rows();
    BigRational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t p = col;
        while (p < n && a(p, col) == 0) ++p;
        if (p == n) return 0;
        if (p != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(col, j));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (a(i, col) == 0) continue;
            BigRational f = a(i, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
        }
    }
    return det;
}

RationalMatrix inverse(const RationalMatrix& m) {
    if (m.rows() != m.cols()) throw Error("inverse of a non-square matrix");
    RationalMatrix a = m;
    RationalMatrix inv = RationalMatrix::identity(m.rows());
    auto piv = echelon(a, nullptr, &inv);
    if (piv.size() != m.rows()) throw Error("singular matrix");
    return inv;
}

int rank(const RationalMatrix& m) {
    RationalMatrix a = m;
    return static_cast<int>(echelon(a).size());
}

std::vector<std::vector<BigRational>> nullspace(const RationalMatrix& m) {
    RationalMatrix a = m;
    auto piv = echelon(a);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::vector<BigRational>> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<BigRational> v(m.cols(), 0);
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::vector<BigRational>> left_nullspace(const RationalMatrix& m) {
    return nullspace(m.transpose());
}

PolySolveResult solve_poly_system(const RationalMatrix& m, const std::vector<MultiPoly>& rhs) {
    if (rhs.size() != m.rows()) throw Error("right-hand side length mismatch");
    RationalMatrix a = m;
    std::vector<MultiPoly> b = rhs;
    RationalMatrix track = RationalMatrix::identity(m.rows());
    auto piv = echelon(a, &b, &track);
    PolySolveResult res;
    res.unique = piv.size() == m.cols();
    for (std::size_t r = piv.size(); r < m.rows(); ++r) {
        if (b[r].is_zero()) continue;
        res.consistent = false;
        res.certificate.resize(m.rows());
        for (std::size_t j = 0; j < m.rows(); ++j) res.certificate[j] = track(r, j);
        res.defect = b[r];
        return res;
    }
    res.x.assign(m.cols(), MultiPoly());
    for (std::size_t r = 0; r < piv.size(); ++r) res.x[piv[r]] = b[r];
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : piv) is_pivot[c] = true;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) res.free_columns.push_back(c);
    return res;
}

std::vector<std::complex<double>> eigenvalues(const std::vector<double>& a, std::size_t n) {
    if (a.size() != n * n) throw Error("eigenvalues: matrix is not square");
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double x = a[i * n + j];
            if (!std::isfinite(x)) throw Error("eigenvalues: non-finite entry");
            m(i, j) = x;
        }
    std::vector<std::complex<double>> out;
    if (n == 0) return out;
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    if (es.info() != Eigen::Success) throw Error("eigenvalue iteration failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

std::vector<std::complex<double>> eigenvalues(const RingMatrix<double>& m) {
    if (m.rows() != m.cols()) throw Error("eigenvalues: matrix is not square");
    std::vector<double> a(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i * m.cols() + j] = m(i, j);
    return eigenvalues(a, m.rows());
}

ExactSpectrum exact_eigenvalues(const RationalMatrix& m) {
    ExactSpectrum s;
    s.charpoly = charpoly(m);
    auto rr = rational_roots(s.charpoly);
    s.rational = rr.roots;
    int d = rr.cofactor.degree();
    if (d > 0) {
        // Companion matrix of the monic cofactor.
        RatPoly c = monic(rr.cofactor);
        std::vector<double> comp(d * d, 0.0);
        for (int i = 1; i < d; ++i) comp[i * d + (i - 1)] = 1.0;
        for (int i = 0; i < d; ++i) comp[i * d + (d - 1)] = -c.coeffs()[i].get_d();
        s.other = eigenvalues(comp, d);
    }
    return s;
}

bool is_near_integer(std::complex<double> z, double tol) {
    return std::abs(z.imag()) < tol && std::abs(z.real() - std::round(z.real())) < tol;
}

RationalMatrix to_rational(const RingMatrix<double>& m) {
    RationalMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = from_double(m(i, j));
    return r;
}

}  // namespace laxkit
