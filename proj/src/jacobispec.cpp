#include "laxkit/jacobispec.hpp"

#include "laxkit/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace laxkit {

namespace {

using cd = std::complex<double>;

long wrap(long j, int n) { return ((j - 1) % n + n) % n; }

// det(z - J) for the tridiagonal block with diagonal b[lo..hi] and couplings
// a[lo..hi-1] (0-based), lowest degree first.
std::vector<double> tridiag_charpoly(const std::vector<double>& a, const std::vector<double>& b, int lo, int hi) {
    std::vector<double> prev{}, cur{1.0};  // Y_{-1} = 0, Y_0 = 1
    for (int j = lo; j <= hi; ++j) {
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t k = 0; k < cur.size(); ++k) {
            next[k + 1] += cur[k];
            next[k] -= b[j] * cur[k];
        }
        if (j > lo) {
            const double c = a[j - 1] * a[j - 1];
            for (std::size_t k = 0; k < prev.size(); ++k) next[k] -= c * prev[k];
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::vector<double> poly_mul(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> out(x.size() + y.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) out[i + j] += x[i] * y[j];
    return out;
}

double scale_of(const PeriodicJacobi& m) {
    double s = 1;
    for (double v : m.a) s = std::max(s, std::abs(v));
    for (double v : m.b) s = std::max(s, std::abs(v));
    return s;
}

// sqrt(P^2 - 4 alpha^2) on the sheet where it behaves like +z^N at +infinity,
// approached from the upper half plane on the real axis.
cd physical_sqrt(const SpectralData& d, double x) {
    // P^2 - 4 alpha^2 is monic with roots xi_k; the product avoids cancellation near them.
    double mag = 1;
    int above = 0;
    for (double xi : d.branch_points) {
        mag *= std::sqrt(std::abs(x - xi));
        if (xi > x) ++above;
    }
    static const cd powers[4] = {1.0, cd(0, 1), -1.0, cd(0, -1)};
    return mag * powers[above % 4];
}

template <class T>
std::vector<T> moments_impl(const std::vector<T>& a, const std::vector<T>& b, const T& a0, int count) {
    if (count < 1) throw UsageError("moment count must be at least 1");
    const std::size_t size = static_cast<std::size_t>((count - 1) / 2 + 1);
    if (b.size() < size || a.size() + 1 < size)
        throw UsageError("moments need b_1..b_" + std::to_string(size) + " and a_1..a_" + std::to_string(size - 1));
    // v = T^j e_1 restricted to the first `size` sites.
    std::vector<T> v(size, T(0)), w(size, T(0));
    v[0] = 1;
    std::vector<T> out;
    const T w0 = a0 * a0;
    for (int j = 0; j < count; ++j) {
        out.push_back(w0 * v[0]);
        for (std::size_t i = 0; i < size; ++i) {
            T s = b[i] * v[i];
            if (i > 0) s += a[i - 1] * v[i - 1];
            if (i + 1 < size) s += a[i] * v[i + 1];
            w[i] = s;
        }
        std::swap(v, w);
    }
    return out;
}

template <class Poly, class T>
void pade_impl(const std::vector<T>& a, const std::vector<T>& b, const T& a0, int k, std::vector<Poly>& A,
               std::vector<Poly>& B, const std::function<Poly(const T&, const T&)>& linear,
               const std::function<Poly(const T&)>& constant) {
    if (k < 1) throw UsageError("Pade order must be at least 1");
    if (static_cast<int>(b.size()) < k || static_cast<int>(a.size()) + 1 < k)
        throw UsageError("Pade order " + std::to_string(k) + " needs b_1..b_k and a_1..a_{k-1}");
    A = {constant(T(0)), constant(a0 * a0)};
    B = {constant(T(1)), linear(T(1), -b[0])};
    for (int j = 2; j <= k; ++j) {
        const Poly step = linear(T(1), -b[j - 1]);
        const T c = a[j - 2] * a[j - 2];
        A.push_back(step * A[j - 1] - A[j - 2] * constant(c));
        B.push_back(step * B[j - 1] - B[j - 2] * constant(c));
    }
}

std::vector<double> dpoly_mul(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty() || y.empty()) return {};
    return poly_mul(x, y);
}

struct DPoly {
    std::vector<double> c;
    friend DPoly operator*(const DPoly& x, const DPoly& y) { return {dpoly_mul(x.c, y.c)}; }
    friend DPoly operator-(DPoly x, const DPoly& y) {
        if (x.c.size() < y.c.size()) x.c.resize(y.c.size(), 0.0);
        for (std::size_t i = 0; i < y.c.size(); ++i) x.c[i] -= y.c[i];
        while (!x.c.empty() && x.c.back() == 0) x.c.pop_back();
        return x;
    }
};

}  // namespace

double PeriodicJacobi::alpha() const {
    double p = 1;
    for (double v : a) p *= v;
    return p;
}

double PeriodicJacobi::a_at(long j) const { return a[wrap(j, period())]; }
double PeriodicJacobi::b_at(long j) const { return b[wrap(j, period())]; }

void PeriodicJacobi::validate() const {
    if (b.size() < 2) throw UsageError("periodic Jacobi matrix needs N >= 2");
    if (a.size() != b.size()) throw UsageError("periodic Jacobi matrix needs N couplings for N sites");
    for (double v : a)
        if (v == 0 || !std::isfinite(v)) throw UsageError("off-diagonal entries must be nonzero and finite");
    for (double v : b)
        if (!std::isfinite(v)) throw UsageError("diagonal entries must be finite");
}

Eigen::MatrixXcd PeriodicJacobi::floquet(cd h) const {
    const int n = period();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) m(j, j) = b[j];
    for (int j = 0; j + 1 < n; ++j) m(j, j + 1) = m(j + 1, j) = a[j];
    m(0, n - 1) += a[n - 1] / h;
    m(n - 1, 0) += a[n - 1] * h;
    return m;
}

double poly_eval(const std::vector<double>& c, double x) {
    double s = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
    return s;
}

cd poly_eval(const std::vector<double>& c, cd z) {
    cd s = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * z + *it;
    return s;
}

cd SpectralData::curve(cd h, cd z) const {
    const double sign = period % 2 == 0 ? -1.0 : 1.0;
    return sign * (alpha * (h + 1.0 / h) - poly_eval(p, z));
}

std::pair<cd, cd> SpectralData::sheets(cd z) const {
    const cd pz = poly_eval(p, z);
    const cd root = std::sqrt(pz * pz - 4 * alpha * alpha);
    cd h1 = (pz + root) / (2 * alpha), h2 = (pz - root) / (2 * alpha);
    if (std::abs(h1) > std::abs(h2)) std::swap(h1, h2);
    return {h1, h2};
}

SpectralData spectral_data(const PeriodicJacobi& m) {
    m.validate();
    const int n = m.period();
    SpectralData d;
    d.period = n;
    d.alpha = m.alpha();
    d.genus = n - 1;

    // P = det(z - J_N) - a_0^2 det(z - J_{2..N-1}).
    d.p = tridiag_charpoly(m.a, m.b, 0, n - 1);
    const auto inner = n > 2 ? tridiag_charpoly(m.a, m.b, 1, n - 2) : std::vector<double>{1.0};
    const double a0sq = m.a0() * m.a0();
    for (std::size_t k = 0; k < inner.size(); ++k) d.p[k] -= a0sq * inner[k];

    // Delta_{N,N} = det(J_{N-1} - z) = (-1)^{N-1} det(z - J_{N-1}).
    d.cofactor = tridiag_charpoly(m.a, m.b, 0, n - 2);
    if (n % 2 == 0)
        for (double& c : d.cofactor) c = -c;

    auto disc = poly_mul(d.p, d.p);
    disc[0] -= 4 * d.alpha * d.alpha;
    const double bound = 4 * scale_of(m) + 1;
    d.branch_points = flatten_roots(real_roots(disc, -bound, bound));
    if (static_cast<int>(d.branch_points.size()) != 2 * n)
        throw NumericalError("found " + std::to_string(d.branch_points.size()) + " branch points, expected " +
                             std::to_string(2 * n));
    for (int j = 0; j < n; ++j) d.stable_bands.push_back({d.branch_points[2 * j], d.branch_points[2 * j + 1]});
    for (int j = 0; j + 1 < n; ++j) d.gaps.push_back({d.branch_points[2 * j + 1], d.branch_points[2 * j + 2]});

    d.auxiliary = flatten_roots(real_roots(d.cofactor, -bound, bound));
    if (static_cast<int>(d.auxiliary.size()) != n - 1)
        throw NumericalError("found " + std::to_string(d.auxiliary.size()) + " auxiliary points, expected " +
                             std::to_string(n - 1));
    const double tol = 1e-9 * scale_of(m);
    for (int j = 0; j + 1 < n; ++j) {
        const double s = d.auxiliary[j];
        if (s < d.gaps[j].first - tol || s > d.gaps[j].second + tol)
            throw NumericalError("auxiliary point " + std::to_string(s) + " is outside gap " + std::to_string(j + 1) +
                                 " [" + std::to_string(d.gaps[j].first) + ", " + std::to_string(d.gaps[j].second) +
                                 "]");
    }
    return d;
}

std::complex<double> gamma_fraction(const std::vector<double>& a, const std::vector<double>& b, double a0, cd z,
                                    int depth) {
    if (depth < 1) throw UsageError("continued fraction depth must be at least 1");
    if (static_cast<int>(b.size()) < depth || static_cast<int>(a.size()) + 1 < depth)
        throw UsageError("depth " + std::to_string(depth) + " needs b_1..b_depth and a_1..a_{depth-1}");
    static const double tiny = std::sqrt(std::numeric_limits<double>::min());
    cd t = 0;
    for (int k = depth; k >= 1; --k) {
        cd den = z - b[k - 1];
        if (k < depth) den -= a[k - 1] * a[k - 1] * t;
        if (std::abs(den) < tiny)
            throw NumericalError("continued fraction denominator vanishes at level " + std::to_string(k), k);
        t = 1.0 / den;
    }
    return a0 * a0 * t;
}

std::vector<double> periodic_a(const PeriodicJacobi& m, int len) {
    std::vector<double> out(len);
    for (int j = 1; j <= len; ++j) out[j - 1] = m.a_at(j);
    return out;
}

std::vector<double> periodic_b(const PeriodicJacobi& m, int len) {
    std::vector<double> out(len);
    for (int j = 1; j <= len; ++j) out[j - 1] = m.b_at(j);
    return out;
}

std::complex<double> gamma_fraction(const PeriodicJacobi& m, cd z, int depth) {
    m.validate();
    if (depth < 1) throw UsageError("continued fraction depth must be at least 1");
    return gamma_fraction(periodic_a(m, depth), periodic_b(m, depth), m.a0(), z, depth);
}

std::vector<cd> gamma_fraction_grid(const PeriodicJacobi& m, const std::vector<cd>& zs, int depth) {
    m.validate();
    if (depth < 1) throw UsageError("continued fraction depth must be at least 1");
    const auto a = periodic_a(m, depth), b = periodic_b(m, depth);
    std::vector<cd> out(zs.size());
    const long count = static_cast<long>(zs.size());
    bool failed = false;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < count; ++i) {
        try {
            out[i] = gamma_fraction(a, b, m.a0(), zs[i], depth);
        } catch (const NumericalError&) {
#pragma omp atomic write
            failed = true;
        }
    }
    // Rerun serially so the error carries its level.
    if (failed) return gamma_fraction_grid_serial(m, zs, depth);
    return out;
}

std::vector<cd> gamma_fraction_grid_serial(const PeriodicJacobi& m, const std::vector<cd>& zs, int depth) {
    m.validate();
    if (depth < 1) throw UsageError("continued fraction depth must be at least 1");
    const auto a = periodic_a(m, depth), b = periodic_b(m, depth);
    std::vector<cd> out;
    out.reserve(zs.size());
    for (const auto& z : zs) out.push_back(gamma_fraction(a, b, m.a0(), z, depth));
    return out;
}

PadeTable pade(const std::vector<double>& a, const std::vector<double>& b, double a0, int k) {
    std::vector<DPoly> A, B;
    pade_impl<DPoly, double>(
        a, b, a0, k, A, B, [](const double& c1, const double& c0) { return DPoly{{c0, c1}}; },
        [](const double& c) { return c == 0 ? DPoly{} : DPoly{{c}}; });
    PadeTable out;
    for (auto& p : A) out.A.push_back(p.c);
    for (auto& p : B) out.B.push_back(p.c);
    return out;
}

PadeTable pade(const PeriodicJacobi& m, int k) {
    m.validate();
    if (k < 1) throw UsageError("Pade order must be at least 1");
    return pade(periodic_a(m, k), periodic_b(m, k), m.a0(), k);
}

PadeTableExact pade_exact(const std::vector<BigRational>& a, const std::vector<BigRational>& b,
                          const BigRational& a0, int k) {
    PadeTableExact out;
    pade_impl<RatPoly, BigRational>(
        a, b, a0, k, out.A, out.B,
        [](const BigRational& c1, const BigRational& c0) { return RatPoly({c0, c1}); },
        [](const BigRational& c) { return RatPoly({c}); });
    return out;
}

std::vector<double> moments(const std::vector<double>& a, const std::vector<double>& b, double a0, int count) {
    return moments_impl<double>(a, b, a0, count);
}

std::vector<double> moments(const PeriodicJacobi& m, int count) {
    m.validate();
    const int len = std::max(1, count / 2 + 1);
    return moments(periodic_a(m, len), periodic_b(m, len), m.a0(), count);
}

std::vector<BigRational> moments_exact(const std::vector<BigRational>& a, const std::vector<BigRational>& b,
                                       const BigRational& a0, int count) {
    return moments_impl<BigRational>(a, b, a0, count);
}

double StieltjesMeasure::density(double x) const {
    bool inside = false;
    for (const auto& [lo, hi] : data.stable_bands)
        if (x >= lo && x <= hi) inside = true;
    if (!inside) return 0;
    const double dnn = poly_eval(data.cofactor, x);
    const double sign = data.period % 2 == 0 ? -1.0 : 1.0;
    const cd v = sign / (2 * std::numbers::pi * cd(0, 1)) * physical_sqrt(data, x) / dnn;
    const double tol = 1e-9 * (1 + std::abs(v));
    if (std::abs(v.imag()) > tol || v.real() < -tol)
        throw NumericalError("band density is not a nonnegative real at x = " + std::to_string(x));
    return std::max(0.0, v.real());
}

namespace {

// Band integral of density * g with x = c - r cos(theta); the substitution
// absorbs square-root behavior at the band edges.
double band_integral(const StieltjesMeasure& mu, std::pair<double, double> band,
                     const std::function<double(double)>& g) {
    const double c = 0.5 * (band.first + band.second), r = 0.5 * (band.second - band.first);
    if (r <= 0) return 0;
    auto f = [&](double theta) {
        const double x = c - r * std::cos(theta);
        return mu.density(x) * g(x) * r * std::sin(theta);
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, std::numbers::pi, 15, 1e-14);
}

}  // namespace

double StieltjesMeasure::integrate(const std::function<double(double)>& g) const {
    double s = 0;
    for (const auto& at : atoms) s += at.mass * g(at.location);
    for (const auto& band : data.stable_bands) s += band_integral(*this, band, g);
    return s;
}

double StieltjesMeasure::total_mass() const {
    return integrate([](double) { return 1.0; });
}

cd StieltjesMeasure::stieltjes(cd z) const {
    const double re = integrate([&](double x) { return (1.0 / (z - x)).real(); });
    const double im = integrate([&](double x) { return (1.0 / (z - x)).imag(); });
    return {re, im};
}

StieltjesMeasure measure_decompose(const PeriodicJacobi& m) {
    StieltjesMeasure mu;
    mu.data = spectral_data(m);
    mu.a0 = m.a0();
    const auto& d = mu.data;
    const int n = d.period;
    const double a0sq = m.a0() * m.a0();
    for (int j = 0; j + 1 < n; ++j) {
        const double s = d.auxiliary[j];
        double prod = 1;
        for (int l = 0; l + 1 < n; ++l) {
            if (l == j) continue;
            if (std::abs(s - d.auxiliary[l]) < 1e-12 * scale_of(m))
                throw NumericalError("auxiliary spectrum is degenerate near " + std::to_string(s));
            prod *= s - d.auxiliary[l];
        }
        // Lambda = det(J_{2..N-1} - s), the empty determinant when N = 2.
        double lambda = 1;
        if (n > 2) {
            lambda = poly_eval(tridiag_charpoly(m.a, m.b, 1, n - 2), s);
            if (n % 2 == 1) lambda = -lambda;
        }
        const cd h_minus = d.sheets(s).first;
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        const double res = (d.alpha * h_minus.real() + sign * a0sq * lambda) / prod;
        // Residues are 0 or -sqrt(P^2 - 4 alpha^2)/prod on the physical sheet.
        const double other = -physical_sqrt(d, s).real() / prod;
        const double tol = 1e-8 * std::max(1.0, a0sq);
        const bool zero = std::abs(res) <= tol;
        if (!zero && std::abs(res - other) > tol)
            throw NumericalError("residue at " + std::to_string(s) + " is neither 0 nor the branch value");
        if (res < -tol) throw NumericalError("negative atom mass at " + std::to_string(s));
        mu.candidates.push_back({s, zero ? 0.0 : res});
        if (!zero) mu.atoms.push_back({s, res});
    }
    return mu;
}

std::vector<cd> stieltjes_grid(const StieltjesMeasure& mu, const std::vector<cd>& zs) {
    std::vector<cd> out(zs.size());
    const long count = static_cast<long>(zs.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) out[i] = mu.stieltjes(zs[i]);
    return out;
}

std::vector<cd> stieltjes_grid_serial(const StieltjesMeasure& mu, const std::vector<cd>& zs) {
    std::vector<cd> out;
    out.reserve(zs.size());
    for (const auto& z : zs) out.push_back(mu.stieltjes(z));
    return out;
}

OrthogonalityReport orthogonality_check(const StieltjesMeasure& mu, const PeriodicJacobi& m, int k_max) {
    if (k_max < 0) throw UsageError("k_max must be nonnegative");
    const auto table = pade(m, std::max(1, k_max));
    OrthogonalityReport r;
    r.gram.assign(k_max + 1, std::vector<double>(k_max + 1, 0.0));
    double norm = m.a0() * m.a0();
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0) norm *= m.a_at(k) * m.a_at(k);
        for (int l = 0; l <= k; ++l) {
            const auto& bk = table.B[k];
            const auto& bl = table.B[l];
            const double v = mu.integrate([&](double x) { return poly_eval(bk, x) * poly_eval(bl, x); });
            r.gram[k][l] = r.gram[l][k] = v;
            if (k != l) r.worst_off_diagonal = std::max(r.worst_off_diagonal, std::abs(v));
        }
        r.worst_norm_error = std::max(r.worst_norm_error, std::abs(r.gram[k][k] - norm) / norm);
    }
    return r;
}

JacobiTodaRun toda_flow_jacobi(const PeriodicJacobi& m0, double t_end, double dt, int sample_every) {
    m0.validate();
    if (!(dt > 0)) throw UsageError("step size must be positive");
    if (!(t_end >= 0)) throw UsageError("end time must be non-negative");
    if (sample_every < 1) throw UsageError("sample_every must be at least 1");
    const int n = m0.period();
    using State = Eigen::VectorXd;  // a_1..a_N, b_1..b_N
    auto rhs = [n](const State& s) {
        State f(2 * n);
        for (int j = 0; j < n; ++j) {
            const int next = (j + 1) % n, prev = (j + n - 1) % n;
            f[j] = s[j] * (s[n + next] - s[n + j]);
            f[n + j] = 2 * (s[j] * s[j] - s[prev] * s[prev]);
        }
        return f;
    };
    auto invariants = [n](const PeriodicJacobi& m) {
        Eigen::MatrixXd a1 = m.floquet(1.0).real();
        Eigen::MatrixXd pw = a1;
        std::vector<double> out;
        for (int k = 1; k <= n; ++k) {
            out.push_back(pw.trace() / k);
            pw = pw * a1;
        }
        return out;
    };
    State x(2 * n);
    for (int j = 0; j < n; ++j) {
        x[j] = m0.a[j];
        x[n + j] = m0.b[j];
    }
    auto to_matrix = [n](const State& s) {
        PeriodicJacobi m;
        m.a.assign(s.data(), s.data() + n);
        m.b.assign(s.data() + n, s.data() + 2 * n);
        return m;
    };

    JacobiTodaRun run;
    run.min_abs_a = std::numeric_limits<double>::infinity();
    const auto i0 = invariants(m0);
    run.invariant_drift.assign(n, 0.0);
    double sum_b0 = 0;
    for (double v : m0.b) sum_b0 += v;
    auto record = [&](double t, const State& s) {
        auto m = to_matrix(s);
        for (double v : m.a) {
            if (v == 0 || !std::isfinite(v)) throw NumericalError("a_j reached zero at t = " + std::to_string(t));
            run.min_abs_a = std::min(run.min_abs_a, std::abs(v));
        }
        auto d = spectral_data(m);
        if (!run.samples.empty()) {
            const auto& ref = run.samples.front().branch_points;
            for (std::size_t k = 0; k < ref.size(); ++k)
                run.band_edge_drift = std::max(run.band_edge_drift, std::abs(d.branch_points[k] - ref[k]));
        }
        double sum_b = 0;
        for (double v : m.b) sum_b += v;
        run.sum_b_drift = std::max(run.sum_b_drift, std::abs(sum_b - sum_b0));
        const auto ik = invariants(m);
        for (int k = 0; k < n; ++k) run.invariant_drift[k] = std::max(run.invariant_drift[k], std::abs(ik[k] - i0[k]));
        run.samples.push_back({t, std::move(m), d.branch_points, d.auxiliary});
    };
    record(0, x);

    const int steps = static_cast<int>(std::ceil(t_end / dt - 1e-9));
    double t = 0;
    for (int s = 0; s < steps; ++s) {
        const double h = s == steps - 1 ? t_end - t : dt;
        State k1 = rhs(x), k2 = rhs(x + h / 2 * k1), k3 = rhs(x + h / 2 * k2), k4 = rhs(x + h * k3);
        x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        t = s == steps - 1 ? t_end : t + h;
        if (!x.allFinite() || x.norm() > 1e8) throw BlowUpError(t, "blow-up at t = " + std::to_string(t));
        if ((s + 1) % sample_every == 0 || s == steps - 1) record(t, x);
    }
    return run;
}

double carleman_partial_sum(const std::vector<double>& a) {
    double s = 0;
    for (double v : a) {
        if (v == 0) return std::numeric_limits<double>::infinity();
        s += 1 / std::abs(v);
    }
    return s;
}

}  // namespace laxkit
