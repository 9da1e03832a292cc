#include "laxkit/laxflow.hpp"

#include "laxkit/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

namespace laxkit {

MatrixPencil::MatrixPencil(int low_, std::vector<Mat> coeffs_, Symmetry s)
    : low(low_), coeffs(std::move(coeffs_)), symmetry(s) {
    validate();
}

void MatrixPencil::validate() const {
    if (coeffs.empty()) throw UsageError("pencil has no coefficients");
    const auto n = coeffs[0].rows();
    if (n == 0) throw UsageError("pencil of size 0");
    for (const auto& c : coeffs)
        if (c.rows() != n || c.cols() != n) throw UsageError("pencil coefficients must be square and of equal size");
}

Mat MatrixPencil::coeff(int k) const {
    if (k < low || k > high()) return Mat::Zero(dim(), dim());
    return coeffs[k - low];
}

Mat MatrixPencil::at(double h) const {
    if (h == 0 && low < 0) throw UsageError("pencil with negative powers evaluated at h = 0");
    Mat out = Mat::Zero(dim(), dim());
    for (int k = low; k <= high(); ++k) out += coeffs[k - low] * std::pow(h, k);
    return out;
}

Eigen::MatrixXcd MatrixPencil::at(std::complex<double> h) const {
    if (h == 0.0 && low < 0) throw UsageError("pencil with negative powers evaluated at h = 0");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim(), dim());
    for (int k = low; k <= high(); ++k) out += coeffs[k - low].cast<std::complex<double>>() * std::pow(h, k);
    return out;
}

double MatrixPencil::norm() const {
    double s = 0;
    for (const auto& c : coeffs) s += c.squaredNorm();
    return std::sqrt(s);
}

MatrixPencil commutator(const MatrixPencil& a, const MatrixPencil& b) {
    if (a.dim() != b.dim()) throw UsageError("commutator of pencils of different size");
    const int lo = a.low + b.low, hi = a.high() + b.high();
    std::vector<Mat> out(hi - lo + 1, Mat::Zero(a.dim(), a.dim()));
    for (int i = a.low; i <= a.high(); ++i)
        for (int j = b.low; j <= b.high(); ++j) {
            const Mat& x = a.coeffs[i - a.low];
            const Mat& y = b.coeffs[j - b.low];
            out[i + j - lo] += x * y - y * x;
        }
    return MatrixPencil(lo, std::move(out));
}

double SpectralCurve::coeff(int zpow, int hpow) const {
    auto it = coeffs.find({zpow, hpow});
    return it == coeffs.end() ? 0.0 : it->second;
}

double SpectralCurve::eval(double z, double h) const {
    double s = 0;
    for (const auto& [k, c] : coeffs) s += c * std::pow(z, k.first) * std::pow(h, k.second);
    return s;
}

namespace {

// Coefficients of det(M - zI), lowest power of z first.
std::vector<double> charpoly_coeffs(const Mat& m) {
    Eigen::EigenSolver<Mat> es(m, false);
    std::vector<std::complex<double>> p{1.0};
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        // multiply by (lambda_i - z)
        std::complex<double> lam = es.eigenvalues()[i];
        std::vector<std::complex<double>> q(p.size() + 1, 0.0);
        for (std::size_t k = 0; k < p.size(); ++k) {
            q[k] += lam * p[k];
            q[k + 1] -= p[k];
        }
        p = q;
    }
    std::vector<double> out;
    for (const auto& c : p) out.push_back(c.real());
    return out;
}

std::vector<double> default_nodes(int count) {
    std::vector<double> out;
    for (int k = 1; static_cast<int>(out.size()) < count; ++k) {
        for (double v : {double(k), -double(k)}) out.push_back(v);
        if (k > 1)
            for (double v : {1.0 / k, -1.0 / k}) out.push_back(v);
    }
    out.resize(count);
    return out;
}

}  // namespace

SpectralCurve pencil_charpoly(const MatrixPencil& p) {
    const int n = static_cast<int>(p.dim());
    return pencil_charpoly(p, default_nodes(n * (p.high() - p.low) + 1));
}

SpectralCurve pencil_charpoly(const MatrixPencil& p, const std::vector<double>& nodes) {
    p.validate();
    const int n = static_cast<int>(p.dim());
    const int lo = n * p.low, hi = n * p.high();
    const int count = hi - lo + 1;
    if (static_cast<int>(nodes.size()) < count)
        throw UsageError("need " + std::to_string(count) + " interpolation nodes, got " + std::to_string(nodes.size()));
    std::set<double> seen;
    for (double h : nodes) {
        if (!seen.insert(h).second) throw UsageError("duplicate interpolation node " + std::to_string(h));
        if (h == 0 && p.low < 0) throw UsageError("interpolation node 0 with negative powers of h");
    }
    // Rows: nodes; columns: powers lo..hi.  Solve once per power of z.
    const int rows = static_cast<int>(nodes.size());
    Mat v(rows, count);
    Mat rhs(rows, n + 1);
    for (int r = 0; r < rows; ++r) {
        for (int e = lo; e <= hi; ++e) v(r, e - lo) = std::pow(nodes[r], e);
        auto c = charpoly_coeffs(p.at(nodes[r]));
        for (int k = 0; k <= n; ++k) rhs(r, k) = c[k];
    }
    Mat sol = v.colPivHouseholderQr().solve(rhs);
    SpectralCurve out;
    out.z_degree = n;
    double scale = std::max(1.0, sol.cwiseAbs().maxCoeff());
    for (int k = 0; k <= n; ++k)
        for (int e = lo; e <= hi; ++e) {
            double c = sol(e - lo, k);
            if (std::abs(c) > 1e-10 * scale) out.coeffs[{k, e}] = c;
        }
    return out;
}

ExactSpectralCurve pencil_charpoly_exact(int low, const std::vector<RationalMatrix>& coeffs) {
    if (coeffs.empty()) throw UsageError("pencil has no coefficients");
    const std::size_t n = coeffs[0].rows();
    const std::vector<std::string> syms{"z", "h"};
    auto z = MultiPoly::symbol("z", syms), h = MultiPoly::symbol("h", syms);
    PolyMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            MultiPoly e(syms);
            for (std::size_t k = 0; k < coeffs.size(); ++k) {
                if (coeffs[k].rows() != n || coeffs[k].cols() != n)
                    throw UsageError("pencil coefficients must be square and of equal size");
                if (coeffs[k](i, j) != 0) e += pow(h, static_cast<int>(k)) * coeffs[k](i, j);
            }
            if (i == j) e -= z * pow(h, -low);
            m(i, j) = e;
        }
    return {berkowitz_determinant(m).with_variables(syms), -static_cast<int>(n) * low};
}

namespace {

MatrixPencil axpy(const MatrixPencil& x, double a, const MatrixPencil& y) {
    MatrixPencil out = x;
    for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] += a * y.coeffs[k];
    return out;
}

// rhs restricted to the window of a; anything outside must vanish.
MatrixPencil project(const MatrixPencil& a, const MatrixPencil& r) {
    if (r.dim() != a.dim()) throw UsageError("right-hand side has the wrong size");
    double tol = 1e-10 * std::max(1.0, r.norm());
    for (int k = r.low; k <= r.high(); ++k)
        if ((k < a.low || k > a.high()) && r.coeffs[k - r.low].norm() > tol)
            throw Error("right-hand side leaves the degree window [" + std::to_string(a.low) + ", " +
                        std::to_string(a.high()) + "] at h^" + std::to_string(k));
    std::vector<Mat> out;
    for (int k = a.low; k <= a.high(); ++k) out.push_back(r.coeff(k));
    MatrixPencil p;
    p.low = a.low;
    p.coeffs = std::move(out);
    p.symmetry = a.symmetry;
    return p;
}

int step_count(double t_end, double dt) {
    if (!(dt > 0)) throw UsageError("step size must be positive");
    if (!(t_end >= 0)) throw UsageError("end time must be non-negative");
    return static_cast<int>(std::ceil(t_end / dt - 1e-9));
}

}  // namespace

Trajectory integrate_pencil(const MatrixPencil& p0, const PencilField& rhs, double t_end, double dt,
                            const IntegrateOptions& opt) {
    p0.validate();
    const int steps = step_count(t_end, dt);
    if (opt.sample_every < 1) throw UsageError("sample_every must be at least 1");
    Trajectory tr;
    tr.step = dt;
    tr.times.push_back(0);
    tr.states.push_back(p0);
    MatrixPencil a = p0;
    double t = 0;
    auto f = [&](const MatrixPencil& x) { return project(x, rhs(x)); };
    for (int s = 0; s < steps; ++s) {
        double h = std::min(dt, t_end - t);
        if (s == steps - 1) h = t_end - t;
        MatrixPencil k1 = f(a);
        MatrixPencil k2 = f(axpy(a, h / 2, k1));
        MatrixPencil k3 = f(axpy(a, h / 2, k2));
        MatrixPencil k4 = f(axpy(a, h, k3));
        for (std::size_t k = 0; k < a.coeffs.size(); ++k)
            a.coeffs[k] += h / 6 * (k1.coeffs[k] + 2 * k2.coeffs[k] + 2 * k3.coeffs[k] + k4.coeffs[k]);
        t = s == steps - 1 ? t_end : t + h;
        double nrm = a.norm();
        if (!std::isfinite(nrm) || nrm > opt.blow_up)
            throw BlowUpError(t, "blow-up at t = " + std::to_string(t) + " (norm " + std::to_string(nrm) + ")");
        if ((s + 1) % opt.sample_every == 0 || s == steps - 1) {
            tr.times.push_back(t);
            tr.states.push_back(a);
        }
    }
    return tr;
}

Trajectory integrate_lax(const MatrixPencil& p0, const PencilField& b, double t_end, double dt,
                         const IntegrateOptions& opt) {
    return integrate_pencil(p0, [&](const MatrixPencil& a) { return commutator(a, b(a)); }, t_end, dt, opt);
}

double isospectral_drift(const Trajectory& traj, const std::vector<double>& h_samples, int k_max) {
    if (traj.states.empty()) throw UsageError("empty trajectory");
    auto traces = [&](const MatrixPencil& p, double h) {
        Mat a = p.at(h);
        Mat pw = a;
        std::vector<double> out;
        for (int k = 1; k <= k_max; ++k) {
            out.push_back(pw.trace());
            pw = pw * a;
        }
        return out;
    };
    double worst = 0;
    for (double h : h_samples) {
        auto ref = traces(traj.states.front(), h);
        for (const auto& s : traj.states) {
            auto cur = traces(s, h);
            for (int k = 0; k < k_max; ++k) worst = std::max(worst, std::abs(cur[k] - ref[k]));
        }
    }
    return worst;
}

namespace {

void check_distinct(const Vec& v, const char* what) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        for (Eigen::Index j = i + 1; j < v.size(); ++j)
            if (v[i] == v[j]) throw UsageError(std::string(what) + " entries must be distinct");
}

void check_skew(const Mat& m, const char* what) {
    if (m.rows() != m.cols()) throw UsageError(std::string(what) + " must be square");
    if ((m + m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm()))
        throw UsageError(std::string(what) + " must be skew-symmetric");
}

Mat toda_b(const Mat& a0) {
    Mat b = Mat::Zero(a0.rows(), a0.cols());
    for (Eigen::Index j = 0; j + 1 < a0.rows(); ++j) {
        b(j, j + 1) = -a0(j, j + 1);
        b(j + 1, j) = a0(j + 1, j);
    }
    return b;
}

}  // namespace

LaxSystem toda_periodic(const std::vector<double>& a, const std::vector<double>& b) {
    const auto n = static_cast<Eigen::Index>(b.size());
    if (n < 2) throw UsageError("periodic Toda needs N >= 2");
    if (a.size() != b.size()) throw UsageError("periodic Toda needs N couplings for N sites");
    for (double x : a)
        if (x == 0) throw UsageError("Toda couplings must be nonzero");
    Mat am = Mat::Zero(n, n), a0 = Mat::Zero(n, n), ap = Mat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) a0(j, j) = b[j];
    for (Eigen::Index j = 0; j + 1 < n; ++j) a0(j, j + 1) = a0(j + 1, j) = a[j];
    am(0, n - 1) = a[n - 1];
    ap(n - 1, 0) = a[n - 1];
    LaxSystem s;
    s.name = "toda-periodic";
    s.initial = MatrixPencil(-1, {am, a0, ap});
    // The flow is dA/dt = [B_T, A] with B_T = A_+ - A_-; we return B = -B_T.
    s.b = [](const MatrixPencil& a) {
        const auto n = a.dim();
        Mat bm = Mat::Zero(n, n), bp = Mat::Zero(n, n);
        bm(0, n - 1) = a.coeffs[0](0, n - 1);
        bp(n - 1, 0) = -a.coeffs[2](n - 1, 0);
        return MatrixPencil(-1, {bm, toda_b(a.coeffs[1]), bp});
    };
    return s;
}

LaxSystem toda_periodic_from_phase(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw UsageError("positions and momenta differ in length");
    const std::size_t n = x.size();
    std::vector<double> a(n), b(n);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = 0.5 * std::exp(x[j] - x[(j + 1) % n]);
        b[j] = -0.5 * y[j];
    }
    return toda_periodic(a, b);
}

LaxSystem toda_open(const std::vector<double>& a, const std::vector<double>& b) {
    const auto n = static_cast<Eigen::Index>(b.size());
    if (n < 2) throw UsageError("open Toda needs N >= 2");
    if (a.size() + 1 != b.size()) throw UsageError("open Toda needs N-1 couplings for N sites");
    Mat a0 = Mat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) a0(j, j) = b[j];
    for (Eigen::Index j = 0; j + 1 < n; ++j) a0(j, j + 1) = a0(j + 1, j) = a[j];
    LaxSystem s;
    s.name = "toda-open";
    s.initial = MatrixPencil(0, {a0}, MatrixPencil::Symmetry::symmetric);
    s.b = [](const MatrixPencil& a) { return MatrixPencil(0, {toda_b(a.coeffs[0])}); };
    return s;
}

LaxSystem toda_open_from_phase(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw UsageError("positions and momenta differ in length");
    std::vector<double> a, b;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j + 1 < x.size()) a.push_back(0.5 * std::exp(x[j] - x[j + 1]));
        b.push_back(-0.5 * y[j]);
    }
    return toda_open(a, b);
}

LaxSystem euler_arnold(const Vec& alpha, const Vec& beta, const Mat& x) {
    const auto n = alpha.size();
    if (beta.size() != n || x.rows() != n) throw UsageError("Euler-Arnold data of inconsistent size");
    check_distinct(alpha, "alpha");
    check_skew(x, "X");
    Mat lambda = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) lambda(i, j) = (beta[i] - beta[j]) / (alpha[i] - alpha[j]);
    LaxSystem s;
    s.name = "euler-arnold";
    s.initial = MatrixPencil(0, {x, Mat(alpha.asDiagonal())});
    s.b = [lambda, beta](const MatrixPencil& a) {
        return MatrixPencil(0, {Mat(lambda.cwiseProduct(a.coeffs[0])), Mat(beta.asDiagonal())});
    };
    return s;
}

LaxSystem manakov(const Vec& inertia, const Mat& m) {
    const auto n = inertia.size();
    if (m.rows() != n) throw UsageError("inertia and M of inconsistent size");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(inertia[i] > 0)) throw UsageError("inertia entries must be positive");
    check_skew(m, "M");
    LaxSystem s;
    s.name = "manakov";
    s.initial = MatrixPencil(0, {m, Mat(inertia.array().square().matrix().asDiagonal())});
    s.b = [inertia](const MatrixPencil& a) {
        const auto n = inertia.size();
        Mat omega = Mat::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) omega(i, j) = a.coeffs[0](i, j) / (inertia[i] + inertia[j]);
        return MatrixPencil(0, {omega, Mat(inertia.asDiagonal())});
    };
    return s;
}

LaxSystem rank_two_flow(const Vec& alpha, const Vec& beta, const Vec& x, const Vec& y) {
    const auto n = alpha.size();
    if (beta.size() != n || x.size() != n || y.size() != n) throw UsageError("rank-two data of inconsistent size");
    check_distinct(alpha, "alpha");
    Mat lambda = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) lambda(i, j) = (beta[i] - beta[j]) / (alpha[i] - alpha[j]);
    Mat wedge = x * y.transpose() - y * x.transpose();
    LaxSystem s;
    s.name = "rank-two";
    s.initial = MatrixPencil(0, {Mat(-y * y.transpose()), Mat(-wedge), Mat(alpha.asDiagonal())});
    // y^x = -(x^y) is the h coefficient itself.
    s.b = [lambda, beta](const MatrixPencil& a) {
        return MatrixPencil(0, {Mat(lambda.cwiseProduct(a.coeffs[1])), Mat(beta.asDiagonal())});
    };
    return s;
}

LaxSystem neumann(const Vec& alpha, const Vec& x, const Vec& y) {
    auto s = rank_two_flow(alpha, alpha, x, y);
    s.name = "neumann";
    return s;
}

LaxSystem jacobi_geodesic(const Vec& alpha, const Vec& x, const Vec& y) {
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
        if (alpha[i] == 0) throw UsageError("alpha entries must be nonzero");
    auto s = rank_two_flow(alpha, alpha.cwiseInverse(), x, y);
    s.name = "jacobi-geodesic";
    return s;
}

std::vector<double> rank_two_branch_points(const Vec& alpha, const Vec& x, const Vec& y) {
    const auto n = alpha.size();
    if (y.norm() == 0) throw UsageError("y must be nonzero");
    Mat p = Mat::Identity(n, n) - y * y.transpose() / y.squaredNorm();
    Mat l = p * (Mat(alpha.asDiagonal()) - x * x.transpose()) * p;
    Eigen::SelfAdjointEigenSolver<Mat> es(l);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    // Drop the eigenvalue belonging to y.
    auto zero = std::min_element(ev.begin(), ev.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    ev.erase(zero);
    for (Eigen::Index i = 0; i < n; ++i) ev.push_back(alpha[i]);
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<std::string> lax_builtin_names() {
    return {"euler-arnold", "jacobi-geodesic", "manakov", "neumann", "toda-open", "toda-periodic"};
}

LaxSystem lax_builtin(const std::string& name, int n, std::mt19937_64& rng) {
    if (n < 2) throw UsageError("size must be at least 2");
    std::uniform_real_distribution<double> u(-1, 1), pos(0.5, 1.5), jit(0, 0.4);
    auto skew = [&] {
        Mat m = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                m(i, j) = u(rng);
                m(j, i) = -m(i, j);
            }
        return m;
    };
    auto spread = [&] {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = 1 + i + jit(rng);
        return v;
    };
    if (name == "toda-periodic" || name == "toda-open") {
        std::vector<double> a(name == "toda-open" ? n - 1 : n), b(n);
        for (auto& x : a) x = pos(rng);
        for (auto& x : b) x = u(rng);
        return name == "toda-open" ? toda_open(a, b) : toda_periodic(a, b);
    }
    if (name == "euler-arnold") {
        Vec alpha = spread(), beta(n);
        for (int i = 0; i < n; ++i) beta[i] = u(rng);
        return euler_arnold(alpha, beta, skew());
    }
    if (name == "manakov") {
        Vec j(n);
        for (int i = 0; i < n; ++i) j[i] = 1 + 0.5 * i + jit(rng);
        return manakov(j, skew());
    }
    if (name == "neumann" || name == "jacobi-geodesic") {
        Vec alpha = spread(), x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = u(rng);
            y[i] = u(rng);
        }
        x.normalize();
        y -= y.dot(x) * x;
        return name == "neumann" ? neumann(alpha, x, y) : jacobi_geodesic(alpha, x, y);
    }
    throw UsageError("unknown Lax builtin '" + name + "'");
}

namespace {

struct CompiledPoly {
    std::vector<std::pair<double, std::vector<int>>> terms;
    double eval(const Vec& x) const {
        double s = 0;
        for (const auto& [c, e] : terms) {
            double t = c;
            for (std::size_t j = 0; j < e.size(); ++j)
                for (int k = 0; k < e[j]; ++k) t *= x[j];
            s += t;
        }
        return s;
    }
};

CompiledPoly compile(const MultiPoly& p, const VectorFieldSystem& sys) {
    CompiledPoly out;
    MultiPoly q = p.with_variables(sys.symbols());
    for (const auto& [e, c] : q.terms()) out.terms.push_back({to_double(c), std::vector<int>(e.begin(), e.end())});
    return out;
}

}  // namespace

PhaseTrajectory integrate_vector_field(const VectorFieldSystem& sys, const Vec& x0, double t_end, double dt,
                                       const IntegrateOptions& opt) {
    if (!sys.constants.empty()) throw UsageError("bind the constants of '" + sys.name + "' before integrating");
    if (x0.size() != static_cast<Eigen::Index>(sys.dimension())) throw UsageError("initial state has the wrong size");
    const int steps = step_count(t_end, dt);
    std::vector<CompiledPoly> f;
    for (const auto& e : sys.equations) f.push_back(compile(e, sys));
    auto rhs = [&](const Vec& x) {
        Vec out(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = f[i].eval(x);
        return out;
    };
    PhaseTrajectory tr;
    tr.step = dt;
    tr.times.push_back(0);
    tr.states.push_back(x0);
    Vec x = x0;
    double t = 0;
    for (int s = 0; s < steps; ++s) {
        double h = s == steps - 1 ? t_end - t : dt;
        Vec k1 = rhs(x), k2 = rhs(x + h / 2 * k1), k3 = rhs(x + h / 2 * k2), k4 = rhs(x + h * k3);
        x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        t = s == steps - 1 ? t_end : t + h;
        if (!x.allFinite() || x.norm() > opt.blow_up)
            throw BlowUpError(t, "blow-up at t = " + std::to_string(t));
        if ((s + 1) % opt.sample_every == 0 || s == steps - 1) {
            tr.times.push_back(t);
            tr.states.push_back(x);
        }
    }
    return tr;
}

std::vector<double> invariant_drift(const VectorFieldSystem& sys, const PhaseTrajectory& traj,
                                    const std::vector<std::string>& invariants) {
    if (traj.states.empty()) throw UsageError("empty trajectory");
    std::vector<double> out;
    for (const auto& name : invariants) {
        auto h = compile(sys.invariant(name), sys);
        double h0 = h.eval(traj.states.front()), worst = 0;
        for (const auto& x : traj.states) worst = std::max(worst, std::abs(h.eval(x) - h0));
        out.push_back(worst);
    }
    return out;
}

std::vector<double> kvm_curve(double c1, double c2) {
    const double q[4] = {0, c2, -c1, 1};
    std::vector<double> out(7, 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i + j] += q[i] * q[j];
    out[1] -= 4;
    return out;
}

MultiPoly bracket_polynomial(const VectorFieldSystem& sys, const MultiPoly& f, const MultiPoly& g) {
    if (!sys.poisson) throw UsageError("system '" + sys.name + "' has no Poisson matrix");
    const auto& j = *sys.poisson;
    const std::size_t m = sys.dimension();
    std::vector<MultiPoly> df, dg;
    for (const auto& v : sys.variables) {
        df.push_back(derivative(f, v));
        dg.push_back(derivative(g, v));
    }
    MultiPoly out(sys.symbols());
    for (std::size_t a = 0; a < m; ++a) {
        if (df[a].is_zero()) continue;
        for (std::size_t b = 0; b < m; ++b)
            if (!dg[b].is_zero() && !j(a, b).is_zero()) out += df[a] * j(a, b) * dg[b];
    }
    return out;
}

MultiPoly bracket_polynomial(const VectorFieldSystem& sys, const std::string& f, const std::string& g) {
    return bracket_polynomial(sys, sys.invariant(f), sys.invariant(g));
}

std::vector<BigRational> poisson_bracket(const VectorFieldSystem& sys, const std::string& f, const std::string& g,
                                         const std::vector<std::vector<BigRational>>& points) {
    MultiPoly b = bracket_polynomial(sys, f, g);
    auto syms = sys.symbols();
    std::vector<BigRational> out;
    for (const auto& pt : points) {
        if (pt.size() != syms.size())
            throw UsageError("point has " + std::to_string(pt.size()) + " coordinates, expected " +
                             std::to_string(syms.size()));
        std::map<std::string, BigRational> at;
        for (std::size_t i = 0; i < syms.size(); ++i) at[syms[i]] = pt[i];
        out.push_back(poly_eval(b, at));
    }
    return out;
}

namespace {

MultiPoly function_named(const VectorFieldSystem& sys, const std::string& name) {
    if (sys.has_invariant(name)) return sys.invariant(name);
    auto syms = sys.symbols();
    if (std::find(sys.variables.begin(), sys.variables.end(), name) != sys.variables.end())
        return MultiPoly::symbol(name, syms);
    throw UsageError("'" + name + "' is neither an invariant nor a variable of '" + sys.name + "'");
}

MultiPoly cyclic_sum(const VectorFieldSystem& sys, const MultiPoly& f, const MultiPoly& g, const MultiPoly& h) {
    return bracket_polynomial(sys, f, bracket_polynomial(sys, g, h)) +
           bracket_polynomial(sys, g, bracket_polynomial(sys, h, f)) +
           bracket_polynomial(sys, h, bracket_polynomial(sys, f, g));
}

}  // namespace

JacobiCheck jacobi_identity_check(const VectorFieldSystem& sys, std::vector<std::array<std::string, 3>> triples,
                                  int points, std::uint64_t seed) {
    if (!sys.poisson) throw UsageError("system '" + sys.name + "' has no Poisson matrix");
    if (points < 1) throw UsageError("at least one sample point is required");
    if (triples.empty()) {
        const auto& v = sys.variables;
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i + 1; j < v.size(); ++j)
                for (std::size_t k = j + 1; k < v.size(); ++k) triples.push_back({v[i], v[j], v[k]});
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
    auto syms = sys.symbols();
    std::vector<std::map<std::string, BigRational>> pts(points);
    for (auto& p : pts)
        for (const auto& s : syms) p[s] = make_rational(num(rng), den(rng));

    JacobiCheck out;
    out.points_checked = points;
    for (const auto& t : triples) {
        MultiPoly s = cyclic_sum(sys, function_named(sys, t[0]), function_named(sys, t[1]), function_named(sys, t[2]));
        ++out.triples_checked;
        for (const auto& p : pts) {
            BigRational v = poly_eval(s, p);
            if (v != 0) {
                out.pass = false;
                out.witness_triple = t;
                for (const auto& sym : syms) out.witness_point.push_back(p.at(sym));
                out.witness_value = v;
                return out;
            }
        }
    }
    return out;
}

bool jacobi_identity_exact(const VectorFieldSystem& sys) {
    if (!sys.poisson) throw UsageError("system '" + sys.name + "' has no Poisson matrix");
    if (sys.dimension() > 6) throw UsageError("exact Jacobi expansion is limited to 6 variables");
    auto syms = sys.symbols();
    const auto& v = sys.variables;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            for (std::size_t k = j + 1; k < v.size(); ++k)
                if (!cyclic_sum(sys, MultiPoly::symbol(v[i], syms), MultiPoly::symbol(v[j], syms),
                                MultiPoly::symbol(v[k], syms))
                         .is_zero())
                    return false;
    return true;
}

RigidBodyDims rigid_body_dims(int n) {
    if (n < 3) throw UsageError("rigid body dimension needs n >= 3");
    RigidBodyDims d;
    d.n = n;
    const long nn = n;
    d.dim_orbit = nn * (nn - 1) / 2 - nn / 2;
    d.genus_c = (nn - 1) * (nn - 2) / 2;
    if (d.dim_orbit % 2 != 0) throw Error("orbit dimension is odd");
    // Riemann-Hurwitz for the quotient by (z, h) -> (-z, -h).
    d.genus_c0 = d.genus_c - d.dim_orbit / 2;
    long c0 = n % 2 == 0 ? (nn - 2) * (nn - 2) / 4 : (nn - 1) * (nn - 3) / 4;
    if (c0 != d.genus_c0) throw Error("quotient genus disagrees with the parity formula");
    d.dim_prym = n % 2 == 0 ? nn * (nn - 2) / 4 : (nn - 1) * (nn - 1) / 4;
    if (d.dim_prym != d.genus_c - d.genus_c0) throw Error("Prym dimension disagrees with g(C) - g(C0)");
    return d;
}

}  // namespace laxkit
