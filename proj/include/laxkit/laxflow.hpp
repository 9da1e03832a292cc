#pragma once

#include "laxkit/multipoly.hpp"
#include "laxkit/ringmatrix.hpp"
#include "laxkit/sysdsl.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace laxkit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// A(h) = sum_{k=low}^{high} A_k h^k.
struct MatrixPencil {
    enum class Symmetry { none, symmetric, skew };

    int low = 0;
    std::vector<Mat> coeffs;  // A_low, ..., A_high
    Symmetry symmetry = Symmetry::none;

    MatrixPencil() = default;
    MatrixPencil(int low, std::vector<Mat> coeffs, Symmetry s = Symmetry::none);

    int high() const { return low + static_cast<int>(coeffs.size()) - 1; }
    Eigen::Index dim() const { return coeffs.empty() ? 0 : coeffs[0].rows(); }
    // Zero outside [low, high].
    Mat coeff(int k) const;
    Mat& at_power(int k) { return coeffs.at(k - low); }
    Mat at(double h) const;
    Eigen::MatrixXcd at(std::complex<double> h) const;
    double norm() const;
    // Throws on mismatched or non-square coefficients, or h = 0 with negative powers.
    void validate() const;
};

// Per-degree commutator [A, B]_k = sum_{i+j=k} [A_i, B_j] over the full degree range.
MatrixPencil commutator(const MatrixPencil& a, const MatrixPencil& b);

// P(z, h) = det(A(h) - z I), keyed by (power of z, power of h).
struct SpectralCurve {
    std::map<std::pair<int, int>, double> coeffs;
    int z_degree = 0;
    double eval(double z, double h) const;
    double coeff(int zpow, int hpow) const;
};

// Interpolates in h at nodes 1, -1, 2, -2, 1/2, -1/2, 3, ...
SpectralCurve pencil_charpoly(const MatrixPencil& p);
// Explicit interpolation nodes; duplicates are rejected.
SpectralCurve pencil_charpoly(const MatrixPencil& p, const std::vector<double>& nodes);

// Exact variant: P(z, h) * h^shift as a polynomial in the symbols "z" and "h".
struct ExactSpectralCurve {
    MultiPoly poly;
    int shift = 0;  // P = poly * h^-shift
};
ExactSpectralCurve pencil_charpoly_exact(int low, const std::vector<RationalMatrix>& coeffs);

struct Trajectory {
    std::vector<double> times;
    std::vector<MatrixPencil> states;
    double step = 0;
    int order = 4;
};

using PencilField = std::function<MatrixPencil(const MatrixPencil&)>;

struct IntegrateOptions {
    double blow_up = 1e8;   // abort when the pencil norm exceeds this
    int sample_every = 1;   // keep every n-th step (the last step is always kept)
};

// Fixed-step classical RK4 for dA/dt = rhs(A).  Coefficient degrees of rhs
// outside A's window must vanish.
Trajectory integrate_pencil(const MatrixPencil& p0, const PencilField& rhs, double t_end, double dt,
                            const IntegrateOptions& opt = {});
// dA/dt = [A, B(A)].
Trajectory integrate_lax(const MatrixPencil& p0, const PencilField& b, double t_end, double dt,
                         const IntegrateOptions& opt = {});

// max over samples, h, and 1 <= k <= k_max of |tr A(t,h)^k - tr A(0,h)^k|.
double isospectral_drift(const Trajectory& traj, const std::vector<double>& h_samples, int k_max);

// Lax pair given by a pencil and the rule producing B from the current A.
struct LaxSystem {
    std::string name;
    MatrixPencil initial;
    PencilField b;
};

// Periodic Toda in Flaschka form, a_j couples sites j and j+1 (a_N closes the ring
// through h^-1 and h).
LaxSystem toda_periodic(const std::vector<double>& a, const std::vector<double>& b);
// a_j = exp(x_j - x_{j+1})/2 with x_{N+1} = x_1, b_j = -y_j/2.
LaxSystem toda_periodic_from_phase(const std::vector<double>& x, const std::vector<double>& y);
// Open chain: N diagonal entries, N-1 couplings.
LaxSystem toda_open(const std::vector<double>& a, const std::vector<double>& b);
LaxSystem toda_open_from_phase(const std::vector<double>& x, const std::vector<double>& y);
// X in so(n), A = X + alpha h, B = lambda X + beta h with
// lambda_ij = (beta_i - beta_j)/(alpha_i - alpha_j).
LaxSystem euler_arnold(const Vec& alpha, const Vec& beta, const Mat& x);
// Rigid body M in so(n), inertia J: A = M + J^2 h, B = Omega + J h.
LaxSystem manakov(const Vec& inertia, const Mat& m);
// A = alpha h^2 - h x^y - y y^T, B = ad_beta ad_alpha^{-1}(y^x) + beta h.
LaxSystem rank_two_flow(const Vec& alpha, const Vec& beta, const Vec& x, const Vec& y);
// beta = alpha (point on the sphere).
LaxSystem neumann(const Vec& alpha, const Vec& x, const Vec& y);
// beta = 1/alpha (geodesics on the ellipsoid).
LaxSystem jacobi_geodesic(const Vec& alpha, const Vec& x, const Vec& y);

// Finite branch points of the Neumann/Jacobi curve: the alpha_i and the
// nonzero eigenvalues of (I - P_y)(alpha - x x^T)(I - P_y).  Together with
// the point at infinity there are 2n.
std::vector<double> rank_two_branch_points(const Vec& alpha, const Vec& x, const Vec& y);

std::vector<std::string> lax_builtin_names();
// Random but reproducible instance of a named Lax builtin of size n.
LaxSystem lax_builtin(const std::string& name, int n, std::mt19937_64& rng);

// Polynomial vector fields integrated directly in phase space.
struct PhaseTrajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    double step = 0;
};
PhaseTrajectory integrate_vector_field(const VectorFieldSystem& sys, const Vec& x0, double t_end, double dt,
                                       const IntegrateOptions& opt = {});
// max_t |H(x(t)) - H(x(0))| for each named invariant.
std::vector<double> invariant_drift(const VectorFieldSystem& sys, const PhaseTrajectory& traj,
                                    const std::vector<std::string>& invariants);

// Coefficients of (z^3 - c1 z^2 + c2 z)^2 - 4z, lowest power first.
std::vector<double> kvm_curve(double c1, double c2);

// grad F^T J grad G.
MultiPoly bracket_polynomial(const VectorFieldSystem& sys, const MultiPoly& f, const MultiPoly& g);
MultiPoly bracket_polynomial(const VectorFieldSystem& sys, const std::string& f, const std::string& g);
std::vector<BigRational> poisson_bracket(const VectorFieldSystem& sys, const std::string& f, const std::string& g,
                                         const std::vector<std::vector<BigRational>>& points);

struct JacobiCheck {
    bool pass = true;
    int triples_checked = 0;
    int points_checked = 0;
    std::optional<std::array<std::string, 3>> witness_triple;
    std::vector<BigRational> witness_point;
    BigRational witness_value = 0;
};

// Cyclic sum {F,{G,H}} + {G,{H,F}} + {H,{F,G}} at random rational points.
// Names may be invariants or variables; an empty list means all coordinate triples.
// Constants of the system are set to the sampled values as well.
JacobiCheck jacobi_identity_check(const VectorFieldSystem& sys,
                                  std::vector<std::array<std::string, 3>> triples, int points, std::uint64_t seed);
// Expands the cyclic sum for every coordinate triple; m <= 6.
bool jacobi_identity_exact(const VectorFieldSystem& sys);

struct RigidBodyDims {
    int n = 0;
    long dim_orbit = 0;
    long genus_c = 0;
    long genus_c0 = 0;
    long dim_prym = 0;
};
RigidBodyDims rigid_body_dims(int n);

}  // namespace laxkit
