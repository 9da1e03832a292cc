#pragma once

#include "laxkit/rational.hpp"
#include "laxkit/ratpoly.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace laxkit {

// N-periodic Jacobi matrix.  Entries are 1-based in the math and stored
// 0-based: a[j-1] = a_j couples sites j and j+1, b[j-1] = b_j.  By
// periodicity a_0 = a_N, and the continued fraction starts with a_0^2.
struct PeriodicJacobi {
    std::vector<double> a, b;

    int period() const { return static_cast<int>(b.size()); }
    double a0() const { return a.back(); }
    double alpha() const;  // product of all a_j
    // Periodic lookups with 1-based j (any integer).
    double a_at(long j) const;
    double b_at(long j) const;
    // Throws UsageError unless N >= 2, sizes match, and every a_j is nonzero and finite.
    void validate() const;
    // The N x N Floquet block A(h).
    Eigen::MatrixXcd floquet(std::complex<double> h) const;
};

// Coefficient vectors are lowest degree first.
double poly_eval(const std::vector<double>& c, double x);
std::complex<double> poly_eval(const std::vector<double>& c, std::complex<double> z);

struct SpectralData {
    int period = 0;
    double alpha = 0;
    std::vector<double> p;               // monic P(z) = z^N + ...
    std::vector<double> cofactor;        // Delta_{N,N}(z) = det(J_{N-1} - z), degree N-1
    std::vector<double> branch_points;   // 2N roots of P^2 - 4 alpha^2, with multiplicity
    std::vector<std::pair<double, double>> stable_bands;  // [xi_{2j-1}, xi_{2j}]
    std::vector<std::pair<double, double>> gaps;          // [xi_{2j}, xi_{2j+1}]
    std::vector<double> auxiliary;       // zeros of Delta_{N,N}, one per gap
    int genus = 0;

    // det(A(h) - zI) = (-1)^{N+1} (alpha (h + 1/h) - P(z)).
    std::complex<double> curve(std::complex<double> h, std::complex<double> z) const;
    // Both roots of alpha h^2 - P(z) h + alpha = 0, smaller modulus first.
    std::pair<std::complex<double>, std::complex<double>> sheets(std::complex<double> z) const;
};

// Throws NumericalError if the auxiliary spectrum fails to interlace with the gaps.
SpectralData spectral_data(const PeriodicJacobi& m);

// Bottom-up evaluation of a0^2/(z - b_1 - a_1^2/(z - b_2 - ...)) cut at `depth`
// levels.  Explicit sequences need b_1..b_depth and a_1..a_{depth-1}.
std::complex<double> gamma_fraction(const std::vector<double>& a, const std::vector<double>& b, double a0,
                                    std::complex<double> z, int depth);
std::complex<double> gamma_fraction(const PeriodicJacobi& m, std::complex<double> z, int depth);
// Grid evaluation, parallel over z.  The serial form is the reference.
std::vector<std::complex<double>> gamma_fraction_grid(const PeriodicJacobi& m,
                                                      const std::vector<std::complex<double>>& zs, int depth);
std::vector<std::complex<double>> gamma_fraction_grid_serial(const PeriodicJacobi& m,
                                                             const std::vector<std::complex<double>>& zs,
                                                             int depth);

// Convergents A_j/B_j for j = 0..k from the three-term recursion
// Y_j = (z - b_j) Y_{j-1} - a_{j-1}^2 Y_{j-2}, seeds B_{-1} = 0, B_0 = 1, A_0 = 0, A_1 = a0^2.
// B_j is monic of degree j and A_j has degree j-1.
struct PadeTable {
    std::vector<std::vector<double>> A, B;
};
PadeTable pade(const std::vector<double>& a, const std::vector<double>& b, double a0, int k);
PadeTable pade(const PeriodicJacobi& m, int k);

struct PadeTableExact {
    std::vector<RatPoly> A, B;
};
PadeTableExact pade_exact(const std::vector<BigRational>& a, const std::vector<BigRational>& b,
                          const BigRational& a0, int k);

// c_j = a0^2 <T^j e_1, e_1> for the semi-infinite operator with diagonal b and
// off-diagonal a.  Sequences must reach index count/2 + 1.
std::vector<double> moments(const std::vector<double>& a, const std::vector<double>& b, double a0, int count);
std::vector<double> moments(const PeriodicJacobi& m, int count);
std::vector<BigRational> moments_exact(const std::vector<BigRational>& a, const std::vector<BigRational>& b,
                                       const BigRational& a0, int count);

// Periodic continuation of the entries up to index len (1-based, inclusive).
std::vector<double> periodic_a(const PeriodicJacobi& m, int len);
std::vector<double> periodic_b(const PeriodicJacobi& m, int len);

struct Atom {
    double location = 0;
    double mass = 0;
};

struct StieltjesMeasure {
    SpectralData data;
    double a0 = 0;
    std::vector<Atom> candidates;  // every auxiliary point with its residue
    std::vector<Atom> atoms;       // candidates of nonzero mass
    // (-1)^{N+1}/(2 pi i) sqrt(P^2 - 4 alpha^2)/Delta_{N,N} on the bands, zero elsewhere.
    double density(double x) const;
    double total_mass() const;
    // Integral of g against the measure: atom sums plus band quadrature.
    double integrate(const std::function<double(double)>& g) const;
    std::complex<double> stieltjes(std::complex<double> z) const;
};

// Atoms from the residue formula with h on the |h| < 1 sheet and Lambda the
// interior determinant (1 when N = 2), continuous part on the stable bands.
StieltjesMeasure measure_decompose(const PeriodicJacobi& m);

std::vector<std::complex<double>> stieltjes_grid(const StieltjesMeasure& mu, const std::vector<std::complex<double>>& zs);
std::vector<std::complex<double>> stieltjes_grid_serial(const StieltjesMeasure& mu,
                                                        const std::vector<std::complex<double>>& zs);

struct OrthogonalityReport {
    double worst_off_diagonal = 0;
    double worst_norm_error = 0;            // relative, against a0^2 a_1^2 ... a_k^2
    std::vector<std::vector<double>> gram;  // integral of B_k B_l
};
OrthogonalityReport orthogonality_check(const StieltjesMeasure& mu, const PeriodicJacobi& m, int k_max);

// Toda flow in Flaschka form on the periodic chain:
// a_j' = a_j (b_{j+1} - b_j), b_j' = 2 (a_j^2 - a_{j-1}^2).
struct JacobiTodaSample {
    double t = 0;
    PeriodicJacobi m;
    std::vector<double> branch_points;
    std::vector<double> auxiliary;
};
struct JacobiTodaRun {
    std::vector<JacobiTodaSample> samples;
    double band_edge_drift = 0;  // max |xi_k(t) - xi_k(0)|
    double sum_b_drift = 0;
    std::vector<double> invariant_drift;  // I_k = tr(A(1)^k)/k, k = 1..N
    double min_abs_a = 0;
};
// Recomputes spectral data at every sample; interlacing failures and a_j
// reaching zero throw NumericalError, norm growth past 1e8 throws BlowUpError.
JacobiTodaRun toda_flow_jacobi(const PeriodicJacobi& m, double t_end, double dt, int sample_every = 1);

// Partial sum of 1/|a_j| over the given entries.  Periodic data always
// diverge, so this is only informative for user-supplied sequences.
double carleman_partial_sum(const std::vector<double>& a);

}  // namespace laxkit
