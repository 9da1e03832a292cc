#include "doctest.h"

#include "laxkit/error.hpp"
#include "laxkit/jacobispec.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace laxkit;
using cd = std::complex<double>;

namespace {

PeriodicJacobi random_jacobi(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ua(0.5, 1.5), ub(-1, 1);
    PeriodicJacobi m;
    for (int j = 0; j < n; ++j) {
        m.a.push_back(ua(rng));
        m.b.push_back(ub(rng));
    }
    return m;
}

// Band edges by sweeping h = e^{i theta}: the k-th eigenvalue of the Hermitian
// block sweeps the k-th band.
std::vector<double> swept_edges(const PeriodicJacobi& m, int samples) {
    const int n = m.period();
    std::vector<double> lo(n, 1e300), hi(n, -1e300);
    for (int s = 0; s <= samples; ++s) {
        const double theta = std::numbers::pi * s / samples;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.floquet(std::polar(1.0, theta)));
        for (int k = 0; k < n; ++k) {
            lo[k] = std::min(lo[k], es.eigenvalues()[k]);
            hi[k] = std::max(hi[k], es.eigenvalues()[k]);
        }
    }
    std::vector<double> out;
    for (int k = 0; k < n; ++k) {
        out.push_back(lo[k]);
        out.push_back(hi[k]);
    }
    return out;
}

// Twenty points at distance >= 1 from the real support.
std::vector<cd> far_grid(const SpectralData& d) {
    const double left = d.branch_points.front(), right = d.branch_points.back();
    const double c = 0.5 * (left + right), r = 0.5 * (right - left);
    std::vector<cd> zs;
    for (int k = 0; k < 10; ++k) zs.push_back(c + std::polar(r + 1.5, 2 * std::numbers::pi * (k + 0.5) / 10));
    for (int k = 0; k < 10; ++k) zs.push_back(cd(left + (right - left) * k / 9.0, k % 2 == 0 ? 1.0 : -1.0));
    return zs;
}

// Coefficients of A/B as a series in 1/z: A/B = sum_j c_j z^{-j-1}.
std::vector<BigRational> series_in_inverse_z(const RatPoly& a, const RatPoly& b, int count) {
    // With w = 1/z: A(z)/B(z) = w * Ahat(w)/Bhat(w), Ahat, Bhat reversed to deg B - 1 and deg B.
    const int n = b.degree();
    std::vector<BigRational> ahat(n, 0), bhat(n + 1, 0);
    for (int k = 0; k <= a.degree(); ++k) ahat[n - 1 - k] = a.coeff(k);
    for (int k = 0; k <= n; ++k) bhat[n - k] = b.coeff(k);
    std::vector<BigRational> c;
    for (int j = 0; j < count; ++j) {
        BigRational s = j < n ? ahat[j] : BigRational(0);
        for (int i = 1; i <= std::min(j, n); ++i) s -= bhat[i] * c[j - i];
        c.push_back(s / bhat[0]);
    }
    return c;
}

}  // namespace

TEST_CASE("closed gap at N = 2") {
    PeriodicJacobi m{{1, 1}, {0, 0}};
    auto d = spectral_data(m);
    CHECK(d.p == std::vector<double>{-2, 0, 1});
    CHECK(d.alpha == 1);
    CHECK(d.genus == 1);
    CHECK(d.branch_points == std::vector<double>{-2, 0, 0, 2});
    CHECK(d.auxiliary == std::vector<double>{0});
    REQUIRE(d.gaps.size() == 1);
    CHECK(d.gaps[0].first == d.gaps[0].second);

    auto mu = measure_decompose(m);
    REQUIRE(mu.candidates.size() == 1);
    CHECK(mu.candidates[0].mass == 0);
    CHECK(mu.atoms.empty());
    CHECK(mu.total_mass() == doctest::Approx(1).epsilon(1e-12));
    for (double x : {-1.9, -1.0, -0.01, 0.3, 1.7}) CHECK(mu.density(x) == doctest::Approx(std::sqrt(4 - x * x) / (2 * std::numbers::pi)));
    CHECK(mu.density(2.5) == 0);
}

TEST_CASE("open gap at N = 2 matches swept band edges") {
    PeriodicJacobi m{{1, 2}, {0, 0}};
    auto d = spectral_data(m);
    auto swept = swept_edges(m, 2000);
    for (int k = 0; k < 4; ++k) CHECK(d.branch_points[k] == doctest::Approx(swept[k]).epsilon(1e-9));
    CHECK(d.gaps[0].second - d.gaps[0].first > 0.5);
    CHECK(d.auxiliary[0] > d.gaps[0].first);
    CHECK(d.auxiliary[0] < d.gaps[0].second);
}

TEST_CASE("band edges and curve agree with the Floquet block") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int n = 2; n <= 5; ++n) {
        auto m = random_jacobi(n, rng);
        auto d = spectral_data(m);
        auto swept = swept_edges(m, 4000);
        for (int k = 0; k < 2 * n; ++k) CHECK(d.branch_points[k] == doctest::Approx(swept[k]).epsilon(1e-7));
        for (int trial = 0; trial < 100; ++trial) {
            const cd z(u(rng), u(rng)), h(u(rng), u(rng));
            const cd det = (m.floquet(h) - z * Eigen::MatrixXcd::Identity(n, n)).determinant();
            CHECK(std::abs(d.curve(h, z) - det) < 1e-10 * (1 + std::abs(det)));
            CHECK(std::abs(d.curve(1.0 / h, z) - d.curve(h, z)) < 1e-10 * (1 + std::abs(det)));
            auto [h1, h2] = d.sheets(z);
            CHECK(std::abs(h1) <= std::abs(h2));
            for (cd hh : {h1, h2}) {
                const cd on = (m.floquet(hh) - z * Eigen::MatrixXcd::Identity(n, n)).determinant();
                CHECK(std::abs(on) < 1e-9 * (1 + std::abs(hh) + 1 / std::abs(hh)) * std::pow(1 + std::abs(z), n));
            }
        }
    }
}

TEST_CASE("auxiliary spectrum interlaces for random matrices") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 5;
        auto m = random_jacobi(n, rng);
        if (trial % 3 == 0) m.a[trial % n] = -m.a[trial % n];
        auto d = spectral_data(m);
        REQUIRE(d.auxiliary.size() == static_cast<std::size_t>(n - 1));
        CHECK(std::is_sorted(d.branch_points.begin(), d.branch_points.end()));
        for (int j = 0; j + 1 < n; ++j) {
            CHECK(d.auxiliary[j] >= d.gaps[j].first - 1e-9);
            CHECK(d.auxiliary[j] <= d.gaps[j].second + 1e-9);
        }
        // Delta_{N,N} is the (N, N) cofactor of A(h) - zI.
        const double z = 0.37;
        Eigen::MatrixXcd block = (m.floquet(2.0) - z * Eigen::MatrixXcd::Identity(n, n)).topLeftCorner(n - 1, n - 1);
        CHECK(poly_eval(d.cofactor, z) == doctest::Approx(block.determinant().real()));
    }
}

TEST_CASE("periodic Jacobi validation") {
    CHECK_THROWS_AS(spectral_data(PeriodicJacobi{{1}, {0}}), UsageError);
    CHECK_THROWS_AS(spectral_data(PeriodicJacobi{{1, 0}, {0, 0}}), UsageError);
    CHECK_THROWS_AS(spectral_data(PeriodicJacobi{{1, 1, 1}, {0, 0}}), UsageError);
    PeriodicJacobi m{{1, 2, 3}, {4, 5, 6}};
    CHECK(m.a0() == 3);
    CHECK(m.alpha() == 6);
    CHECK(m.a_at(0) == 3);
    CHECK(m.a_at(4) == 1);
    CHECK(m.b_at(-1) == 5);
}

TEST_CASE("continued fraction values") {
    // Only a0 survives: a0^2 / z.
    CHECK(gamma_fraction({0, 0, 0}, {0, 0, 0, 0}, 1.5, cd(2, 1), 4) == 2.25 / cd(2, 1));
    CHECK(gamma_fraction({}, {0}, 1.5, cd(2, 1), 1) == 2.25 / cd(2, 1));
    // Constant a = 1, b = 0: phi(3) = (3 - sqrt 5)/2.
    PeriodicJacobi cheb{{1, 1}, {0, 0}};
    CHECK(std::abs(gamma_fraction(cheb, 3.0, 200) - (3 - std::sqrt(5.0)) / 2) < 1e-15);
    CHECK_THROWS_AS(gamma_fraction(cheb, 3.0, 0), UsageError);
    CHECK_THROWS_AS(gamma_fraction({1}, {0}, 1, 3.0, 2), UsageError);
    try {
        gamma_fraction({1}, {0.5, 0}, 1, 0.5, 1);
        FAIL("expected a vanishing denominator");
    } catch (const NumericalError& e) {
        CHECK(e.level() == 1);
    }
}

TEST_CASE("depth-k fraction equals the k-th convergent") {
    std::mt19937_64 rng(4);
    for (int n : {2, 3, 4}) {
        auto m = random_jacobi(n, rng);
        auto table = pade(m, 12);
        for (int k = 1; k <= 12; ++k) {
            CHECK(table.B[k].size() == static_cast<std::size_t>(k + 1));
            CHECK(table.A[k].size() == static_cast<std::size_t>(k));
            CHECK(table.B[k].back() == 1);
            for (cd z : {cd(3, 0.5), cd(-2, 1), cd(0.3, -2)}) {
                const cd conv = poly_eval(table.A[k], z) / poly_eval(table.B[k], z);
                CHECK(std::abs(gamma_fraction(m, z, k) - conv) < 1e-12);
            }
        }
    }
    auto t1 = pade({}, {0.5}, 2.0, 1);
    CHECK(t1.A[1] == std::vector<double>{4});
    CHECK(t1.B[1] == std::vector<double>{-0.5, 1});
}

TEST_CASE("convergent denominators are truncated characteristic polynomials") {
    std::mt19937_64 rng(10);
    auto m = random_jacobi(3, rng);
    auto table = pade(m, 5);
    for (int k = 1; k <= 5; ++k) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            j(i, i) = m.b_at(i + 1);
            if (i + 1 < k) j(i, i + 1) = j(i + 1, i) = m.a_at(i + 1);
        }
        for (double z : {-1.1, 0.4, 2.3}) {
            const double det = (z * Eigen::MatrixXd::Identity(k, k) - j).determinant();
            CHECK(poly_eval(table.B[k], z) == doctest::Approx(det).epsilon(1e-12));
        }
    }
}

TEST_CASE("Casoratian of the convergents") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> num(1, 9), den(1, 4), bn(-5, 5);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<BigRational> a, b;
        for (int j = 0; j < 8; ++j) {
            a.push_back(make_rational(num(rng), den(rng)));
            b.push_back(make_rational(bn(rng), den(rng)));
        }
        const BigRational a0 = make_rational(num(rng), den(rng));
        auto t = pade_exact(a, b, a0, 7);
        // A_{j-1} B_j - A_j B_{j-1} = -a0^2 a_1^2 ... a_{j-1}^2.
        BigRational expect = -a0 * a0;
        for (int j = 1; j <= 6; ++j) {
            if (j > 1) expect *= a[j - 2] * a[j - 2];
            CHECK(t.A[j - 1] * t.B[j] - t.A[j] * t.B[j - 1] == RatPoly({expect}));
        }
    }
}

TEST_CASE("moments") {
    std::mt19937_64 rng(17);
    auto m = random_jacobi(3, rng);
    auto c = moments(m, 12);
    CHECK(c[0] == m.a0() * m.a0());
    // Independent route: powers of a large truncation.
    const int size = 20;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(size, size);
    for (int i = 0; i < size; ++i) {
        t(i, i) = m.b_at(i + 1);
        if (i + 1 < size) t(i, i + 1) = t(i + 1, i) = m.a_at(i + 1);
    }
    Eigen::MatrixXd pw = Eigen::MatrixXd::Identity(size, size);
    for (int j = 0; j < 12; ++j) {
        CHECK(c[j] == doctest::Approx(m.a0() * m.a0() * pw(0, 0)).epsilon(1e-12));
        pw = pw * t;
    }
    PeriodicJacobi sym{{0.7, 1.3, 0.9}, {0, 0, 0}};
    auto cs = moments(sym, 11);
    for (int j = 1; j < 11; j += 2) CHECK(cs[j] == 0);
    CHECK_THROWS_AS(moments(m, 0), UsageError);
}

TEST_CASE("convergents match the first 2k moments exactly") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int> num(1, 9), den(1, 5), bn(-4, 4);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<BigRational> a, b;
        for (int j = 0; j < 6; ++j) {
            a.push_back(make_rational(num(rng), den(rng)));
            b.push_back(make_rational(bn(rng), den(rng)));
        }
        const BigRational a0 = make_rational(num(rng), den(rng));
        auto c = moments_exact(a, b, a0, 11);
        auto t = pade_exact(a, b, a0, 5);
        for (int k = 1; k <= 5; ++k) {
            auto s = series_in_inverse_z(t.A[k], t.B[k], 2 * k + 1);
            for (int j = 0; j < 2 * k; ++j) CHECK(s[j] == c[j]);
            // Agreement stops at 2k in general.
            if (k < 5) CHECK(s[2 * k] != c[2 * k]);
        }
    }
}

TEST_CASE("measure decomposition reproduces the continued fraction") {
    std::mt19937_64 rng(23);
    for (int n : {2, 3, 4}) {
        for (int trial = 0; trial < 4; ++trial) {
            auto m = random_jacobi(n, rng);
            auto mu = measure_decompose(m);
            CAPTURE(n);
            CHECK(std::abs(mu.total_mass() - m.a0() * m.a0()) < 1e-8);
            for (const auto& at : mu.atoms) {
                CHECK(at.mass > 0);
                bool in_gap = false;
                for (const auto& [lo, hi] : mu.data.gaps) in_gap = in_gap || (at.location >= lo && at.location <= hi);
                CHECK(in_gap);
            }
            for (const auto& [lo, hi] : mu.data.stable_bands)
                for (int s = 1; s < 20; ++s) CHECK(mu.density(lo + (hi - lo) * s / 20) >= 0);
            // The density is -Im phi(x + i0)/pi; the smoothed value is linear in eps, so extrapolate.
            const auto& band = mu.data.stable_bands[0];
            const double x = 0.5 * (band.first + band.second);
            auto smoothed = [&](double eps) { return -gamma_fraction(m, cd(x, eps), 40000).imag() / std::numbers::pi; };
            CHECK(std::abs(mu.density(x) - (2 * smoothed(2e-3) - smoothed(4e-3))) < 1e-3);
            const auto zs = far_grid(mu.data);
            const auto phi = gamma_fraction_grid(m, zs, 200);
            const auto st = stieltjes_grid(mu, zs);
            for (std::size_t i = 0; i < zs.size(); ++i) CHECK(std::abs(st[i] - phi[i]) < 1e-6);
        }
    }
}

TEST_CASE("atoms follow the residue dichotomy") {
    std::mt19937_64 rng(29);
    int with_atoms = 0, without = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto m = random_jacobi(2 + trial % 3, rng);
        auto mu = measure_decompose(m);
        const auto& d = mu.data;
        for (std::size_t j = 0; j < mu.candidates.size(); ++j) {
            const auto& c = mu.candidates[j];
            // A pole of phi on the physical sheet: the continued fraction blows up there.
            const double near = std::abs(gamma_fraction(m, cd(c.location, 1e-6), 400));
            if (c.mass > 0) {
                ++with_atoms;
                CHECK(near * 1e-6 == doctest::Approx(c.mass).epsilon(1e-3));
            } else {
                ++without;
                CHECK(near < 1e3);
            }
            double prod = 1;
            for (std::size_t l = 0; l < d.auxiliary.size(); ++l)
                if (l != j) prod *= c.location - d.auxiliary[l];
            const double p = poly_eval(d.p, c.location);
            const double branch = std::sqrt(std::max(0.0, p * p - 4 * d.alpha * d.alpha)) / std::abs(prod);
            if (c.mass > 0) CHECK(c.mass == doctest::Approx(branch).epsilon(1e-8));
        }
    }
    CHECK(with_atoms > 0);
    CHECK(without > 0);
}

TEST_CASE("orthogonality of the convergent denominators") {
    PeriodicJacobi cheb{{1, 1}, {0, 0}};
    auto r = orthogonality_check(measure_decompose(cheb), cheb, 8);
    CHECK(r.worst_off_diagonal < 1e-8);
    CHECK(r.worst_norm_error < 1e-8);
    CHECK(r.gram[0][0] == doctest::Approx(moments(cheb, 1)[0]));

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 3; ++trial) {
        auto m = random_jacobi(3, rng);
        auto rep = orthogonality_check(measure_decompose(m), m, 6);
        CHECK(rep.worst_off_diagonal < 1e-6);
        CHECK(rep.worst_norm_error < 1e-6);
    }
}

TEST_CASE("parallel grids match the serial reference") {
    std::mt19937_64 rng(37);
    auto m = random_jacobi(4, rng);
    auto mu = measure_decompose(m);
    auto zs = far_grid(mu.data);
    CHECK(gamma_fraction_grid(m, zs, 150) == gamma_fraction_grid_serial(m, zs, 150));
    CHECK(stieltjes_grid(mu, zs) == stieltjes_grid_serial(mu, zs));
}

TEST_CASE("Toda flow keeps the bands and moves the auxiliary spectrum") {
    std::mt19937_64 rng(41);
    auto m = random_jacobi(3, rng);
    auto run = toda_flow_jacobi(m, 1.0, 1e-3, 10);
    CHECK(run.samples.size() == 101);
    CHECK(run.band_edge_drift < 1e-7);
    CHECK(run.sum_b_drift < 1e-12);
    for (double d : run.invariant_drift) CHECK(d < 1e-9);
    CHECK(run.min_abs_a > 0);
    double moved = 0;
    for (std::size_t j = 0; j < 2; ++j)
        moved = std::max(moved, std::abs(run.samples.back().auxiliary[j] - run.samples.front().auxiliary[j]));
    CHECK(moved > 1e-3);
    // Matches the Lax form: b_1' = 2 (a_1^2 - a_N^2) at t = 0.
    auto step = toda_flow_jacobi(m, 1e-6, 1e-6);
    CHECK((step.samples.back().m.b[0] - m.b[0]) / 1e-6 ==
          doctest::Approx(2 * (m.a[0] * m.a[0] - m.a[2] * m.a[2])).epsilon(1e-5));
    CHECK_THROWS_AS(toda_flow_jacobi(m, 1.0, 0.0), UsageError);
    CHECK_THROWS_AS(toda_flow_jacobi(m, 1.0, 0.1, 0), UsageError);
}

TEST_CASE("Carleman partial sums") {
    CHECK(carleman_partial_sum({1, 2, 4}) == doctest::Approx(1.75));
    CHECK(std::isinf(carleman_partial_sum({1, 0})));
}
