#include "doctest.h"

#include "laxkit/multipoly.hpp"
#include "laxkit/puiseux.hpp"
#include "laxkit/ratpoly.hpp"
#include "laxkit/ringmatrix.hpp"

#include <cmath>
#include <random>

using namespace laxkit;

namespace {

MultiPoly sym(const char* s) { return MultiPoly::symbol(s); }

MultiPoly random_poly(std::mt19937& rng, const std::vector<std::string>& vars) {
    std::uniform_int_distribution<int> coef(-9, 9), den(1, 5), ex(0, 3), count(0, 5);
    MultiPoly p(vars);
    int n = count(rng);
    for (int k = 0; k < n; ++k) {
        Exponent e(vars.size());
        for (auto& x : e) x = ex(rng);
        p.add_term(e, make_rational(coef(rng), den(rng)));
    }
    return p;
}

}  // namespace

TEST_CASE("rationals parse and print exactly") {
    CHECK(to_string(parse_rational("-3/8")) == "-3/8");
    CHECK(parse_rational("0.25") == make_rational(1, 4));
    CHECK(parse_rational("1e-3") == make_rational(1, 1000));
    CHECK(from_double(0.1) != make_rational(1, 10));
    CHECK(to_double(from_double(0.1)) == 0.1);
    CHECK(simplest_between(make_rational(1, 3) - make_rational(1, 100), make_rational(1, 3) + make_rational(1, 100)) ==
          make_rational(1, 3));
    CHECK(simplest_between(make_rational(-7, 2), make_rational(-13, 4)) == make_rational(-7, 2));
    CHECK(simplest_between(make_rational(-27, 8), make_rational(-13, 4)) == make_rational(-10, 3));
    CHECK(simplest_between(make_rational(-1, 2), make_rational(1, 2)) == 0);
}

TEST_CASE("poly_eval") {
    auto x = sym("x"), y = sym("y");
    CHECK(poly_eval(x + y, {{"x", 1}, {"y", 2}}) == 3);
    CHECK(poly_eval(MultiPoly(), {}) == 0);
    auto a = sym("alpha"), b = sym("beta");
    MultiPoly p = 64 * pow(b, 3) - 16 * pow(a, 3) * pow(b, 2);
    CHECK(poly_eval(p, {{"alpha", 1}, {"beta", 1}}) == 48);
    CHECK_THROWS_WITH_AS(poly_eval(x + y, {{"x", 1}}), "no value for symbol 'y'", Error);
}

TEST_CASE("canonical printing is graded lex in declared symbol order") {
    MultiPoly p(std::vector<std::string>{"alpha", "beta", "A"});
    auto a = MultiPoly::symbol("alpha", p.variables());
    auto b = MultiPoly::symbol("beta", p.variables());
    auto A = MultiPoly::symbol("A", p.variables());
    p = 144 * a * pow(b, 3) - make_rational(294, 5) * pow(A, 2) * pow(a, 3) * b + b - 2;
    CHECK(p.to_string() == "-294/5*alpha^3*beta*A^2 + 144*alpha*beta^3 + beta - 2");
    CHECK((a - a).to_string() == "0");
    CHECK((-a).to_string() == "-alpha");
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937 rng(7);
    std::vector<std::string> v1{"x", "y"}, v2{"y", "z"};
    for (int trial = 0; trial < 60; ++trial) {
        auto p = random_poly(rng, v1), q = random_poly(rng, v2), r = random_poly(rng, v1);
        CHECK((p * q) * r == p * (q * r));
        CHECK(p * (q + r) == p * q + p * r);
        CHECK((p + q) == (q + p));
        CHECK((p - p).is_zero());
        CHECK(p * q == q * p);
        // Evaluation is a ring homomorphism.
        std::map<std::string, BigRational> pt{{"x", make_rational(2, 3)}, {"y", -5}, {"z", make_rational(7, 2)}};
        CHECK(poly_eval(p * q + r, pt) == poly_eval(p, pt) * poly_eval(q, pt) + poly_eval(r, pt));
    }
}

TEST_CASE("substitution, derivative and splitting") {
    auto x = sym("x"), y = sym("y"), g = sym("g");
    MultiPoly p = 3 * g * pow(x, 2) + y;
    CHECK(derivative(p, "x") == 6 * g * x);
    CHECK(substitute(p, {{"g", x + 1}}) == 3 * pow(x, 3) + 3 * pow(x, 2) + y);
    CHECK(p.degree_in("x") == 2);
    CHECK(p.coefficient_of("g", 1) == 3 * pow(x, 2));
    auto parts = split_by(p, {"x", "y"});
    CHECK(parts.size() == 2);
    CHECK(parts.at(Exponent{2, 0}) == 3 * g);
    CHECK(primitive_integer_form(-make_rational(1, 2) * x + make_rational(3, 4)) == 2 * x - 3);
}

TEST_CASE("series multiplication") {
    PuiseuxSeries tinv(1, -1, {MultiPoly(1)}, 5), t(1, 1, {MultiPoly(1)}, 5);
    auto one = series_mul(tinv, t);
    CHECK(one.lowest() == 0);
    CHECK(one.coeffs().size() == 1);
    CHECK(one.coeff(0) == MultiPoly(1));
    auto a = sym("alpha");
    PuiseuxSeries s(2, -1, {a}, 10);
    auto sq = series_mul(s, s);
    CHECK(sq.lowest() == -2);
    CHECK(sq.ell() == 2);
    CHECK(sq.coeff(-2) == pow(a, 2));
    // Leading term of y2 squared.
    PuiseuxSeries y2(1, -2, {MultiPoly(make_rational(-3, 8))}, 3);
    CHECK(series_mul(y2, y2).coeff(-4) == MultiPoly(make_rational(9, 64)));
    CHECK_THROWS_AS(series_mul(s, y2), Error);
}

TEST_CASE("series multiplication agrees with naive convolution") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> c(-5, 5), lo(-3, 2);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<MultiPoly> ca(6), cb(5);
        for (auto& x : ca) x = MultiPoly(c(rng));
        for (auto& x : cb) x = MultiPoly(c(rng));
        int ka = lo(rng), kb = lo(rng);
        PuiseuxSeries a(1, ka, ca, ka + 6), b(1, kb, cb, kb + 5);
        auto p = series_mul(a, b);
        CHECK(p.trunc() == std::min(ka + 6 + kb, kb + 5 + ka));
        for (int e = ka + kb; e < p.trunc(); ++e) {
            MultiPoly s;
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 5; ++j)
                    if (ka + i + kb + j == e) s += ca[i] * cb[j];
            CHECK(p.coeff(e) == s);
        }
    }
}

TEST_CASE("capped composition keeps low terms exact") {
    // (t^-1 + 1 + t + ...)^3 is determined below t^0 only.
    PuiseuxSeries s(1, -1, {MultiPoly(1), MultiPoly(1), MultiPoly(1)}, 2);
    auto x = sym("x");
    auto full = series_compose(pow(x, 3), {"x"}, {s});
    CHECK(full.trunc() == 0);
    CHECK(full.coeff(-3) == MultiPoly(1));
    CHECK(full.coeff(-2) == MultiPoly(3));
    CHECK(full.coeff(-1) == MultiPoly(6));
    auto cap = series_compose(pow(x, 3), {"x"}, {s}, -1);
    CHECK(cap.trunc() == -1);
    for (int e = -3; e < -1; ++e) CHECK(cap.coeff(e) == full.coeff(e));
}

TEST_CASE("real roots") {
    auto r = flatten_roots(real_roots(std::vector<double>{-1, 0, 1}, -2, 2));
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(-1));
    CHECK(r[1] == doctest::Approx(1));
    r = flatten_roots(real_roots(std::vector<double>{0, -1, 0, 1}, -2, 2));
    REQUIRE(r.size() == 3);
    CHECK(r[1] == 0.0);
    // (z^2-2)^2 - 4 = z^4 - 4 z^2
    auto rr = real_roots(std::vector<double>{0, 0, -4, 0, 1}, -3, 3);
    REQUIRE(rr.size() == 3);
    CHECK(rr[1].multiplicity == 2);
    r = flatten_roots(rr);
    REQUIRE(r.size() == 4);
    CHECK(r[0] == doctest::Approx(-2));
    CHECK(r[1] == 0.0);
    CHECK(r[2] == 0.0);
    CHECK(r[3] == doctest::Approx(2));
    CHECK_THROWS_AS(real_roots(std::vector<double>{0, 0}, -1, 1), Error);
}

TEST_CASE("planted roots are recovered and counted") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> num(-40, 40), den(1, 7);
    for (int trial = 0; trial < 25; ++trial) {
        RatPoly p(std::vector<BigRational>{1});
        std::vector<BigRational> planted;
        for (int k = 0; k < 4; ++k) {
            BigRational q = make_rational(num(rng), den(rng));
            planted.push_back(q);
            p = p * RatPoly(std::vector<BigRational>{-q, 1});
        }
        // Irreducible quadratic factor with no real roots.
        p = p * RatPoly(std::vector<BigRational>{3, 0, 1});
        auto rr = rational_roots(p);
        int total = 0;
        for (auto& [v, m] : rr.roots) {
            total += m;
            CHECK(std::find(planted.begin(), planted.end(), v) != planted.end());
        }
        CHECK(total == 4);
        CHECK(rr.cofactor == RatPoly(std::vector<BigRational>{3, 0, 1}));
        auto real = real_roots(p, -100, 100);
        std::set<BigRational> distinct(planted.begin(), planted.end());
        CHECK(real.size() == distinct.size());
        CHECK(sturm_count(p, -100, 100) == static_cast<int>(distinct.size()));
        for (const auto& q : planted) {
            bool hit = false;
            for (const auto& x : real) hit = hit || std::abs(x.value - q.get_d()) < 1e-10;
            CHECK(hit);
        }
    }
}

TEST_CASE("eigenvalues") {
    auto ev = eigenvalues(std::vector<double>{1, 0, 0, 0, 1, 0, 0, 0, 1}, 3);
    for (auto z : ev) CHECK(std::abs(z - 1.0) < 1e-14);
    RationalMatrix d(3, 3);
    d(0, 0) = -1;
    d(1, 1) = 2;
    d(2, 2) = 5;
    auto sp = exact_eigenvalues(d);
    REQUIRE(sp.rational.size() == 3);
    CHECK(sp.rational[0].first == -1);
    CHECK(sp.rational[2].first == 5);
    CHECK_THROWS_AS(eigenvalues(std::vector<double>{1, 2, 3}, 2), Error);
    CHECK_THROWS_AS(eigenvalues(std::vector<double>{1, NAN, 0, 1}, 2), Error);
}

TEST_CASE("charpoly residual at numeric eigenvalues of 10x10 matrices") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> c(-4, 4);
    for (int trial = 0; trial < 5; ++trial) {
        RingMatrix<double> m(10, 10);
        for (std::size_t i = 0; i < 10; ++i)
            for (std::size_t j = 0; j < 10; ++j) m(i, j) = (c(rng) + (i == j ? 10.0 * (i + 1) : 0.0)) / 8.0;
        auto cp = charpoly(to_rational(m));
        for (auto z : eigenvalues(m)) {
            std::complex<double> v = 0;
            for (int k = cp.degree(); k >= 0; --k) v = v * z + cp.coeffs()[k].get_d();
            // Relative to the scale of the largest term.
            double scale = 0;
            for (int k = 0; k <= cp.degree(); ++k) scale = std::max(scale, std::abs(cp.coeffs()[k].get_d()) * std::pow(std::abs(z), k));
            CHECK(std::abs(v) / scale < 1e-8);
        }
    }
}

TEST_CASE("exact linear algebra") {
    RationalMatrix m(3, 3);
    int vals[9] = {2, 1, 0, 1, 3, 1, 0, 1, 4};
    for (int k = 0; k < 9; ++k) m(k / 3, k % 3) = vals[k];
    CHECK(determinant(m) == 18);
    CHECK(berkowitz_determinant(m) == 18);
    CHECK(inverse(m) * m == RationalMatrix::identity(3));
    RatPoly cp = charpoly(m);
    CHECK(cp.coeff(3) == 1);
    CHECK(cp.coeff(0) == -18);
    // Polynomial matrix determinant.
    auto z = sym("z");
    PolyMatrix pm(2, 2);
    pm(0, 0) = z;
    pm(0, 1) = MultiPoly(1);
    pm(1, 0) = MultiPoly(2);
    pm(1, 1) = z;
    CHECK(berkowitz_determinant(pm) == pow(z, 2) - 2);
    // Singular system with and without compatibility.
    RationalMatrix s(2, 2);
    s(0, 0) = 1;
    s(0, 1) = 2;
    s(1, 0) = 2;
    s(1, 1) = 4;
    auto ok = solve_poly_system(s, {z, 2 * z});
    CHECK(ok.consistent);
    CHECK_FALSE(ok.unique);
    auto bad = solve_poly_system(s, {z, z});
    CHECK_FALSE(bad.consistent);
    CHECK(bad.certificate.size() == 2);
    CHECK(nullspace(s).size() == 1);
    CHECK(left_nullspace(s).size() == 1);
}
