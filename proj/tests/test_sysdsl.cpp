#include "doctest.h"

#include "laxkit/error.hpp"
#include "laxkit/sysdsl.hpp"

#include <fstream>
#include <random>
#include <sstream>

using namespace laxkit;

namespace {

void check_parse_error(const std::string& text, int line, int col, const std::string& fragment) {
    CAPTURE(text);
    try {
        parse_system(text);
        FAIL("expected a parse error for:\n" << text);
    } catch (const ParseError& e) {
        CHECK(e.line() == line);
        CHECK(e.column() == col);
        CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
    }
}

}  // namespace

TEST_CASE("kvm builtin") {
    auto s = builtin_system("kvm");
    CHECK(s.dimension() == 5);
    CHECK(s.invariants.size() == 3);
    CHECK(s.equations[0].to_string() == "-x1*x2 + x1*x5");
    CHECK(s.hamiltonian == "H2");
}

TEST_CASE("harmonic oscillator from text") {
    auto s = parse_system("system osc\nvars z1 z2\neq z1 = z2\neq z2 = -z1\ninvariant H = (z1^2 + z2^2)/2\n");
    CHECK(s.name == "osc");
    CHECK(s.equations[1] == -MultiPoly::symbol("z1"));
    CHECK(s.invariant("H").to_string() == "1/2*z1^2 + 1/2*z2^2");
    CHECK_FALSE(s.poisson.has_value());
    CHECK_THROWS_AS(hamiltonian_vector_field(s, "H"), UsageError);
    CHECK_THROWS_AS(s.invariant("K"), UsageError);
}

TEST_CASE("non-skew Poisson matrix is rejected") {
    check_parse_error("system s\nvars z1 z2\neq z1 = 0\neq z2 = 0\npoisson 1 2 = z1\npoisson 2 1 = z1\n", 6, 1,
                      "not skew-symmetric");
    check_parse_error("system s\nvars z1 z2\neq z1 = 0\neq z2 = 0\npoisson 1 1 = z1\n", 5, 1, "diagonal");
}

TEST_CASE("skew completion from either triangle") {
    auto s = parse_system("system s\nvars a b\neq a = 0\neq b = 0\npoisson 2 1 = a*b\n");
    REQUIRE(s.poisson);
    CHECK((*s.poisson)(0, 1) == -(MultiPoly::symbol("a") * MultiPoly::symbol("b")));
    CHECK((*s.poisson)(1, 0) == MultiPoly::symbol("a") * MultiPoly::symbol("b"));
    auto t = parse_system("system s\nvars a b\neq a = 0\neq b = 0\npoisson 2 1 = a*b\npoisson 1 2 = -a*b\n");
    CHECK(*t.poisson == *s.poisson);
}

TEST_CASE("error positions") {
    check_parse_error("system s\nvars x y\neq x = y +* 2\n", 3, 11, "unexpected '*'");
    check_parse_error("system s\nvars x y\neq x = q\neq y = 1\n", 3, 8, "undeclared symbol 'q'");
    check_parse_error("system s\nvars x y\neq x = y\n", 2, 1, "no equation for variable 'y'");
    check_parse_error("system s\nvars x\neq x = x\neq x = 1\n", 4, 4, "second equation");
    check_parse_error("system s\nvars x\neq x = x^-1\n", 3, 10, "non-negative integer");
    check_parse_error("system s\nvars x\neq x = 1/x\n", 3, 10, "non-constant");
    check_parse_error("system s\nvars x\neq x = (x + 1\n", 3, 14, "expected ')'");
    check_parse_error("system s\nvars x\nequation x = 1\n", 3, 1, "unknown section 'equation'");
    check_parse_error("system s\nvars x\neq x = x $ 2\n", 3, 10, "unexpected character '$'");
    check_parse_error("system s\nvars x y\neq x = 1\neq y = 1\npoisson 1 3 = 1\n", 5, 11, "out of range");
    check_parse_error("system s\nvars x\neq x = 1\nhamiltonian H\n", 4, 13, "not a declared invariant");
    check_parse_error("vars x\neq x = 1\n", 1, 1, "missing 'system'");
    check_parse_error("system s\neq x = 1\n", 2, 1, "before 'vars'");
    // Columns count code points, not bytes.
    check_parse_error("system s\nvars x\neq x = x # é\ninvariant é = 1\n", 4, 11, "unexpected character");
}

TEST_CASE("param declarations") {
    auto s = builtin_system("henon-heiles");
    REQUIRE(s.params.size() == 3);
    CHECK(s.params[2].name == "gamma");
    CHECK(s.params[2].scale == -1);
    CHECK(s.params[2].variable == "y2");
    CHECK(s.params[2].exponent == 4);
    CHECK(s.params[0].exponent == make_rational(-1, 2));
    auto t = parse_system("system s\nvars x\neq x = 1\nparam a = -3/2*x @ -1/2\nparam b = 2 x @ 3\n");
    CHECK(t.params[0].scale == make_rational(-3, 2));
    CHECK(t.params[0].exponent == make_rational(-1, 2));
    CHECK(t.params[1].scale == 2);
    check_parse_error("system s\nvars x\neq x = 1\nparam x = x @ 1\n", 4, 7, "already in use");
}

TEST_CASE("every builtin Hamiltonian reproduces its equations") {
    for (const auto& name : builtin_system_names()) {
        CAPTURE(name);
        auto s = builtin_system(name);
        REQUIRE_FALSE(s.hamiltonian.empty());
        auto f = hamiltonian_vector_field(s, s.hamiltonian);
        for (std::size_t i = 0; i < s.dimension(); ++i) {
            CAPTURE(i);
            CHECK(f[i] == s.equations[i]);
        }
    }
}

TEST_CASE("Casimirs of the five-variable systems") {
    for (const char* name : {"hh5", "rdg5"}) {
        auto s = builtin_system(name);
        for (const auto& c : hamiltonian_vector_field(s, "F3")) CHECK(c.is_zero());
    }
    auto k = builtin_system("kvm");
    for (const auto& c : hamiltonian_vector_field(k, "H3")) CHECK(c.is_zero());
}

TEST_CASE("round trip of builtins") {
    for (const auto& name : builtin_system_names()) {
        CAPTURE(name);
        auto s = builtin_system(name);
        auto text = print_system(s);
        auto r = parse_system(text);
        CHECK(r == s);
        CHECK(print_system(r) == text);
    }
}

TEST_CASE("builtin sources match the shipped data files") {
    for (const auto& name : builtin_system_names()) {
        std::ifstream in(std::string(LAXKIT_DATA_DIR) + "/systems/" + name + ".ivf");
        REQUIRE(in);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str() == builtin_system_source(name));
    }
    CHECK_THROWS_AS(builtin_system("nope"), UsageError);
}

TEST_CASE("round trip of random systems") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> coef(-7, 7), den(1, 4), ex(0, 3), cnt(0, 4), coin(0, 1);
    std::vector<std::string> syms{"u", "v", "w", "k"};
    auto random_poly = [&] {
        MultiPoly p(syms);
        int n = cnt(rng);
        for (int t = 0; t < n; ++t) {
            Exponent e(4);
            for (auto& x : e) x = ex(rng);
            p.add_term(e, make_rational(coef(rng), den(rng)));
        }
        return p;
    };
    for (int trial = 0; trial < 40; ++trial) {
        VectorFieldSystem s;
        s.name = "r" + std::to_string(trial);
        s.variables = {"u", "v", "w"};
        s.constants = {"k"};
        for (int i = 0; i < 3; ++i) s.equations.push_back(random_poly());
        s.invariants.push_back({"I1", random_poly()});
        if (coin(rng)) {
            PolyMatrix j(3, 3);
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b) j(a, b) = MultiPoly(syms);
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = a + 1; b < 3; ++b) {
                    j(a, b) = random_poly();
                    j(b, a) = -j(a, b);
                }
            s.poisson = j;
        }
        auto r = parse_system(print_system(s));
        CHECK(r == s);
    }
}

TEST_CASE("binding constants") {
    auto s = bind_constants(builtin_system("henon-heiles"), {{"A", 1}});
    CHECK(s.constants.empty());
    CHECK(s.equations[2].to_string() == "-2*y1*y2 - y1");
    auto f = hamiltonian_vector_field(s, "H1");
    CHECK(f == s.equations);
    CHECK_THROWS_AS(bind_constants(s, {{"B", 1}}), UsageError);
}
