#pragma once

#include "laxkit/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace laxkit {

using Exponent = std::vector<int>;

// Graded lexicographic order, largest term first.
struct GradedLexGreater {
    bool operator()(const Exponent& a, const Exponent& b) const;
};

// Sparse polynomial over the rationals in an ordered list of named symbols.
// The symbol order fixes the canonical printing order; arithmetic between
// polynomials over different symbol lists works on the union of the lists.
class MultiPoly {
public:
    using TermMap = std::map<Exponent, BigRational, GradedLexGreater>;

    MultiPoly() = default;
    explicit MultiPoly(std::vector<std::string> vars);
    MultiPoly(std::vector<std::string> vars, const BigRational& c);
    MultiPoly(const BigRational& c);  // NOLINT: constants convert implicitly
    MultiPoly(long c);                // NOLINT

    static MultiPoly symbol(const std::string& name);
    static MultiPoly symbol(const std::string& name, const std::vector<std::string>& vars);

    const std::vector<std::string>& variables() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    BigRational constant_term() const;
    int var_index(const std::string& name) const;

    void add_term(const Exponent& e, const BigRational& c);

    // Re-express over a symbol list containing every symbol in use.
    MultiPoly with_variables(const std::vector<std::string>& vars) const;
    std::set<std::string> used_symbols() const;
    // Drops symbols that do not occur.
    MultiPoly trimmed() const;

    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    MultiPoly& operator*=(const MultiPoly& o);
    MultiPoly& operator*=(const BigRational& c);
    MultiPoly& operator/=(const BigRational& c);
    MultiPoly operator-() const;

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(MultiPoly a, const BigRational& c) { return a *= c; }
    friend MultiPoly operator*(const BigRational& c, MultiPoly a) { return a *= c; }
    friend MultiPoly operator*(MultiPoly a, long c) { return a *= BigRational(c); }
    friend MultiPoly operator*(long c, MultiPoly a) { return a *= BigRational(c); }
    friend MultiPoly operator/(MultiPoly a, const BigRational& c) { return a /= c; }
    friend bool operator==(const MultiPoly& a, const MultiPoly& b);
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    int total_degree() const;
    int degree_in(const std::string& var) const;
    // Coefficient of var^k, as a polynomial over the same symbols.
    MultiPoly coefficient_of(const std::string& var, int k) const;

    std::string to_string() const;

private:
    void align_with(const MultiPoly& o);
    Exponent remap(const Exponent& e, const std::vector<int>& map, std::size_t n) const;

    std::vector<std::string> vars_;
    TermMap terms_;
};

MultiPoly pow(const MultiPoly& p, int n);
MultiPoly derivative(const MultiPoly& p, const std::string& var);
MultiPoly substitute(const MultiPoly& p, const std::map<std::string, MultiPoly>& values);
MultiPoly bind(const MultiPoly& p, const std::map<std::string, BigRational>& values);
BigRational poly_eval(const MultiPoly& p, const std::map<std::string, BigRational>& values);
double poly_eval_double(const MultiPoly& p, const std::map<std::string, double>& values);

// Integer coefficients with unit content and positive leading term.
MultiPoly primitive_integer_form(const MultiPoly& p);

// Splits p into a polynomial in `vars` whose coefficients are polynomials in
// the remaining symbols.  Keys are exponent vectors over `vars`.
std::map<Exponent, MultiPoly, GradedLexGreater> split_by(const MultiPoly& p,
                                                         const std::vector<std::string>& vars);

std::vector<std::string> merge_symbols(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b);

}  // namespace laxkit
