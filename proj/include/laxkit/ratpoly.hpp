#pragma once

#include "laxkit/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace laxkit {

// Dense univariate polynomial over the rationals, coefficients lowest degree first.
class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<BigRational> coeffs);
    static RatPoly monomial(const BigRational& c, int degree);
    static RatPoly from_doubles(const std::vector<double>& coeffs);

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<BigRational>& coeffs() const { return c_; }
    BigRational coeff(int k) const;
    const BigRational& lead() const { return c_.back(); }

    BigRational operator()(const BigRational& x) const;
    double eval(double x) const;

    RatPoly& operator+=(const RatPoly& o);
    RatPoly& operator-=(const RatPoly& o);
    friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
    friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
    friend RatPoly operator*(RatPoly a, const BigRational& s);
    friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }

    std::string to_string(const std::string& var = "z") const;

private:
    void trim();
    std::vector<BigRational> c_;
};

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b);
RatPoly derivative(const RatPoly& p);
RatPoly monic(const RatPoly& p);
RatPoly gcd(RatPoly a, RatPoly b);
// Positive rational multiple with integer coefficients of unit content.
RatPoly primitive(const RatPoly& p);
// Square-free factors f_1, f_2, ... with p = c * prod f_i^i.
std::vector<RatPoly> squarefree_decomposition(const RatPoly& p);

// Number of distinct real roots in the half-open interval (lo, hi].
int sturm_count(const RatPoly& p, const BigRational& lo, const BigRational& hi);
BigRational cauchy_bound(const RatPoly& p);

struct RootInterval {
    BigRational lo, hi;  // isolating interval, lo == hi for an exact rational root
    int multiplicity;
};

// Isolates the distinct real roots of p in [lo, hi], each interval no wider than `width`.
std::vector<RootInterval> isolate_real_roots(const RatPoly& p, const BigRational& lo,
                                             const BigRational& hi, const BigRational& width);

struct RationalRoots {
    std::vector<std::pair<BigRational, int>> roots;  // value, multiplicity
    RatPoly cofactor;                                // part with no rational roots
};
RationalRoots rational_roots(const RatPoly& p);

struct RealRoot {
    double value;
    int multiplicity;
    double lo, hi;  // bracket
};

// Real roots of a polynomial with double coefficients (read exactly as rationals).
// Simple roots of each square-free factor are polished by bisection then Newton.
std::vector<RealRoot> real_roots(const std::vector<double>& coeffs, double lo, double hi,
                                 double tol = 1e-13);
std::vector<RealRoot> real_roots(const RatPoly& p, double lo, double hi, double tol = 1e-13);
// Every root repeated by its multiplicity.
std::vector<double> flatten_roots(const std::vector<RealRoot>& roots);

}  // namespace laxkit
