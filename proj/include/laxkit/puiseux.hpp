#pragma once

#include "laxkit/multipoly.hpp"

#include <climits>
#include <map>
#include <string>
#include <vector>

namespace laxkit {

// Truncated series  sum_j c_j t^{(k0+j)/ell} + O(t^{trunc/ell})  with polynomial coefficients.
// Exponents are stored as numerators over the branching index ell.
class PuiseuxSeries {
public:
    PuiseuxSeries() = default;
    PuiseuxSeries(int ell, int k0, std::vector<MultiPoly> coeffs, int trunc);
    static PuiseuxSeries constant(const MultiPoly& c, int ell, int trunc);
    static PuiseuxSeries zero(int ell, int trunc);

    int ell() const { return ell_; }
    int lowest() const { return k0_; }  // meaningless for the zero series
    int trunc() const { return trunc_; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<MultiPoly>& coeffs() const { return c_; }
    // Coefficient of t^{e/ell}; zero outside the stored range.
    MultiPoly coeff(int e) const;

    // Same series with exponents over ell*factor.
    PuiseuxSeries refined(int factor) const;
    // Drops terms with exponent numerator >= cap.
    PuiseuxSeries capped(int cap) const;

    PuiseuxSeries& operator+=(const PuiseuxSeries& o);
    PuiseuxSeries& operator-=(const PuiseuxSeries& o);
    PuiseuxSeries operator-() const;
    friend PuiseuxSeries operator+(PuiseuxSeries a, const PuiseuxSeries& b) { return a += b; }
    friend PuiseuxSeries operator-(PuiseuxSeries a, const PuiseuxSeries& b) { return a -= b; }
    friend PuiseuxSeries operator*(const PuiseuxSeries& a, const MultiPoly& s);

    // Exponent -> coefficient string, exponents printed as reduced fractions.
    std::map<std::string, std::string> to_map() const;
    std::string to_string(const std::string& var = "t") const;

private:
    void normalize();
    int ell_ = 1;
    int k0_ = 0;
    std::vector<MultiPoly> c_;
    int trunc_ = INT_MAX;
};

// Cauchy product, valid through the smaller of the two implied truncations.
// Terms with exponent numerator >= cap are not computed.
PuiseuxSeries series_mul(const PuiseuxSeries& a, const PuiseuxSeries& b, int cap = INT_MAX);
PuiseuxSeries series_pow(const PuiseuxSeries& a, int n, int cap = INT_MAX);
// d/dt.
PuiseuxSeries series_derivative(const PuiseuxSeries& a);
// Substitutes series for the symbols in `vars`; the remaining symbols stay in the coefficients.
PuiseuxSeries series_compose(const MultiPoly& p, const std::vector<std::string>& vars,
                             const std::vector<PuiseuxSeries>& values, int cap = INT_MAX);

std::string exponent_string(int num, int ell);

}  // namespace laxkit
