#pragma once

#include "laxkit/multipoly.hpp"
#include "laxkit/puiseux.hpp"
#include "laxkit/ratpoly.hpp"
#include "laxkit/ringmatrix.hpp"
#include "laxkit/sysdsl.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace laxkit {

// Weights l_i with f_i(a^l z) = a^{l_i+1} f_i(z) on the dominant part.
// Constants carry weight 0.
struct WeightVector {
    std::vector<BigRational> weights;
    std::vector<MultiPoly> dominant;  // per equation
    std::vector<MultiPoly> lower;     // per equation, weight < l_i + 1
};

BigRational monomial_weight(const Exponent& e, const std::vector<BigRational>& weights);
// Weight of a polynomial all of whose monomials share one weight; nullopt otherwise.
std::optional<BigRational> homogeneous_weight(const MultiPoly& p, const std::vector<std::string>& vars,
                                              const std::vector<BigRational>& weights);

std::vector<WeightVector> detect_weights(const VectorFieldSystem& sys);

// A root of a univariate polynomial, kept symbolic.
struct AlgebraicSymbol {
    std::string name;
    RatPoly minpoly;
};

// Rewrites p so every algebraic symbol appears below the degree of its polynomial.
MultiPoly reduce_algebraic(const MultiPoly& p, const std::vector<AlgebraicSymbol>& alg);

struct Balance {
    std::vector<BigRational> exponents;  // pole orders l_i: z_i ~ z_i^(0) t^{-l_i}
    std::vector<MultiPoly> leading;      // z^(0); rational unless `algebraic` is nonempty
    std::vector<AlgebraicSymbol> algebraic;
    std::string label;

    bool is_rational() const { return algebraic.empty(); }
    std::vector<BigRational> rational_leading() const;
};

struct IndicialResult {
    std::vector<Balance> balances;
    std::vector<std::string> unresolved;  // branches the exact solver could not finish
};

// Nonzero solutions of l_i z_i + f_i^dom(z) = 0.
IndicialResult indicial_solve(const VectorFieldSystem& sys, const WeightVector& w);

struct Resonance {
    BigRational value;  // eigenvalue of L in t-units
    int multiplicity = 1;
    std::vector<std::vector<BigRational>> kernel;  // basis of ker(L - value I)
};

struct KowalewskiData {
    PolyMatrix matrix;  // diag(l) + d f^dom/dz at z^(0), entries over the algebraic symbols
    bool rational = false;
    std::optional<RatPoly> charpoly;
    std::vector<std::pair<BigRational, int>> rational_eigenvalues;
    std::vector<std::complex<double>> other_eigenvalues;
    std::vector<Resonance> resonances;  // positive rational eigenvalues
    int ell = 1;                        // branching index
    // Spectrum of the matrix after t = tau^ell; eigenvalues scale by ell.
    std::vector<std::pair<BigRational, int>> tau_eigenvalues() const;
};

KowalewskiData kowalewski(const VectorFieldSystem& sys, const WeightVector& w, const Balance& bal);

struct LaurentFamily {
    std::vector<std::string> variables;
    std::vector<PuiseuxSeries> series;  // exponents over ell
    std::vector<std::string> parameters;
    std::vector<BigRational> parameter_levels;  // resonance in t-units
    Balance balance;
    int ell = 1;
    int levels = 0;  // coefficients computed per variable, in tau steps
    std::vector<std::string> notes;

    // Pole order of the first nonzero term of each variable.
    std::vector<BigRational> effective_exponents() const;
};

// Propagates to `order` t-units past the leading term.  Declared parameters
// of the system are used when their levels match the resonances.
LaurentFamily propagate(const VectorFieldSystem& sys, const WeightVector& w, const Balance& bal, int order);

// Smallest order at which every declared invariant's constant term is determined.
int constraint_order(const VectorFieldSystem& sys, const WeightVector& w);
int default_order(const KowalewskiData& k);

struct ParameterCount {
    int explicit_parameters = 0;
    int with_time_origin = 0;
};
ParameterCount count_free_parameters(const LaurentFamily& fam);

struct ConstraintVariety {
    std::vector<std::string> invariants;
    std::vector<std::string> value_symbols;
    std::vector<MultiPoly> relations;  // t^0 coefficient minus the value symbol
    std::vector<std::string> eliminated;
    std::vector<MultiPoly> reduced;
    // Primitive integer form of the single remaining relation, when there is one.
    std::optional<MultiPoly> curve;
};

// Value symbols default to b1, b2, ...
ConstraintVariety constraint_curve(const VectorFieldSystem& sys, const LaurentFamily& fam,
                                   const std::vector<std::string>& invariants,
                                   std::vector<std::string> value_symbols = {});

struct MorphismReport {
    bool chain_rule = true;
    std::vector<MultiPoly> residuals;  // per target component
    int failing_component = -1;
    bool integral_exponents = true;
    std::vector<PuiseuxSeries> image;  // morphism composed with the family, when given
    bool ok() const { return chain_rule && integral_exponents; }
};

// morphism[k] expresses the k-th target variable in the source variables.
MorphismReport restoring_morphism_check(const VectorFieldSystem& src, const VectorFieldSystem& dst,
                                        const std::vector<MultiPoly>& morphism,
                                        const LaurentFamily* family = nullptr);

}  // namespace laxkit
