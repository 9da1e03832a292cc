#pragma once

#include "laxkit/multipoly.hpp"
#include "laxkit/ringmatrix.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace laxkit {

struct NamedPoly {
    std::string name;
    MultiPoly poly;
};

// Names a free parameter of a Laurent family: the coefficient of t^exponent
// in `variable` equals scale * name.
struct ParamDecl {
    std::string name;
    BigRational scale;
    std::string variable;
    BigRational exponent;
};

struct VectorFieldSystem {
    std::string name;
    std::vector<std::string> variables;
    std::vector<std::string> constants;
    std::vector<MultiPoly> equations;  // one right-hand side per variable
    std::vector<NamedPoly> invariants;
    std::optional<PolyMatrix> poisson;
    std::string hamiltonian;  // empty when not declared
    std::vector<ParamDecl> params;

    // variables followed by constants; every polynomial is expressed over it
    std::vector<std::string> symbols() const;
    std::size_t dimension() const { return variables.size(); }
    const MultiPoly& invariant(const std::string& name) const;
    bool has_invariant(const std::string& name) const;
};

VectorFieldSystem parse_system(std::string_view text);
VectorFieldSystem load_system(const std::string& path);

// One expression in the system grammar over the given symbols.
MultiPoly parse_polynomial(std::string_view text, const std::vector<std::string>& symbols);

// Canonical text form; parse_system(print_system(s)) reproduces s.
std::string print_system(const VectorFieldSystem& sys);

bool operator==(const VectorFieldSystem& a, const VectorFieldSystem& b);

// J * grad(H) for the named invariant.
std::vector<MultiPoly> hamiltonian_vector_field(const VectorFieldSystem& sys, const std::string& invariant);

// Replaces the listed constants by rationals and drops them from the system.
VectorFieldSystem bind_constants(const VectorFieldSystem& sys,
                                 const std::map<std::string, BigRational>& values);

std::vector<std::string> builtin_system_names();
VectorFieldSystem builtin_system(const std::string& name);
std::string builtin_system_source(const std::string& name);

}  // namespace laxkit
