#include "laxkit/painleve.hpp"

#include "laxkit/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace laxkit {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

// Exponents of the system variables only (constants have weight 0).
Exponent var_part(const Exponent& e, std::size_t m) { return Exponent(e.begin(), e.begin() + m); }

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

RatPoly univariate(const MultiPoly& p, const std::string& v) {
    std::vector<BigRational> c(p.degree_in(v) + 1);
    for (int k = 0; k <= p.degree_in(v); ++k) c[k] = p.coefficient_of(v, k).constant_term();
    return RatPoly(c);
}

MultiPoly from_univariate(const RatPoly& r, const std::string& v) {
    MultiPoly out;
    auto x = MultiPoly::symbol(v);
    MultiPoly xp(1);
    for (int k = 0; k <= r.degree(); ++k) {
        if (r.coeff(k) != 0) out += xp * r.coeff(k);
        xp *= x;
    }
    return out;
}

RatPoly squarefree_part(const RatPoly& p) {
    RatPoly g = gcd(p, derivative(p));
    if (g.degree() <= 0) return monic(p);
    return monic(divmod(p, g).first);
}

// Replaces v^g by a fresh symbol s; all exponents of v must be multiples of g.
MultiPoly power_rename(const MultiPoly& p, const std::string& v, int g, const std::string& s) {
    auto vars = p.variables();
    int k = p.var_index(v);
    if (k < 0) return p;
    vars[k] = s;
    MultiPoly out(vars);
    for (const auto& [e, c] : p.terms()) {
        Exponent f = e;
        f[k] /= g;
        out.add_term(f, c);
    }
    return out;
}

struct Solution {
    std::map<std::string, MultiPoly> values;
    std::vector<AlgebraicSymbol> alg;
};

// Exact solver for the indicial system: substitution, factor splitting,
// univariate rational roots and power renaming.
class IndicialSolver {
public:
    std::vector<std::string> notes;

    std::vector<Solution> solve(std::vector<MultiPoly> eqs, std::vector<std::string> unknowns) {
        std::vector<MultiPoly> live;
        for (auto& e : eqs) {
            MultiPoly t = e.trimmed();
            if (t.is_zero()) continue;
            if (t.is_constant()) return {};
            if (std::find(live.begin(), live.end(), t) == live.end()) live.push_back(t);
        }
        if (unknowns.empty()) return {Solution{}};
        if (live.empty()) {
            notes.push_back("positive-dimensional solution set with free " + join(unknowns));
            return {};
        }
        // Common monomial factor: split on v = 0.
        for (std::size_t i = 0; i < live.size(); ++i) {
            const auto& p = live[i];
            for (std::size_t k = 0; k < p.variables().size(); ++k) {
                int lo = INT_MAX;
                for (const auto& [e, c] : p.terms()) lo = std::min(lo, e[k]);
                if (lo == 0) continue;
                const std::string v = p.variables()[k];
                auto out = assign(live, unknowns, v, MultiPoly(0));
                MultiPoly q(p.variables());
                for (const auto& [e, c] : p.terms()) {
                    Exponent f = e;
                    f[k] -= lo;
                    q.add_term(f, c);
                }
                auto rest = live;
                rest[i] = q;
                auto more = solve(rest, unknowns);
                out.insert(out.end(), more.begin(), more.end());
                return out;
            }
        }
        // Linear in some unknown with a constant coefficient.
        int best = -1;
        std::string best_v;
        for (std::size_t i = 0; i < live.size(); ++i)
            for (const auto& v : unknowns) {
                if (live[i].degree_in(v) != 1) continue;
                if (!live[i].coefficient_of(v, 1).is_constant()) continue;
                if (best < 0 || live[i].size() < live[best].size()) {
                    best = static_cast<int>(i);
                    best_v = v;
                }
            }
        if (best >= 0) {
            const auto& p = live[best];
            BigRational c = p.coefficient_of(best_v, 1).constant_term();
            MultiPoly expr = -(p - p.coefficient_of(best_v, 1) * MultiPoly::symbol(best_v)) / c;
            return assign(live, unknowns, best_v, expr);
        }
        // Univariate equations.
        for (std::size_t i = 0; i < live.size(); ++i) {
            auto used = live[i].used_symbols();
            if (used.size() != 1) continue;
            const std::string v = *used.begin();
            RatPoly r = univariate(live[i], v);
            auto rr = rational_roots(r);
            std::vector<Solution> out;
            for (const auto& [root, mult] : rr.roots) {
                auto s = assign(live, unknowns, v, MultiPoly(root));
                out.insert(out.end(), s.begin(), s.end());
            }
            if (rr.cofactor.degree() > 0) {
                bool elsewhere = false;
                for (std::size_t j = 0; j < live.size(); ++j)
                    if (j != i && live[j].degree_in(v) > 0) elsewhere = true;
                if (elsewhere) {
                    notes.push_back("irrational roots of " + rr.cofactor.to_string(v) +
                                    " coupled to other equations; branch skipped");
                } else {
                    auto rest = live;
                    rest.erase(rest.begin() + i);
                    auto others = unknowns;
                    others.erase(std::find(others.begin(), others.end(), v));
                    for (auto s : solve(rest, others)) {
                        s.values[v] = MultiPoly::symbol(v);
                        s.alg.push_back({v, squarefree_part(rr.cofactor)});
                        out.push_back(std::move(s));
                    }
                }
            }
            return out;
        }
        // Every occurrence of v is a power of v^g.
        for (const auto& v : unknowns) {
            int g = 0;
            for (const auto& p : live) {
                int k = p.var_index(v);
                if (k < 0) continue;
                for (const auto& [e, c] : p.terms()) g = std::gcd(g, e[k]);
            }
            if (g < 2) continue;
            const std::string s = v + "^" + std::to_string(g);
            std::vector<MultiPoly> renamed;
            for (const auto& p : live) renamed.push_back(power_rename(p, v, g, s));
            auto unk = unknowns;
            *std::find(unk.begin(), unk.end(), v) = s;
            std::vector<Solution> out;
            for (auto sol : solve(renamed, unk)) {
                MultiPoly val = sol.values.at(s);
                sol.values.erase(s);
                if (!val.is_constant()) {
                    notes.push_back("power " + s + " has a non-rational value; branch skipped");
                    continue;
                }
                BigRational r = val.constant_term();
                if (r == 0) {
                    sol.values[v] = MultiPoly(0);
                    out.push_back(sol);
                    continue;
                }
                RatPoly x = RatPoly::monomial(1, g) - RatPoly(std::vector<BigRational>{r});
                auto rr = rational_roots(x);
                for (const auto& [root, mult] : rr.roots) {
                    Solution t = sol;
                    t.values[v] = MultiPoly(root);
                    out.push_back(t);
                }
                if (rr.cofactor.degree() > 0) {
                    Solution t = sol;
                    t.values[v] = MultiPoly::symbol(v);
                    t.alg.push_back({v, squarefree_part(rr.cofactor)});
                    out.push_back(t);
                }
            }
            return out;
        }
        std::vector<std::string> shown;
        for (const auto& p : live) shown.push_back(p.to_string());
        notes.push_back("not triangularizable by substitution: " + join(shown, "; "));
        return {};
    }

private:
    std::vector<Solution> assign(const std::vector<MultiPoly>& eqs, const std::vector<std::string>& unknowns,
                                 const std::string& v, const MultiPoly& expr) {
        std::vector<MultiPoly> next;
        for (const auto& p : eqs) next.push_back(substitute(p, {{v, expr}}));
        auto others = unknowns;
        others.erase(std::find(others.begin(), others.end(), v));
        auto subs = solve(next, others);
        for (auto& s : subs) {
            std::map<std::string, MultiPoly> vals;
            for (const auto& [k, x] : s.values) vals[k] = x;
            MultiPoly value = expr;
            // Back-substitute the unknowns solved later; algebraic symbols stay.
            std::map<std::string, MultiPoly> back;
            for (const auto& [k, x] : s.values) {
                bool is_alg = std::any_of(s.alg.begin(), s.alg.end(), [&](const AlgebraicSymbol& a) { return a.name == k; });
                if (!is_alg) back[k] = x;
            }
            value = reduce_algebraic(substitute(value, back), s.alg);
            s.values[v] = value;
        }
        return subs;
    }
};

std::string solution_key(const Solution& s, const std::vector<std::string>& vars) {
    std::string k;
    for (const auto& v : vars) k += s.values.at(v).to_string() + "|";
    for (const auto& a : s.alg) k += a.name + ":" + a.minpoly.to_string(a.name) + "|";
    return k;
}

RationalMatrix to_rational_matrix(const PolyMatrix& m) {
    RationalMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!m(i, j).is_constant()) throw Error("matrix entry is not rational");
            r(i, j) = m(i, j).constant_term();
        }
    return r;
}

BigInt lcm_den(const std::vector<BigRational>& qs) {
    BigInt l = 1;
    for (const auto& q : qs) l = lcm_of(l, q.get_den());
    return l;
}

std::vector<PuiseuxSeries> tau_series(const std::vector<std::vector<MultiPoly>>& c, const std::vector<int>& K,
                                      int known) {
    std::vector<PuiseuxSeries> out;
    for (std::size_t j = 0; j < c.size(); ++j) {
        std::vector<MultiPoly> cs(c[j].begin(), c[j].begin() + std::min<std::size_t>(known, c[j].size()));
        out.emplace_back(1, -K[j], cs, known - K[j]);
    }
    return out;
}

}  // namespace

BigRational monomial_weight(const Exponent& e, const std::vector<BigRational>& weights) {
    BigRational w = 0;
    for (std::size_t j = 0; j < weights.size() && j < e.size(); ++j) w += weights[j] * e[j];
    return w;
}

std::optional<BigRational> homogeneous_weight(const MultiPoly& p, const std::vector<std::string>& vars,
                                              const std::vector<BigRational>& weights) {
    std::vector<int> idx;
    for (const auto& v : vars) idx.push_back(p.var_index(v));
    std::optional<BigRational> w;
    for (const auto& [e, c] : p.terms()) {
        BigRational x = 0;
        for (std::size_t j = 0; j < vars.size(); ++j)
            if (idx[j] >= 0) x += weights[j] * e[idx[j]];
        if (w && *w != x) return std::nullopt;
        w = x;
    }
    return w;
}

std::vector<WeightVector> detect_weights(const VectorFieldSystem& sys) {
    const std::size_t m = sys.dimension();
    auto syms = sys.symbols();
    std::vector<std::vector<Exponent>> monos(m);
    double combos = 1;
    for (std::size_t i = 0; i < m; ++i) {
        std::set<Exponent> seen;
        MultiPoly eq = sys.equations[i].with_variables(syms);
        for (const auto& [e, c] : eq.terms()) seen.insert(var_part(e, m));
        monos[i].assign(seen.begin(), seen.end());
        if (monos[i].empty()) return {};
        combos *= static_cast<double>(monos[i].size());
    }
    if (combos > 2e6) throw UsageError("too many pivot choices for weight detection");

    std::set<std::vector<BigRational>> found;
    std::vector<std::size_t> pick(m, 0);
    while (true) {
        RationalMatrix a(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) a(i, j) = monos[i][pick[i]][j];
            a(i, i) -= 1;
        }
        if (determinant(a) != 0) {
            RationalMatrix inv = inverse(a);
            std::vector<BigRational> l(m, 0);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) l[i] += inv(i, j);
            bool ok = std::all_of(l.begin(), l.end(), [](const BigRational& x) { return x > 0; });
            for (std::size_t i = 0; ok && i < m; ++i)
                for (const auto& e : monos[i])
                    if (monomial_weight(e, l) > l[i] + 1) ok = false;
            if (ok) found.insert(l);
        }
        std::size_t k = 0;
        while (k < m && ++pick[k] == monos[k].size()) pick[k++] = 0;
        if (k == m) break;
    }

    std::vector<WeightVector> out;
    for (const auto& l : found) {
        WeightVector w;
        w.weights = l;
        for (std::size_t i = 0; i < m; ++i) {
            MultiPoly dom(syms), low(syms);
            MultiPoly eq = sys.equations[i].with_variables(syms);
            for (const auto& [e, c] : eq.terms()) {
                if (monomial_weight(var_part(e, m), l) == l[i] + 1)
                    dom.add_term(e, c);
                else
                    low.add_term(e, c);
            }
            w.dominant.push_back(dom);
            w.lower.push_back(low);
        }
        out.push_back(std::move(w));
    }
    return out;
}

MultiPoly reduce_algebraic(const MultiPoly& p, const std::vector<AlgebraicSymbol>& alg) {
    MultiPoly out = p;
    for (const auto& a : alg) {
        RatPoly mp = monic(a.minpoly);
        int d = mp.degree();
        if (d < 1) throw Error("algebraic symbol with constant polynomial");
        MultiPoly tail = -(from_univariate(mp, a.name) - pow(MultiPoly::symbol(a.name), d));
        while (out.degree_in(a.name) >= d) {
            int k = out.var_index(a.name);
            MultiPoly high(out.variables()), low(out.variables());
            for (const auto& [e, c] : out.terms()) {
                if (e[k] >= d) {
                    Exponent f = e;
                    f[k] -= d;
                    high.add_term(f, c);
                } else {
                    low.add_term(e, c);
                }
            }
            out = low + high * tail;
        }
    }
    return out;
}

std::vector<BigRational> Balance::rational_leading() const {
    if (!is_rational()) throw UsageError("balance '" + label + "' is not rational");
    std::vector<BigRational> out;
    for (const auto& z : leading) out.push_back(z.constant_term());
    return out;
}

IndicialResult indicial_solve(const VectorFieldSystem& sys, const WeightVector& w) {
    const std::size_t m = sys.dimension();
    std::vector<MultiPoly> eqs;
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& c : sys.constants)
            if (w.dominant[i].degree_in(c) > 0)
                throw UsageError("dominant part of the equation for " + sys.variables[i] + " involves constant " + c);
        eqs.push_back((w.weights[i] * MultiPoly::symbol(sys.variables[i]) + w.dominant[i]).trimmed());
    }
    IndicialSolver solver;
    auto sols = solver.solve(eqs, sys.variables);

    IndicialResult res;
    res.unresolved = solver.notes;
    std::set<std::string> seen;
    std::vector<Solution> uniq;
    for (auto& s : sols) {
        bool zero = std::all_of(sys.variables.begin(), sys.variables.end(),
                                [&](const std::string& v) { return s.values.at(v).is_zero(); });
        if (zero) continue;
        if (seen.insert(solution_key(s, sys.variables)).second) uniq.push_back(s);
    }
    std::stable_sort(uniq.begin(), uniq.end(), [&](const Solution& a, const Solution& b) {
        if (a.alg.empty() != b.alg.empty()) return a.alg.empty();
        return solution_key(a, sys.variables) < solution_key(b, sys.variables);
    });

    std::vector<Balance> rational, algebraic;
    for (const auto& s : uniq) {
        Balance b;
        b.exponents = w.weights;
        for (const auto& v : sys.variables) b.leading.push_back(s.values.at(v));
        b.algebraic = s.alg;
        (b.algebraic.empty() ? rational : algebraic).push_back(b);
    }
    // Sign pairs z, -z get the labels eps=+1 and eps=-1.
    std::vector<bool> labelled(rational.size(), false);
    int pairs = 0;
    for (std::size_t a = 0; a < rational.size(); ++a) {
        if (labelled[a]) continue;
        for (std::size_t b = a + 1; b < rational.size(); ++b) {
            if (labelled[b]) continue;
            bool neg = true;
            for (std::size_t i = 0; i < m; ++i)
                if (rational[a].leading[i] != -rational[b].leading[i]) neg = false;
            if (!neg) continue;
            ++pairs;
            BigRational first = 0;
            for (const auto& z : rational[a].leading)
                if (!z.is_zero()) {
                    first = z.constant_term();
                    break;
                }
            std::size_t plus = first > 0 ? a : b, minus = first > 0 ? b : a;
            rational[plus].label = "eps=+1";
            rational[minus].label = "eps=-1";
            labelled[a] = labelled[b] = true;
            break;
        }
    }
    if (pairs > 1) {
        int k = 0;
        std::vector<int> pair_id(rational.size(), 0);
        for (std::size_t a = 0; a < rational.size(); ++a)
            if (labelled[a] && rational[a].label == "eps=+1") pair_id[a] = ++k;
        for (std::size_t a = 0; a < rational.size(); ++a) {
            if (!labelled[a] || rational[a].label != "eps=-1") continue;
            for (std::size_t b = 0; b < rational.size(); ++b) {
                if (pair_id[b] == 0) continue;
                bool neg = true;
                for (std::size_t i = 0; i < m; ++i)
                    if (rational[a].leading[i] != -rational[b].leading[i]) neg = false;
                if (neg) pair_id[a] = pair_id[b];
            }
        }
        for (std::size_t a = 0; a < rational.size(); ++a)
            if (pair_id[a]) rational[a].label += " pair " + std::to_string(pair_id[a]);
    }
    int idx = 0;
    for (auto& b : rational)
        if (b.label.empty()) b.label = "balance " + std::to_string(++idx);
    for (auto& b : algebraic) {
        std::vector<std::string> parts;
        for (const auto& a : b.algebraic) parts.push_back(a.minpoly.to_string(a.name) + " = 0");
        b.label = "algebraic: " + join(parts);
    }
    res.balances = rational;
    res.balances.insert(res.balances.end(), algebraic.begin(), algebraic.end());
    return res;
}

std::vector<std::pair<BigRational, int>> KowalewskiData::tau_eigenvalues() const {
    std::vector<std::pair<BigRational, int>> out;
    for (const auto& [v, k] : rational_eigenvalues) out.emplace_back(v * ell, k);
    return out;
}

KowalewskiData kowalewski(const VectorFieldSystem& sys, const WeightVector& w, const Balance& bal) {
    const std::size_t m = sys.dimension();
    std::map<std::string, MultiPoly> at;
    for (std::size_t i = 0; i < m; ++i) at[sys.variables[i]] = bal.leading[i];
    KowalewskiData k;
    k.matrix = PolyMatrix(m, m);
    bool rational = true;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            MultiPoly e = reduce_algebraic(substitute(derivative(w.dominant[i], sys.variables[j]), at), bal.algebraic);
            if (i == j) e += MultiPoly(w.weights[i]);
            e = e.trimmed();
            rational = rational && e.is_constant();
            k.matrix(i, j) = e;
        }
    k.rational = rational;
    if (rational) {
        RationalMatrix l = to_rational_matrix(k.matrix);
        auto sp = exact_eigenvalues(l);
        k.charpoly = sp.charpoly;
        k.rational_eigenvalues = sp.rational;
        k.other_eigenvalues = sp.other;
    } else {
        // det(lambda I - L) over the extension, reduced; rational if the symbols cancel.
        const std::string lam = "lambda#";
        PolyMatrix a(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) a(i, j) = (i == j ? MultiPoly::symbol(lam) : MultiPoly(0)) - k.matrix(i, j);
        MultiPoly det = reduce_algebraic(berkowitz_determinant(a), bal.algebraic).trimmed();
        auto used = det.used_symbols();
        used.erase(lam);
        if (used.empty()) {
            RatPoly cp = univariate(det, lam);
            k.charpoly = cp;
            auto rr = rational_roots(cp);
            k.rational_eigenvalues = rr.roots;
            if (rr.cofactor.degree() > 0) {
                RatPoly c = monic(rr.cofactor);
                int d = c.degree();
                std::vector<double> comp(d * d, 0.0);
                for (int i = 1; i < d; ++i) comp[i * d + (i - 1)] = 1.0;
                for (int i = 0; i < d; ++i) comp[i * d + (d - 1)] = -c.coeffs()[i].get_d();
                k.other_eigenvalues = eigenvalues(comp, d);
            }
        }
    }
    std::vector<BigRational> dens = w.weights;
    for (const auto& [v, mult] : k.rational_eigenvalues) {
        if (v <= 0) continue;
        dens.push_back(v);
        Resonance r;
        r.value = v;
        r.multiplicity = mult;
        if (rational) {
            RationalMatrix l = to_rational_matrix(k.matrix);
            for (std::size_t i = 0; i < m; ++i) l(i, i) -= v;
            r.kernel = nullspace(l);
        }
        k.resonances.push_back(r);
    }
    k.ell = static_cast<int>(lcm_den(dens).get_si());
    return k;
}

std::vector<BigRational> LaurentFamily::effective_exponents() const {
    std::vector<BigRational> out;
    for (const auto& s : series) out.push_back(s.is_zero() ? BigRational(0) : make_rational(-s.lowest(), ell));
    return out;
}

namespace {

LaurentFamily propagate_impl(const VectorFieldSystem& sys, const WeightVector& w, const Balance& bal, int order,
                             const KowalewskiData& kd, bool use_decls) {
    const std::size_t m = sys.dimension();
    const int ell = kd.ell;
    std::vector<int> K(m);
    for (std::size_t i = 0; i < m; ++i) {
        BigRational x = w.weights[i] * ell;
        if (!is_integer(x)) throw Error("weight not integral after branching");
        K[i] = static_cast<int>(x.get_num().get_si());
    }
    RationalMatrix lt = to_rational_matrix(kd.matrix);
    RationalMatrix ltau(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) ltau(i, j) = lt(i, j) * ell;

    std::set<int> resonant;
    for (const auto& r : kd.resonances) resonant.insert(static_cast<int>(BigRational(r.value * ell).get_num().get_si()));

    std::map<int, std::vector<const ParamDecl*>> decl_at;
    if (use_decls)
        for (const auto& d : sys.params) {
            auto it = std::find(sys.variables.begin(), sys.variables.end(), d.variable);
            BigRational lvl = (d.exponent + w.weights[it - sys.variables.begin()]) * ell;
            if (!is_integer(lvl) || !resonant.count(static_cast<int>(lvl.get_num().get_si())))
                throw UsageError("parameter '" + d.name + "' does not sit at a resonance of this balance");
            decl_at[static_cast<int>(lvl.get_num().get_si())].push_back(&d);
        }
    std::set<std::string> taken(sys.variables.begin(), sys.variables.end());
    taken.insert(sys.constants.begin(), sys.constants.end());
    for (const auto& d : sys.params) taken.insert(d.name);
    int fresh = 0;
    auto fresh_name = [&] {
        std::string n;
        do n = "r" + std::to_string(++fresh);
        while (taken.count(n));
        taken.insert(n);
        return n;
    };

    LaurentFamily fam;
    fam.variables = sys.variables;
    fam.balance = bal;
    fam.ell = ell;
    const int levels = ell * order;
    fam.levels = levels;

    std::vector<std::vector<MultiPoly>> c(m);
    auto lead = bal.rational_leading();
    for (std::size_t i = 0; i < m; ++i) c[i].push_back(MultiPoly(lead[i]));

    for (int n = 1; n <= levels; ++n) {
        // Known coefficients below n; the unknown one is taken as zero.
        auto cur = c;
        for (auto& v : cur) v.push_back(MultiPoly(0));
        auto ser = tau_series(cur, K, n + 1);
        std::vector<MultiPoly> rhs(m);
        for (std::size_t i = 0; i < m; ++i) {
            int e = n - K[i] - ell;
            auto f = series_compose(sys.equations[i], sys.variables, ser, e + 1);
            rhs[i] = f.coeff(e) * BigRational(ell);
        }
        RationalMatrix a(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) a(i, j) = (i == j ? BigRational(n) : BigRational(0)) - ltau(i, j);
        PolySolveResult sol = solve_poly_system(a, rhs);
        if (!sol.consistent) {
            std::ostringstream os;
            os << "compatibility condition fails at t-level " << to_string(make_rational(n, ell)) << ": certificate (";
            for (std::size_t j = 0; j < sol.certificate.size(); ++j) os << (j ? ", " : "") << to_string(sol.certificate[j]);
            os << ") gives " << sol.defect.to_string() << " != 0";
            throw ObstructionError(n, os.str());
        }
        if (!sol.unique) {
            if (!resonant.count(n)) throw Error("singular step at a non-resonant level");
            std::vector<std::vector<BigRational>> rows;
            std::vector<MultiPoly> extra;
            for (const ParamDecl* d : decl_at[n]) {
                std::vector<BigRational> row(m, 0);
                row[std::find(sys.variables.begin(), sys.variables.end(), d->variable) - sys.variables.begin()] = 1;
                rows.push_back(row);
                extra.push_back(MultiPoly::symbol(d->name) * d->scale);
                fam.parameters.push_back(d->name);
                fam.parameter_levels.push_back(make_rational(n, ell));
            }
            auto build = [&] {
                RationalMatrix b(m + rows.size(), m);
                std::vector<MultiPoly> r = rhs;
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < m; ++j) b(i, j) = a(i, j);
                for (std::size_t k = 0; k < rows.size(); ++k) {
                    for (std::size_t j = 0; j < m; ++j) b(m + k, j) = rows[k][j];
                    r.push_back(extra[k]);
                }
                return solve_poly_system(b, r);
            };
            sol = build();
            if (!sol.consistent)
                throw UsageError("declared parameters at t-level " + to_string(make_rational(n, ell)) +
                                 " are not free directions");
            if (!sol.unique) {
                for (auto col : sol.free_columns) {
                    std::vector<BigRational> row(m, 0);
                    row[col] = 1;
                    rows.push_back(row);
                    std::string name = fresh_name();
                    extra.push_back(MultiPoly::symbol(name));
                    fam.parameters.push_back(name);
                    fam.parameter_levels.push_back(make_rational(n, ell));
                }
                sol = build();
            }
            if (!sol.consistent || !sol.unique) throw Error("failed to fix the resonant directions");
        } else {
            if (!decl_at[n].empty()) throw UsageError("parameter declared at a non-resonant level");
        }
        for (std::size_t i = 0; i < m; ++i) c[i].push_back(sol.x[i]);
    }

    // Residual check: d/dtau z - ell tau^{ell-1} f(z) vanishes through the last level.
    auto ser = tau_series(c, K, levels + 1);
    for (std::size_t i = 0; i < m; ++i) {
        auto f = series_compose(sys.equations[i], sys.variables, ser, levels - K[i] - ell + 1);
        for (int n = 0; n <= levels; ++n) {
            MultiPoly r = c[i][n] * BigRational(n - K[i]) - f.coeff(n - K[i] - ell) * BigRational(ell);
            if (!r.is_zero())
                throw Error("residual check failed for " + sys.variables[i] + " at tau-level " + std::to_string(n));
        }
    }

    std::vector<std::string> ring = fam.parameters;
    ring.insert(ring.end(), sys.constants.begin(), sys.constants.end());
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<MultiPoly> cs;
        for (const auto& x : c[i]) cs.push_back(x.trimmed().with_variables(ring));
        fam.series.emplace_back(ell, -K[i], cs, levels + 1 - K[i]);
    }
    return fam;
}

}  // namespace

LaurentFamily propagate(const VectorFieldSystem& sys, const WeightVector& w, const Balance& bal, int order) {
    if (order < 1) throw UsageError("order must be at least 1");
    if (!bal.is_rational()) throw UsageError("propagation needs a rational balance; '" + bal.label + "' is algebraic");
    KowalewskiData kd = kowalewski(sys, w, bal);
    BigRational top = 0;
    for (const auto& r : kd.resonances) top = std::max(top, r.value);
    if (BigRational(order) < top)
        throw UsageError("order " + std::to_string(order) + " is below the largest resonance " + to_string(top));
    if (sys.params.empty()) return propagate_impl(sys, w, bal, order, kd, false);
    try {
        return propagate_impl(sys, w, bal, order, kd, true);
    } catch (const UsageError& e) {
        LaurentFamily fam = propagate_impl(sys, w, bal, order, kd, false);
        fam.notes.push_back(std::string("declared parameters not used: ") + e.what());
        return fam;
    }
}

int constraint_order(const VectorFieldSystem& sys, const WeightVector& w) {
    BigRational top = 0;
    auto syms = sys.symbols();
    for (const auto& inv : sys.invariants) {
        MultiPoly h = inv.poly.with_variables(syms);
        for (const auto& [e, c] : h.terms())
            top = std::max(top, monomial_weight(var_part(e, sys.dimension()), w.weights));
    }
    return static_cast<int>(floor_of(top).get_si()) + 1;
}

int default_order(const KowalewskiData& k) {
    BigRational top = 0;
    for (const auto& r : k.resonances) top = std::max(top, r.value);
    BigInt c = floor_of(top);
    if (BigRational(c) != top) c += 1;
    return static_cast<int>(c.get_si()) + 4;
}

ParameterCount count_free_parameters(const LaurentFamily& fam) {
    ParameterCount p;
    p.explicit_parameters = static_cast<int>(fam.parameters.size());
    p.with_time_origin = p.explicit_parameters + 1;
    return p;
}

ConstraintVariety constraint_curve(const VectorFieldSystem& sys, const LaurentFamily& fam,
                                   const std::vector<std::string>& invariants, std::vector<std::string> value_symbols) {
    if (value_symbols.empty())
        for (std::size_t i = 0; i < invariants.size(); ++i) value_symbols.push_back("b" + std::to_string(i + 1));
    if (value_symbols.size() != invariants.size()) throw UsageError("one value symbol per invariant is required");
    for (const auto& v : value_symbols)
        if (contains(fam.parameters, v) || contains(sys.constants, v) || contains(sys.variables, v))
            throw UsageError("value symbol '" + v + "' clashes with another symbol");

    ConstraintVariety cv;
    cv.invariants = invariants;
    cv.value_symbols = value_symbols;
    std::vector<std::string> ring = fam.parameters;
    ring.insert(ring.end(), sys.constants.begin(), sys.constants.end());
    ring.insert(ring.end(), value_symbols.begin(), value_symbols.end());
    for (std::size_t k = 0; k < invariants.size(); ++k) {
        const MultiPoly& h = sys.invariant(invariants[k]);
        auto s = series_compose(h, sys.variables, fam.series, 1);
        if (s.trunc() < 1)
            throw UsageError("series order too low to determine the constant term of " + invariants[k]);
        if (!s.is_zero())
            for (int e = s.lowest(); e < 0; ++e)
                if (!s.coeff(e).is_zero())
                    throw Error("invariant " + invariants[k] + " has a nonvanishing polar term at t^" +
                                exponent_string(e, fam.ell) + ": " + s.coeff(e).to_string());
        MultiPoly rel = s.coeff(0) - MultiPoly::symbol(value_symbols[k]);
        cv.relations.push_back(rel.with_variables(ring));
    }

    // Linear elimination, highest resonance first.
    std::vector<std::size_t> order(fam.parameters.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fam.parameter_levels[a] > fam.parameter_levels[b]; });
    std::vector<MultiPoly> rels = cv.relations;
    bool progress = true;
    while (rels.size() >= 2 && progress) {
        progress = false;
        for (std::size_t oi : order) {
            const std::string& p = fam.parameters[oi];
            if (contains(cv.eliminated, p)) continue;
            int pick = -1;
            auto better = [&](const MultiPoly& a, const MultiPoly& b) {
                if (a.is_constant() != b.is_constant()) return a.is_constant();
                if (a.size() != b.size()) return a.size() < b.size();
                return a.total_degree() < b.total_degree();
            };
            for (std::size_t r = 0; r < rels.size(); ++r) {
                if (rels[r].degree_in(p) != 1) continue;
                if (pick < 0 || better(rels[r].coefficient_of(p, 1), rels[pick].coefficient_of(p, 1)))
                    pick = static_cast<int>(r);
            }
            if (pick < 0) continue;
            MultiPoly cc = rels[pick].coefficient_of(p, 1);
            MultiPoly bb = rels[pick].coefficient_of(p, 0);
            std::vector<MultiPoly> next;
            for (std::size_t r = 0; r < rels.size(); ++r) {
                if (static_cast<int>(r) == pick) continue;
                int d = rels[r].degree_in(p);
                if (d <= 0) {
                    next.push_back(rels[r]);
                    continue;
                }
                MultiPoly acc(ring);
                for (int k = 0; k <= d; ++k) {
                    MultiPoly ck = rels[r].coefficient_of(p, k);
                    if (ck.is_zero()) continue;
                    acc += ck * pow(-bb, k) * pow(cc, d - k);
                }
                next.push_back(acc.with_variables(ring));
            }
            rels = next;
            cv.eliminated.push_back(p);
            progress = true;
            break;
        }
    }
    cv.reduced = rels;
    if (rels.size() == 1) cv.curve = primitive_integer_form(rels[0]).trimmed();
    return cv;
}

MorphismReport restoring_morphism_check(const VectorFieldSystem& src, const VectorFieldSystem& dst,
                                        const std::vector<MultiPoly>& morphism, const LaurentFamily* family) {
    if (morphism.size() != dst.dimension())
        throw UsageError("morphism has " + std::to_string(morphism.size()) + " components, target has " +
                         std::to_string(dst.dimension()) + " variables");
    MorphismReport rep;
    std::map<std::string, MultiPoly> image;
    for (std::size_t k = 0; k < dst.dimension(); ++k) image[dst.variables[k]] = morphism[k];
    for (std::size_t k = 0; k < dst.dimension(); ++k) {
        MultiPoly lhs;
        for (std::size_t j = 0; j < src.dimension(); ++j) {
            MultiPoly d = derivative(morphism[k], src.variables[j]);
            if (!d.is_zero()) lhs += d * src.equations[j];
        }
        MultiPoly rhs = substitute(dst.equations[k], image);
        MultiPoly r = (lhs - rhs).trimmed();
        rep.residuals.push_back(r);
        if (!r.is_zero() && rep.chain_rule) {
            rep.chain_rule = false;
            rep.failing_component = static_cast<int>(k);
        }
    }
    if (family) {
        for (const auto& phi : morphism) {
            auto s = series_compose(phi, family->variables, family->series);
            if (!s.is_zero())
                for (int e = s.lowest(); e < s.lowest() + static_cast<int>(s.coeffs().size()); ++e)
                    if (!s.coeff(e).is_zero() && e % family->ell != 0) rep.integral_exponents = false;
            rep.image.push_back(s);
        }
    }
    return rep;
}

}  // namespace laxkit
