#include "laxkit/multipoly.hpp"

#include "laxkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace laxkit {

namespace {

int degree_sum(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

}  // namespace

bool GradedLexGreater::operator()(const Exponent& a, const Exponent& b) const {
    int da = degree_sum(a), db = degree_sum(b);
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<std::string> merge_symbols(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    for (const auto& s : b)
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    return out;
}

MultiPoly::MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

MultiPoly::MultiPoly(std::vector<std::string> vars, const BigRational& c) : vars_(std::move(vars)) {
    if (c != 0) terms_.emplace(Exponent(vars_.size(), 0), c);
}

MultiPoly::MultiPoly(const BigRational& c) : MultiPoly(std::vector<std::string>{}, c) {}

MultiPoly::MultiPoly(long c) : MultiPoly(BigRational(c)) {}

MultiPoly MultiPoly::symbol(const std::string& name) { return symbol(name, {name}); }

MultiPoly MultiPoly::symbol(const std::string& name, const std::vector<std::string>& vars) {
    MultiPoly p(vars);
    int i = p.var_index(name);
    if (i < 0) {
        p.vars_.push_back(name);
        i = static_cast<int>(p.vars_.size()) - 1;
    }
    Exponent e(p.vars_.size(), 0);
    e[i] = 1;
    p.terms_.emplace(std::move(e), 1);
    return p;
}

bool MultiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && degree_sum(terms_.begin()->first) == 0);
}

BigRational MultiPoly::constant_term() const {
    auto it = terms_.find(Exponent(vars_.size(), 0));
    return it == terms_.end() ? BigRational(0) : it->second;
}

int MultiPoly::var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return static_cast<int>(i);
    return -1;
}

void MultiPoly::add_term(const Exponent& e, const BigRational& c) {
    if (e.size() != vars_.size()) throw Error("exponent length does not match symbol count");
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Exponent MultiPoly::remap(const Exponent& e, const std::vector<int>& map, std::size_t n) const {
    Exponent out(n, 0);
    for (std::size_t i = 0; i < e.size(); ++i) out[map[i]] = e[i];
    return out;
}

MultiPoly MultiPoly::with_variables(const std::vector<std::string>& vars) const {
    if (vars == vars_) return *this;
    std::vector<int> map(vars_.size(), -1);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find(vars.begin(), vars.end(), vars_[i]);
        if (it != vars.end()) map[i] = static_cast<int>(it - vars.begin());
    }
    MultiPoly out(vars);
    for (const auto& [e, c] : terms_) {
        Exponent ne(vars.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (map[i] < 0) throw Error("symbol '" + vars_[i] + "' missing from target symbol list");
            ne[map[i]] = e[i];
        }
        out.terms_.emplace(std::move(ne), c);
    }
    return out;
}

std::set<std::string> MultiPoly::used_symbols() const {
    std::set<std::string> out;
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) out.insert(vars_[i]);
    return out;
}

MultiPoly MultiPoly::trimmed() const {
    auto used = used_symbols();
    std::vector<std::string> keep;
    for (const auto& v : vars_)
        if (used.count(v)) keep.push_back(v);
    return with_variables(keep);
}

void MultiPoly::align_with(const MultiPoly& o) {
    if (vars_ == o.vars_) return;
    *this = with_variables(merge_symbols(vars_, o.vars_));
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    if (o.terms_.empty()) return *this;
    align_with(o);
    if (vars_ == o.vars_) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
    } else {
        MultiPoly b = o.with_variables(vars_);
        for (const auto& [e, c] : b.terms_) add_term(e, c);
    }
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) { return *this += -o; }

MultiPoly MultiPoly::operator-() const {
    MultiPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

MultiPoly operator*(const MultiPoly& a0, const MultiPoly& b0) {
    if (a0.is_zero() || b0.is_zero()) {
        return MultiPoly(merge_symbols(a0.vars_, b0.vars_));
    }
    const MultiPoly* a = &a0;
    const MultiPoly* b = &b0;
    MultiPoly ta, tb;
    if (a0.vars_ != b0.vars_) {
        auto vars = merge_symbols(a0.vars_, b0.vars_);
        ta = a0.with_variables(vars);
        tb = b0.with_variables(vars);
        a = &ta;
        b = &tb;
    }
    MultiPoly out(a->vars_);
    const std::size_t n = a->vars_.size();
    Exponent e(n);
    for (const auto& [ea, ca] : a->terms_) {
        for (const auto& [eb, cb] : b->terms_) {
            for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
            auto [it, fresh] = out.terms_.emplace(e, ca * cb);
            if (!fresh) {
                it->second += ca * cb;
                if (it->second == 0) out.terms_.erase(it);
            }
        }
    }
    return out;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly& MultiPoly::operator*=(const BigRational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

MultiPoly& MultiPoly::operator/=(const BigRational& c) {
    if (c == 0) throw Error("polynomial divided by zero");
    for (auto& [e, v] : terms_) v /= c;
    return *this;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ == b.vars_) return a.terms_ == b.terms_;
    if (a.terms_.size() != b.terms_.size()) return false;
    auto vars = merge_symbols(a.vars_, b.vars_);
    return a.with_variables(vars).terms_ == b.with_variables(vars).terms_;
}

int MultiPoly::total_degree() const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto& [e, c] : terms_) d = std::max(d, degree_sum(e));
    return d;
}

int MultiPoly::degree_in(const std::string& var) const {
    int i = var_index(var);
    if (terms_.empty()) return -1;
    if (i < 0) return 0;
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
    return d;
}

MultiPoly MultiPoly::coefficient_of(const std::string& var, int k) const {
    int i = var_index(var);
    MultiPoly out(vars_);
    if (i < 0) return k == 0 ? *this : out;
    for (const auto& [e, c] : terms_) {
        if (e[i] != k) continue;
        Exponent ne = e;
        ne[i] = 0;
        out.terms_.emplace(std::move(ne), c);
    }
    return out;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars_[i];
            if (e[i] != 1) mono += "^" + std::to_string(e[i]);
        }
        BigRational mag = abs_of(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (mono.empty()) {
            os << laxkit::to_string(mag);
        } else if (mag == 1) {
            os << mono;
        } else {
            os << laxkit::to_string(mag) << "*" << mono;
        }
        first = false;
    }
    return os.str();
}

MultiPoly pow(const MultiPoly& p, int n) {
    if (n < 0) throw Error("negative polynomial power");
    MultiPoly result(p.variables(), 1);
    MultiPoly base = p;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return result;
}

MultiPoly derivative(const MultiPoly& p, const std::string& var) {
    int i = p.var_index(var);
    MultiPoly out(p.variables());
    if (i < 0) return out;
    for (const auto& [e, c] : p.terms()) {
        if (e[i] == 0) continue;
        Exponent ne = e;
        ne[i] -= 1;
        out.add_term(ne, c * e[i]);
    }
    return out;
}

MultiPoly substitute(const MultiPoly& p, const std::map<std::string, MultiPoly>& values) {
    const auto& vars = p.variables();
    std::vector<std::string> kept;
    for (const auto& v : vars)
        if (!values.count(v)) kept.push_back(v);
    MultiPoly out(kept);
    // Cache powers of substituted values.
    std::map<std::pair<std::size_t, int>, MultiPoly> powers;
    for (const auto& [e, c] : p.terms()) {
        MultiPoly term(kept, c);
        Exponent rest(kept.size(), 0);
        std::size_t k = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            auto it = values.find(vars[i]);
            if (it == values.end()) {
                rest[k++] = e[i];
                continue;
            }
            if (e[i] == 0) continue;
            auto key = std::make_pair(i, e[i]);
            auto pit = powers.find(key);
            if (pit == powers.end()) pit = powers.emplace(key, pow(it->second, e[i])).first;
            term *= pit->second;
        }
        MultiPoly mono(kept);
        mono.add_term(rest, 1);
        out += term * mono;
    }
    return out;
}

MultiPoly bind(const MultiPoly& p, const std::map<std::string, BigRational>& values) {
    std::map<std::string, MultiPoly> v;
    for (const auto& [k, q] : values)
        if (p.var_index(k) >= 0) v.emplace(k, MultiPoly(q));
    return v.empty() ? p : substitute(p, v);
}

BigRational poly_eval(const MultiPoly& p, const std::map<std::string, BigRational>& values) {
    const auto& vars = p.variables();
    std::vector<const BigRational*> vals(vars.size(), nullptr);
    for (std::size_t i = 0; i < vars.size(); ++i) {
        auto it = values.find(vars[i]);
        if (it != values.end()) vals[i] = &it->second;
    }
    BigRational sum = 0;
    for (const auto& [e, c] : p.terms()) {
        BigRational t = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!vals[i]) throw Error("no value for symbol '" + vars[i] + "'");
            BigRational pw;
            mpz_pow_ui(pw.get_num_mpz_t(), vals[i]->get_num_mpz_t(), e[i]);
            mpz_pow_ui(pw.get_den_mpz_t(), vals[i]->get_den_mpz_t(), e[i]);
            t *= pw;
        }
        sum += t;
    }
    return sum;
}

double poly_eval_double(const MultiPoly& p, const std::map<std::string, double>& values) {
    const auto& vars = p.variables();
    std::vector<double> vals(vars.size(), 0.0);
    std::vector<bool> have(vars.size(), false);
    for (std::size_t i = 0; i < vars.size(); ++i) {
        auto it = values.find(vars[i]);
        if (it != values.end()) {
            vals[i] = it->second;
            have[i] = true;
        }
    }
    double sum = 0;
    for (const auto& [e, c] : p.terms()) {
        double t = c.get_d();
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!have[i]) throw Error("no value for symbol '" + vars[i] + "'");
            t *= std::pow(vals[i], e[i]);
        }
        sum += t;
    }
    return sum;
}

MultiPoly primitive_integer_form(const MultiPoly& p) {
    if (p.is_zero()) return p;
    BigInt den = 1, num = 0;
    for (const auto& [e, c] : p.terms()) {
        den = lcm_of(den, c.get_den());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
    }
    BigRational scale = make_rational(den, num);
    if (p.terms().begin()->second < 0) scale = -scale;
    return p * scale;
}

std::map<Exponent, MultiPoly, GradedLexGreater> split_by(const MultiPoly& p,
                                                         const std::vector<std::string>& vars) {
    std::vector<int> idx(p.variables().size(), -1);
    std::vector<std::string> rest;
    std::vector<int> rest_idx(p.variables().size(), -1);
    for (std::size_t i = 0; i < p.variables().size(); ++i) {
        auto it = std::find(vars.begin(), vars.end(), p.variables()[i]);
        if (it != vars.end()) {
            idx[i] = static_cast<int>(it - vars.begin());
        } else {
            rest_idx[i] = static_cast<int>(rest.size());
            rest.push_back(p.variables()[i]);
        }
    }
    std::map<Exponent, MultiPoly, GradedLexGreater> out;
    for (const auto& [e, c] : p.terms()) {
        Exponent ev(vars.size(), 0), er(rest.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (idx[i] >= 0)
                ev[idx[i]] = e[i];
            else
                er[rest_idx[i]] = e[i];
        }
        auto it = out.find(ev);
        if (it == out.end()) it = out.emplace(ev, MultiPoly(rest)).first;
        it->second.add_term(er, c);
    }
    return out;
}

}  // namespace laxkit
