#include "laxkit/sysdsl.hpp"

#include "laxkit/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace laxkit {

namespace {

enum class Tok { Ident, Number, Op, End };

struct Token {
    Tok kind;
    std::string text;
    int col;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Columns count code points, starting at 1.
std::vector<Token> tokenize(std::string_view line, int lineno) {
    std::vector<Token> out;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < line.size(); ++k, ++i)
            if ((static_cast<unsigned char>(line[i]) & 0xC0) != 0x80) ++col;
    };
    while (i < line.size()) {
        char c = line[i];
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == '\r') {
            advance(1);
            continue;
        }
        int start = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < line.size() && ident_char(line[j])) ++j;
            out.push_back({Tok::Ident, std::string(line.substr(i, j - i)), start});
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
            if (j < line.size() && line[j] == '.') {
                ++j;
                while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
            }
            out.push_back({Tok::Number, std::string(line.substr(i, j - i)), start});
            advance(j - i);
        } else if (std::string_view("+-*/^()=@").find(c) != std::string_view::npos) {
            out.push_back({Tok::Op, std::string(1, c), start});
            advance(1);
        } else {
            throw ParseError(lineno, start, "unexpected character '" + std::string(1, c) + "'");
        }
    }
    out.push_back({Tok::End, "", col});
    return out;
}

class LineParser {
public:
    LineParser(std::vector<Token> toks, int lineno, const VectorFieldSystem& sys)
        : t_(std::move(toks)), line_(lineno), sys_(sys) {}

    const Token& peek() const { return t_[pos_]; }
    Token next() { return t_[pos_ == t_.size() - 1 ? pos_ : pos_++]; }
    bool at_op(char c) const { return peek().kind == Tok::Op && peek().text[0] == c; }
    bool at_end() const { return peek().kind == Tok::End; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, peek().col, msg); }
    [[noreturn]] void fail_at(const Token& tk, const std::string& msg) const { throw ParseError(line_, tk.col, msg); }

    void expect_op(char c) {
        if (!at_op(c)) fail(std::string("expected '") + c + "'");
        next();
    }
    std::string expect_ident(const char* what) {
        if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
        return next().text;
    }
    void expect_end() {
        if (!at_end()) fail("unexpected '" + peek().text + "'");
    }

    BigRational number() {
        if (peek().kind != Tok::Number) fail("expected a number");
        return parse_rational(next().text);
    }

    // [+-] digits [/ digits]
    BigRational signed_rational() {
        bool neg = false;
        while (at_op('+') || at_op('-')) neg ^= next().text[0] == '-';
        BigRational q = number();
        if (at_op('/')) {
            next();
            Token d = peek();
            BigRational den = number();
            if (den == 0) fail_at(d, "division by zero");
            q /= den;
        }
        return neg ? BigRational(-q) : q;
    }

    MultiPoly expr() {
        MultiPoly acc = term();
        while (at_op('+') || at_op('-')) {
            bool minus = next().text[0] == '-';
            MultiPoly rhs = term();
            if (minus)
                acc -= rhs;
            else
                acc += rhs;
        }
        return acc;
    }

private:
    MultiPoly term() {
        MultiPoly acc = unary();
        while (at_op('*') || at_op('/')) {
            bool div = next().text[0] == '/';
            Token at = peek();
            MultiPoly rhs = unary();
            if (!div) {
                acc *= rhs;
                continue;
            }
            if (!rhs.is_constant()) fail_at(at, "division by a non-constant expression");
            if (rhs.is_zero()) fail_at(at, "division by zero");
            acc /= rhs.constant_term();
        }
        return acc;
    }

    MultiPoly unary() {
        if (at_op('-')) {
            next();
            return -unary();
        }
        if (at_op('+')) {
            next();
            return unary();
        }
        MultiPoly base = atom();
        if (at_op('^')) {
            next();
            if (peek().kind != Tok::Number || peek().text.find('.') != std::string::npos)
                fail("exponent must be a non-negative integer");
            int e = std::stoi(next().text);
            return pow(base, e);
        }
        return base;
    }

    MultiPoly atom() {
        const Token& tk = peek();
        if (tk.kind == Tok::Number) return MultiPoly(parse_rational(next().text));
        if (tk.kind == Tok::Ident) {
            const auto& v = sys_.variables;
            const auto& c = sys_.constants;
            if (std::find(v.begin(), v.end(), tk.text) == v.end() && std::find(c.begin(), c.end(), tk.text) == c.end())
                fail("undeclared symbol '" + tk.text + "'");
            return MultiPoly::symbol(next().text, sys_.symbols());
        }
        if (at_op('(')) {
            next();
            MultiPoly e = expr();
            expect_op(')');
            return e;
        }
        if (tk.kind == Tok::End) fail("unexpected end of line");
        fail("unexpected '" + tk.text + "'");
    }

    std::vector<Token> t_;
    std::size_t pos_ = 0;
    int line_;
    const VectorFieldSystem& sys_;
};

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

struct PoissonEntry {
    MultiPoly value;
    int line;
};

}  // namespace

std::vector<std::string> VectorFieldSystem::symbols() const {
    std::vector<std::string> s = variables;
    s.insert(s.end(), constants.begin(), constants.end());
    return s;
}

const MultiPoly& VectorFieldSystem::invariant(const std::string& n) const {
    for (const auto& inv : invariants)
        if (inv.name == n) return inv.poly;
    throw UsageError("unknown invariant '" + n + "'");
}

bool VectorFieldSystem::has_invariant(const std::string& n) const {
    return std::any_of(invariants.begin(), invariants.end(), [&](const NamedPoly& p) { return p.name == n; });
}

VectorFieldSystem parse_system(std::string_view text) {
    VectorFieldSystem sys;
    std::vector<std::optional<MultiPoly>> eqs;
    std::map<std::pair<int, int>, PoissonEntry> poisson;
    int vars_line = 0, hamiltonian_line = 0;
    int hamiltonian_col = 0;
    bool have_consts = false;

    int lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++lineno;

        auto toks = tokenize(line, lineno);
        if (toks.front().kind == Tok::End) {
            if (end == text.size()) break;
            continue;
        }
        LineParser p(toks, lineno, sys);
        Token kw = p.peek();
        if (kw.kind != Tok::Ident) p.fail("expected a section keyword");
        p.next();
        const std::string& k = kw.text;

        auto need_vars = [&] {
            if (sys.variables.empty()) p.fail_at(kw, "'" + k + "' before 'vars'");
        };

        if (k == "system") {
            if (!sys.name.empty()) p.fail_at(kw, "duplicate 'system' line");
            // Names may contain '-' and digits; take the rest of the line.
            std::string rest;
            int col = p.peek().col;
            while (!p.at_end()) rest += p.next().text;
            if (rest.empty()) throw ParseError(lineno, col, "expected a system name");
            std::string raw(line);
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.resize(hash);
            auto b = raw.find_first_not_of(" \t", raw.find("system") + 6);
            auto e = raw.find_last_not_of(" \t\r");
            std::string name = raw.substr(b, e - b + 1);
            if (name.find_first_of(" \t") != std::string::npos) throw ParseError(lineno, col, "system name contains spaces");
            sys.name = name;
        } else if (k == "vars" || k == "consts") {
            bool is_vars = k == "vars";
            if (is_vars ? !sys.variables.empty() : have_consts) p.fail_at(kw, "duplicate '" + k + "' line");
            std::vector<std::string> names;
            while (!p.at_end()) {
                Token tk = p.peek();
                std::string n = p.expect_ident("a symbol name");
                if (contains(names, n) || contains(sys.variables, n) || contains(sys.constants, n))
                    p.fail_at(tk, "symbol '" + n + "' declared twice");
                names.push_back(n);
            }
            if (names.empty()) p.fail("expected at least one symbol");
            if (is_vars) {
                sys.variables = names;
                eqs.assign(names.size(), std::nullopt);
                vars_line = lineno;
            } else {
                sys.constants = names;
                have_consts = true;
            }
        } else if (k == "eq") {
            need_vars();
            Token tk = p.peek();
            std::string v = p.expect_ident("a variable name");
            auto it = std::find(sys.variables.begin(), sys.variables.end(), v);
            if (it == sys.variables.end()) p.fail_at(tk, "'" + v + "' is not a declared variable");
            auto idx = static_cast<std::size_t>(it - sys.variables.begin());
            if (eqs[idx]) p.fail_at(tk, "second equation for '" + v + "'");
            p.expect_op('=');
            eqs[idx] = p.expr();
            p.expect_end();
        } else if (k == "invariant") {
            need_vars();
            Token tk = p.peek();
            std::string n = p.expect_ident("an invariant name");
            if (sys.has_invariant(n)) p.fail_at(tk, "invariant '" + n + "' declared twice");
            p.expect_op('=');
            MultiPoly e = p.expr();
            p.expect_end();
            sys.invariants.push_back({n, e});
        } else if (k == "poisson") {
            need_vars();
            int idx[2];
            for (int& x : idx) {
                Token tk = p.peek();
                if (tk.kind == Tok::Number) {
                    BigRational q = p.number();
                    if (!is_integer(q) || q < 1 || q > static_cast<long>(sys.variables.size()))
                        p.fail_at(tk, "Poisson index out of range 1.." + std::to_string(sys.variables.size()));
                    x = static_cast<int>(q.get_num().get_si()) - 1;
                } else if (tk.kind == Tok::Ident) {
                    auto it = std::find(sys.variables.begin(), sys.variables.end(), tk.text);
                    if (it == sys.variables.end()) p.fail_at(tk, "'" + tk.text + "' is not a declared variable");
                    x = static_cast<int>(it - sys.variables.begin());
                    p.next();
                } else {
                    p.fail("expected a Poisson index");
                }
            }
            p.expect_op('=');
            MultiPoly e = p.expr();
            p.expect_end();
            if (idx[0] == idx[1] && !e.is_zero())
                throw ParseError(lineno, kw.col, "Poisson matrix is not skew-symmetric: nonzero diagonal entry");
            auto key = std::make_pair(idx[0], idx[1]);
            if (poisson.count(key)) throw ParseError(lineno, kw.col, "Poisson entry given twice");
            auto mirror = poisson.find({idx[1], idx[0]});
            if (mirror != poisson.end() && !(mirror->second.value + e).is_zero())
                throw ParseError(lineno, kw.col,
                                 "Poisson matrix is not skew-symmetric: entries (" + std::to_string(idx[0] + 1) + "," +
                                     std::to_string(idx[1] + 1) + ") and (" + std::to_string(idx[1] + 1) + "," +
                                     std::to_string(idx[0] + 1) + ") do not sum to zero");
            poisson[key] = {e, lineno};
        } else if (k == "hamiltonian") {
            if (!sys.hamiltonian.empty()) p.fail_at(kw, "duplicate 'hamiltonian' line");
            hamiltonian_col = p.peek().col;
            sys.hamiltonian = p.expect_ident("an invariant name");
            p.expect_end();
            hamiltonian_line = lineno;
        } else if (k == "param") {
            need_vars();
            Token tk = p.peek();
            ParamDecl d;
            d.name = p.expect_ident("a parameter name");
            if (contains(sys.variables, d.name) || contains(sys.constants, d.name) ||
                std::any_of(sys.params.begin(), sys.params.end(), [&](const ParamDecl& q) { return q.name == d.name; }))
                p.fail_at(tk, "parameter name '" + d.name + "' already in use");
            p.expect_op('=');
            bool neg = false;
            while (p.at_op('+') || p.at_op('-')) neg ^= p.next().text[0] == '-';
            d.scale = 1;
            if (p.peek().kind == Tok::Number) {
                d.scale = p.signed_rational();
                if (p.at_op('*')) p.next();
            }
            if (neg) d.scale = -d.scale;
            if (d.scale == 0) p.fail_at(tk, "parameter scale must be nonzero");
            Token vt = p.peek();
            d.variable = p.expect_ident("a variable name");
            if (!contains(sys.variables, d.variable)) p.fail_at(vt, "'" + d.variable + "' is not a declared variable");
            p.expect_op('@');
            d.exponent = p.signed_rational();
            p.expect_end();
            sys.params.push_back(d);
        } else {
            p.fail_at(kw, "unknown section '" + k + "'");
        }
        if (end == text.size()) break;
    }

    if (sys.name.empty()) throw ParseError(1, 1, "missing 'system' line");
    if (sys.variables.empty()) throw ParseError(lineno, 1, "missing 'vars' line");
    for (std::size_t i = 0; i < eqs.size(); ++i)
        if (!eqs[i]) throw ParseError(vars_line, 1, "no equation for variable '" + sys.variables[i] + "'");
    if (!sys.hamiltonian.empty() && !sys.has_invariant(sys.hamiltonian))
        throw ParseError(hamiltonian_line, hamiltonian_col, "hamiltonian '" + sys.hamiltonian + "' is not a declared invariant");

    auto syms = sys.symbols();
    for (auto& e : eqs) sys.equations.push_back(e->with_variables(syms));
    for (auto& inv : sys.invariants) inv.poly = inv.poly.with_variables(syms);
    if (!poisson.empty()) {
        std::size_t m = sys.variables.size();
        PolyMatrix j(m, m);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) j(a, b) = MultiPoly(syms);
        for (const auto& [key, entry] : poisson) {
            j(key.first, key.second) = entry.value.with_variables(syms);
            j(key.second, key.first) = -entry.value.with_variables(syms);
        }
        sys.poisson = j;
    }
    return sys;
}

MultiPoly parse_polynomial(std::string_view text, const std::vector<std::string>& symbols) {
    if (text.find('\n') != std::string_view::npos) throw ParseError(1, 1, "polynomial must fit on one line");
    VectorFieldSystem scope;
    scope.variables = symbols;
    LineParser p(tokenize(text, 1), 1, scope);
    MultiPoly out = p.expr();
    p.expect_end();
    return out.with_variables(merge_symbols(symbols, out.variables()));
}

VectorFieldSystem load_system(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str());
}

std::string print_system(const VectorFieldSystem& sys) {
    std::ostringstream os;
    auto syms = sys.symbols();
    os << "system " << sys.name << "\n";
    os << "vars";
    for (const auto& v : sys.variables) os << " " << v;
    os << "\n";
    if (!sys.constants.empty()) {
        os << "consts";
        for (const auto& c : sys.constants) os << " " << c;
        os << "\n";
    }
    for (std::size_t i = 0; i < sys.variables.size(); ++i)
        os << "eq " << sys.variables[i] << " = " << sys.equations[i].with_variables(syms).to_string() << "\n";
    for (const auto& inv : sys.invariants)
        os << "invariant " << inv.name << " = " << inv.poly.with_variables(syms).to_string() << "\n";
    if (!sys.hamiltonian.empty()) os << "hamiltonian " << sys.hamiltonian << "\n";
    if (sys.poisson) {
        const auto& j = *sys.poisson;
        bool any = false;
        for (std::size_t a = 0; a < j.rows(); ++a)
            for (std::size_t b = a + 1; b < j.cols(); ++b)
                if (!j(a, b).is_zero()) {
                    os << "poisson " << a + 1 << " " << b + 1 << " = " << j(a, b).with_variables(syms).to_string() << "\n";
                    any = true;
                }
        // A declared but vanishing matrix still needs one line.
        if (!any && j.rows() > 1) os << "poisson 1 2 = 0\n";
    }
    for (const auto& d : sys.params) {
        os << "param " << d.name << " = ";
        if (d.scale == -1)
            os << "-";
        else if (d.scale != 1)
            os << to_string(d.scale) << "*";
        os << d.variable << " @ " << to_string(d.exponent) << "\n";
    }
    return os.str();
}

bool operator==(const VectorFieldSystem& a, const VectorFieldSystem& b) {
    if (a.name != b.name || a.variables != b.variables || a.constants != b.constants || a.hamiltonian != b.hamiltonian)
        return false;
    if (a.equations != b.equations) return false;
    if (a.invariants.size() != b.invariants.size()) return false;
    for (std::size_t i = 0; i < a.invariants.size(); ++i)
        if (a.invariants[i].name != b.invariants[i].name || a.invariants[i].poly != b.invariants[i].poly) return false;
    if (a.poisson.has_value() != b.poisson.has_value()) return false;
    if (a.poisson && !(*a.poisson == *b.poisson)) return false;
    if (a.params.size() != b.params.size()) return false;
    for (std::size_t i = 0; i < a.params.size(); ++i) {
        const auto &p = a.params[i], &q = b.params[i];
        if (p.name != q.name || p.scale != q.scale || p.variable != q.variable || p.exponent != q.exponent) return false;
    }
    return true;
}

std::vector<MultiPoly> hamiltonian_vector_field(const VectorFieldSystem& sys, const std::string& invariant) {
    const MultiPoly& h = sys.invariant(invariant);
    if (!sys.poisson) throw UsageError("system '" + sys.name + "' declares no Poisson matrix");
    const auto& j = *sys.poisson;
    std::size_t m = sys.variables.size();
    std::vector<MultiPoly> grad;
    for (const auto& v : sys.variables) grad.push_back(derivative(h, v));
    std::vector<MultiPoly> out;
    for (std::size_t i = 0; i < m; ++i) {
        MultiPoly s(sys.symbols());
        for (std::size_t k = 0; k < m; ++k)
            if (!j(i, k).is_zero() && !grad[k].is_zero()) s += j(i, k) * grad[k];
        out.push_back(s.with_variables(sys.symbols()));
    }
    return out;
}

VectorFieldSystem bind_constants(const VectorFieldSystem& sys, const std::map<std::string, BigRational>& values) {
    for (const auto& [name, _] : values)
        if (!contains(sys.constants, name)) throw UsageError("'" + name + "' is not a constant of system '" + sys.name + "'");
    VectorFieldSystem out = sys;
    out.constants.clear();
    for (const auto& c : sys.constants)
        if (!values.count(c)) out.constants.push_back(c);
    auto syms = out.symbols();
    auto fix = [&](const MultiPoly& p) { return bind(p, values).with_variables(syms); };
    for (auto& e : out.equations) e = fix(e);
    for (auto& inv : out.invariants) inv.poly = fix(inv.poly);
    if (out.poisson)
        for (std::size_t a = 0; a < out.poisson->rows(); ++a)
            for (std::size_t b = 0; b < out.poisson->cols(); ++b) (*out.poisson)(a, b) = fix((*out.poisson)(a, b));
    return out;
}

namespace {

struct BuiltinSource {
    const char* name;
    const char* text;
};

const BuiltinSource kBuiltins[] = {
#include "builtin_systems.inc"
};

}  // namespace

std::vector<std::string> builtin_system_names() {
    std::vector<std::string> out;
    for (const auto& b : kBuiltins) out.emplace_back(b.name);
    return out;
}

std::string builtin_system_source(const std::string& name) {
    for (const auto& b : kBuiltins)
        if (name == b.name) return b.text;
    std::string known;
    for (const auto& b : kBuiltins) known += std::string(known.empty() ? "" : ", ") + b.name;
    throw UsageError("unknown builtin system '" + name + "' (known: " + known + ")");
}

VectorFieldSystem builtin_system(const std::string& name) { return parse_system(builtin_system_source(name)); }

}  // namespace laxkit
