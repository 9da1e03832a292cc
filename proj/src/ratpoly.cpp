#include "laxkit/ratpoly.hpp"

#include "laxkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace laxkit {

RatPoly::RatPoly(std::vector<BigRational> coeffs) : c_(std::move(coeffs)) { trim(); }

RatPoly RatPoly::monomial(const BigRational& c, int degree) {
    std::vector<BigRational> v(degree + 1, 0);
    v[degree] = c;
    return RatPoly(std::move(v));
}

RatPoly RatPoly::from_doubles(const std::vector<double>& coeffs) {
    std::vector<BigRational> v;
    v.reserve(coeffs.size());
    for (double x : coeffs) v.push_back(from_double(x));
    return RatPoly(std::move(v));
}

void RatPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

BigRational RatPoly::coeff(int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : BigRational(0);
}

BigRational RatPoly::operator()(const BigRational& x) const {
    BigRational r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
}

double RatPoly::eval(double x) const {
    double r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + it->get_d();
    return r;
}

RatPoly& RatPoly::operator+=(const RatPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigRational> v(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return RatPoly(std::move(v));
}

RatPoly operator*(RatPoly a, const BigRational& s) {
    for (auto& c : a.c_) c *= s;
    a.trim();
    return a;
}

std::string RatPoly::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const BigRational& c = c_[k];
        if (c == 0) continue;
        BigRational mag = abs_of(c);
        os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
        if (k == 0 || mag != 1) os << laxkit::to_string(mag) << (k ? "*" : "");
        if (k) os << var << (k > 1 ? "^" + std::to_string(k) : "");
        first = false;
    }
    return os.str();
}

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
    if (b.is_zero()) throw Error("polynomial division by zero");
    std::vector<BigRational> r = a.coeffs();
    int db = b.degree();
    if (a.degree() < db) return {RatPoly(), a};
    std::vector<BigRational> q(a.degree() - db + 1, 0);
    for (int k = a.degree(); k >= db; --k) {
        if (r[k] == 0) continue;
        BigRational f = r[k] / b.lead();
        q[k - db] = f;
        for (int j = 0; j <= db; ++j) r[k - db + j] -= f * b.coeffs()[j];
    }
    return {RatPoly(std::move(q)), RatPoly(std::move(r))};
}

RatPoly derivative(const RatPoly& p) {
    if (p.degree() <= 0) return {};
    std::vector<BigRational> v(p.degree());
    for (int k = 1; k <= p.degree(); ++k) v[k - 1] = p.coeffs()[k] * k;
    return RatPoly(std::move(v));
}

RatPoly monic(const RatPoly& p) {
    if (p.is_zero()) return p;
    return p * BigRational(1 / p.lead());
}

RatPoly primitive(const RatPoly& p) {
    if (p.is_zero()) return p;
    BigInt den = 1, num = 0;
    for (const auto& c : p.coeffs()) {
        den = lcm_of(den, c.get_den());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
    }
    return p * make_rational(den, num);
}

RatPoly gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = primitive(r);
    }
    return monic(a);
}

std::vector<RatPoly> squarefree_decomposition(const RatPoly& p) {
    // Yun's algorithm.
    std::vector<RatPoly> out;
    if (p.degree() <= 0) return out;
    RatPoly f = monic(p);
    RatPoly d = derivative(f);
    RatPoly a = gcd(f, d);
    RatPoly b = divmod(f, a).first;
    RatPoly c = divmod(d, a).first;
    RatPoly e = c - derivative(b);
    while (b.degree() > 0) {
        RatPoly g = gcd(b, e);
        out.push_back(g);
        b = divmod(b, g).first;
        c = divmod(e, g).first;
        e = c - derivative(b);
    }
    while (!out.empty() && out.back().degree() == 0) out.pop_back();
    return out;
}

namespace {

std::vector<RatPoly> sturm_chain(const RatPoly& p) {
    std::vector<RatPoly> chain{primitive(p), primitive(derivative(p))};
    while (chain.back().degree() > 0) {
        RatPoly r = divmod(chain[chain.size() - 2], chain.back()).second;
        if (r.is_zero()) break;
        chain.push_back(primitive(r * BigRational(-1)));
    }
    return chain;
}

int sign_changes(const std::vector<RatPoly>& chain, const BigRational& x) {
    int changes = 0, last = 0;
    for (const auto& q : chain) {
        int s = sgn(q(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

}  // namespace

int sturm_count(const RatPoly& p, const BigRational& lo, const BigRational& hi) {
    if (p.is_zero()) throw Error("Sturm count of the zero polynomial");
    if (p.degree() == 0) return 0;
    auto chain = sturm_chain(p);
    return sign_changes(chain, lo) - sign_changes(chain, hi);
}

BigRational cauchy_bound(const RatPoly& p) {
    BigRational m = 0;
    for (int k = 0; k < p.degree(); ++k) m = std::max(m, abs_of(p.coeffs()[k] / p.lead()));
    return m + 1;
}

namespace {

// Distinct roots of a square-free polynomial in [lo, hi].
void isolate_squarefree(const RatPoly& p, const std::vector<RatPoly>& chain, BigRational lo,
                        BigRational hi, const BigRational& width, int mult,
                        std::vector<RootInterval>& out) {
    if (p(lo) == 0) {
        out.push_back({lo, lo, mult});
        // Nudge past the root; the remaining interval is open at lo.
    }
    struct Job {
        BigRational a, b;
        int n;
    };
    std::vector<Job> stack;
    int n0 = sign_changes(chain, lo) - sign_changes(chain, hi);
    if (n0 > 0) stack.push_back({lo, hi, n0});
    std::vector<RootInterval> found;
    while (!stack.empty()) {
        Job j = stack.back();
        stack.pop_back();
        if (j.n == 1 && j.b - j.a <= width) {
            found.push_back({j.a, j.b, mult});
            continue;
        }
        BigRational mid = (j.a + j.b) / 2;
        if (j.n == 1) {
            // Bisect keeping the sign change, exact root shortcut on the way.
            if (p(j.b) == 0) {
                found.push_back({j.b, j.b, mult});
                continue;
            }
            if (p(mid) == 0) {
                found.push_back({mid, mid, mult});
                continue;
            }
        }
        int left = sign_changes(chain, j.a) - sign_changes(chain, mid);
        int right = j.n - left;
        if (left > 0) stack.push_back({j.a, mid, left});
        if (right > 0) stack.push_back({mid, j.b, right});
    }
    std::sort(found.begin(), found.end(),
              [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
    for (auto& r : found) {
        if (r.lo == r.hi) {
            out.push_back(r);
            continue;
        }
        if (p(r.hi) == 0) r.lo = r.hi;
        out.push_back(r);
    }
}

}  // namespace

std::vector<RootInterval> isolate_real_roots(const RatPoly& p, const BigRational& lo,
                                             const BigRational& hi, const BigRational& width) {
    if (p.is_zero()) throw Error("root isolation of the zero polynomial");
    std::vector<RootInterval> out;
    auto factors = squarefree_decomposition(p);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const RatPoly& f = factors[i];
        if (f.degree() <= 0) continue;
        auto chain = sturm_chain(f);
        isolate_squarefree(f, chain, lo, hi, width, static_cast<int>(i) + 1, out);
    }
    std::sort(out.begin(), out.end(),
              [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
    return out;
}

RationalRoots rational_roots(const RatPoly& p) {
    if (p.is_zero()) throw Error("rational roots of the zero polynomial");
    RationalRoots res;
    res.cofactor = monic(p);
    if (p.degree() <= 0) return res;
    auto factors = squarefree_decomposition(p);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        RatPoly f = primitive(factors[i]);
        if (f.degree() <= 0) continue;
        // Denominators of rational roots divide the integer leading coefficient,
        // so two candidates differ by at least 1/lead^2.
        BigRational lead = abs_of(f.lead());
        BigRational width = 1 / (lead * lead * 4);
        BigRational bound = cauchy_bound(f);
        auto chain = sturm_chain(f);
        std::vector<RootInterval> iv;
        isolate_squarefree(f, chain, -bound, bound, width, 1, iv);
        for (const auto& r : iv) {
            BigRational s = r.lo == r.hi ? r.lo : simplest_between(r.lo, r.hi);
            if (f(s) != 0) continue;
            int mult = static_cast<int>(i) + 1;
            res.roots.push_back({s, mult});
            RatPoly lin(std::vector<BigRational>{-s, 1});
            for (int k = 0; k < mult; ++k) res.cofactor = divmod(res.cofactor, lin).first;
        }
    }
    std::sort(res.roots.begin(), res.roots.end());
    return res;
}

std::vector<RealRoot> real_roots(const RatPoly& p, double lo, double hi, double tol) {
    if (p.is_zero()) throw Error("real roots of the zero polynomial");
    std::vector<RealRoot> out;
    BigRational blo = from_double(lo), bhi = from_double(hi);
    BigRational width = from_double(std::max(tol, 1e-300));
    auto factors = squarefree_decomposition(p);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const RatPoly& f = factors[i];
        if (f.degree() <= 0) continue;
        auto chain = sturm_chain(f);
        std::vector<RootInterval> iv;
        isolate_squarefree(f, chain, blo, bhi, width, static_cast<int>(i) + 1, iv);
        RatPoly df = derivative(f);
        for (const auto& r : iv) {
            double a = r.lo.get_d(), b = r.hi.get_d();
            double x = 0.5 * (a + b);
            if (r.lo != r.hi) {
                // A few Newton steps, kept only if they stay inside the bracket.
                for (int it = 0; it < 4; ++it) {
                    double d = df.eval(x);
                    if (d == 0) break;
                    double nx = x - f.eval(x) / d;
                    if (!(nx >= a && nx <= b)) break;
                    x = nx;
                }
            }
            out.push_back({x, r.multiplicity, a, b});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const RealRoot& x, const RealRoot& y) { return x.value < y.value; });
    return out;
}

std::vector<RealRoot> real_roots(const std::vector<double>& coeffs, double lo, double hi,
                                 double tol) {
    return real_roots(RatPoly::from_doubles(coeffs), lo, hi, tol);
}

std::vector<double> flatten_roots(const std::vector<RealRoot>& roots) {
    std::vector<double> out;
    for (const auto& r : roots)
        for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.value);
    return out;
}

}  // namespace laxkit
