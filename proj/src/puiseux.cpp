#include "laxkit/puiseux.hpp"

#include "laxkit/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace laxkit {

std::string exponent_string(int num, int ell) {
    int g = std::gcd(num, ell);
    if (g == 0) g = 1;
    int n = num / g, d = ell / g;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    return d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d);
}

PuiseuxSeries::PuiseuxSeries(int ell, int k0, std::vector<MultiPoly> coeffs, int trunc)
    : ell_(ell), k0_(k0), c_(std::move(coeffs)), trunc_(trunc) {
    if (ell_ <= 0) throw Error("branching index must be positive");
    if (trunc_ != INT_MAX && static_cast<long>(k0_) + static_cast<long>(c_.size()) > trunc_)
        c_.resize(std::max(0, trunc_ - k0_));
    normalize();
}

PuiseuxSeries PuiseuxSeries::constant(const MultiPoly& c, int ell, int trunc) {
    return PuiseuxSeries(ell, 0, {c}, trunc);
}

PuiseuxSeries PuiseuxSeries::zero(int ell, int trunc) { return PuiseuxSeries(ell, 0, {}, trunc); }

void PuiseuxSeries::normalize() {
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead].is_zero()) ++lead;
    if (lead == c_.size()) {
        c_.clear();
        k0_ = 0;
        return;
    }
    if (lead) {
        c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
        k0_ += static_cast<int>(lead);
    }
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

MultiPoly PuiseuxSeries::coeff(int e) const {
    if (c_.empty() || e < k0_ || e >= k0_ + static_cast<int>(c_.size())) return MultiPoly();
    return c_[e - k0_];
}

PuiseuxSeries PuiseuxSeries::refined(int factor) const {
    if (factor <= 0) throw Error("refinement factor must be positive");
    if (factor == 1) return *this;
    std::vector<MultiPoly> v;
    if (!c_.empty()) {
        v.assign((c_.size() - 1) * factor + 1, MultiPoly());
        for (std::size_t j = 0; j < c_.size(); ++j) v[j * factor] = c_[j];
    }
    int tr = trunc_ == INT_MAX ? INT_MAX : trunc_ * factor;
    return PuiseuxSeries(ell_ * factor, k0_ * factor, std::move(v), tr);
}

PuiseuxSeries PuiseuxSeries::capped(int cap) const {
    PuiseuxSeries r = *this;
    if (cap < r.trunc_) r.trunc_ = cap;
    if (!r.c_.empty() && r.k0_ + static_cast<long>(r.c_.size()) > r.trunc_)
        r.c_.resize(std::max(0, r.trunc_ - r.k0_));
    r.normalize();
    return r;
}

PuiseuxSeries& PuiseuxSeries::operator+=(const PuiseuxSeries& o) {
    if (o.ell_ != ell_) throw Error("series with different branching indices");
    int tr = std::min(trunc_, o.trunc_);
    if (o.c_.empty()) {
        trunc_ = tr;
        return *this = capped(tr);
    }
    if (c_.empty()) {
        PuiseuxSeries r = o;
        r.trunc_ = tr;
        return *this = r.capped(tr);
    }
    int lo = std::min(k0_, o.k0_);
    int hi = std::max(k0_ + static_cast<int>(c_.size()), o.k0_ + static_cast<int>(o.c_.size()));
    hi = std::min(hi, tr);
    std::vector<MultiPoly> v(std::max(0, hi - lo));
    for (int e = lo; e < hi; ++e) {
        MultiPoly s = coeff(e);
        s += o.coeff(e);
        v[e - lo] = std::move(s);
    }
    return *this = PuiseuxSeries(ell_, lo, std::move(v), tr);
}

PuiseuxSeries PuiseuxSeries::operator-() const {
    PuiseuxSeries r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

PuiseuxSeries& PuiseuxSeries::operator-=(const PuiseuxSeries& o) { return *this += -o; }

PuiseuxSeries operator*(const PuiseuxSeries& a, const MultiPoly& s) {
    PuiseuxSeries r = a;
    for (auto& c : r.c_) c = c * s;
    r.normalize();
    return r;
}

PuiseuxSeries series_mul(const PuiseuxSeries& a, const PuiseuxSeries& b, int cap) {
    if (a.ell() != b.ell()) throw Error("series with different branching indices");
    long ta = a.trunc() == INT_MAX ? LONG_MAX : static_cast<long>(a.trunc()) + (b.is_zero() ? 0 : b.lowest());
    long tb = b.trunc() == INT_MAX ? LONG_MAX : static_cast<long>(b.trunc()) + (a.is_zero() ? 0 : a.lowest());
    long tr = std::min({ta, tb, static_cast<long>(cap)});
    int trunc = tr >= INT_MAX ? INT_MAX : static_cast<int>(tr);
    if (a.is_zero() || b.is_zero()) return PuiseuxSeries::zero(a.ell(), trunc);
    int lo = a.lowest() + b.lowest();
    long hi = static_cast<long>(lo) + static_cast<long>(a.coeffs().size() + b.coeffs().size()) - 1;
    hi = std::min(hi, tr);
    std::vector<MultiPoly> v(std::max(0L, hi - lo));
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (ca[i].is_zero()) continue;
        for (std::size_t j = 0; j < cb.size(); ++j) {
            long e = static_cast<long>(i + j);
            if (lo + e >= hi) break;
            if (cb[j].is_zero()) continue;
            v[e] += ca[i] * cb[j];
        }
    }
    return PuiseuxSeries(a.ell(), lo, std::move(v), trunc);
}

PuiseuxSeries series_pow(const PuiseuxSeries& a, int n, int cap) {
    if (n < 0) throw Error("negative series power");
    PuiseuxSeries r = PuiseuxSeries::constant(MultiPoly(1), a.ell(), INT_MAX);
    if (n > 0 && a.is_zero()) return PuiseuxSeries::zero(a.ell(), std::min(cap, a.trunc()));
    for (int k = 0; k < n; ++k) {
        // Later factors may lower exponents again, so partial products need a higher cap.
        long later = static_cast<long>(n - k - 1) * a.lowest();
        long c = cap == INT_MAX ? LONG_MAX : static_cast<long>(cap) - std::min(0L, later);
        r = series_mul(r, a, c >= INT_MAX ? INT_MAX : static_cast<int>(c));
    }
    return r.capped(cap);
}

PuiseuxSeries series_derivative(const PuiseuxSeries& a) {
    std::vector<MultiPoly> v;
    const auto& c = a.coeffs();
    v.reserve(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        int e = a.lowest() + static_cast<int>(j);
        v.push_back(c[j] * make_rational(e, a.ell()));
    }
    int tr = a.trunc() == INT_MAX ? INT_MAX : a.trunc() - a.ell();
    return PuiseuxSeries(a.ell(), a.lowest() - a.ell(), std::move(v), tr);
}

PuiseuxSeries series_compose(const MultiPoly& p, const std::vector<std::string>& vars,
                             const std::vector<PuiseuxSeries>& values, int cap) {
    if (vars.size() != values.size()) throw Error("series_compose: arity mismatch");
    int ell = values.empty() ? 1 : values.front().ell();
    PuiseuxSeries sum = PuiseuxSeries::zero(ell, cap);
    for (const auto& [e, coeff] : split_by(p, vars)) {
        std::vector<const PuiseuxSeries*> factors;
        for (std::size_t i = 0; i < vars.size(); ++i)
            for (int k = 0; k < e[i]; ++k) factors.push_back(&values[i]);
        std::vector<long> later(factors.size() + 1, 0);
        for (std::size_t k = factors.size(); k-- > 0;)
            later[k] = later[k + 1] + (factors[k]->is_zero() ? 0 : factors[k]->lowest());
        PuiseuxSeries term = PuiseuxSeries::constant(coeff, ell, INT_MAX);
        for (std::size_t k = 0; k < factors.size(); ++k) {
            long c = cap == INT_MAX ? LONG_MAX : static_cast<long>(cap) - std::min(0L, later[k + 1]);
            term = series_mul(term, *factors[k], c >= INT_MAX ? INT_MAX : static_cast<int>(c));
        }
        sum += term.capped(cap);
    }
    return sum;
}

std::map<std::string, std::string> PuiseuxSeries::to_map() const {
    std::map<std::string, std::string> out;
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j].is_zero()) continue;
        out[exponent_string(k0_ + static_cast<int>(j), ell_)] = c_[j].to_string();
    }
    return out;
}

std::string PuiseuxSeries::to_string(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j].is_zero()) continue;
        if (!first) os << " + ";
        os << "(" << c_[j].to_string() << ")*" << var << "^(" << exponent_string(k0_ + static_cast<int>(j), ell_) << ")";
        first = false;
    }
    if (first) os << "0";
    if (trunc_ != INT_MAX) os << " + O(" << var << "^(" << exponent_string(trunc_, ell_) << "))";
    return os.str();
}

}  // namespace laxkit
