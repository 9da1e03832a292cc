#include "laxkit/rational.hpp"

#include "laxkit/error.hpp"

#include <cctype>
#include <cmath>

namespace laxkit {

BigRational make_rational(long num, long den) {
    if (den == 0) throw Error("zero denominator");
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

BigRational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw Error("zero denominator");
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

BigRational from_double(double x) {
    if (!std::isfinite(x)) throw Error("non-finite value has no rational form");
    BigRational q(x);
    q.canonicalize();
    return q;
}

double to_double(const BigRational& q) { return q.get_d(); }

BigRational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw Error("empty number");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num, den;
        if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
            throw Error("malformed rational '" + s + "'");
        return make_rational(num, den);
    }
    // Decimal with optional exponent, read exactly.
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
    BigInt digits = 0;
    long scale = 0;
    bool any = false, dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits = digits * 10 + (c - '0');
            if (dot) ++scale;
            any = true;
        } else if (c == '.' && !dot) {
            dot = true;
        } else {
            break;
        }
    }
    if (!any) throw Error("malformed number '" + s + "'");
    long exp10 = 0;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') throw Error("malformed number '" + s + "'");
        try {
            std::size_t used = 0;
            exp10 = std::stol(s.substr(i + 1), &used);
            if (used != s.size() - i - 1) throw Error("");
        } catch (...) {
            throw Error("malformed exponent in '" + s + "'");
        }
    }
    exp10 -= scale;
    BigInt p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    BigRational q = exp10 >= 0 ? BigRational(digits * p10) : make_rational(digits, p10);
    return neg ? BigRational(-q) : q;
}

std::string to_string(const BigRational& q) { return q.get_str(); }

bool is_integer(const BigRational& q) { return q.get_den() == 1; }

BigInt floor_of(const BigRational& q) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

BigRational abs_of(const BigRational& q) { return q < 0 ? BigRational(-q) : q; }

BigInt lcm_of(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

BigRational simplest_between(BigRational lo, BigRational hi) {
    if (lo > hi) std::swap(lo, hi);
    if (lo <= 0 && hi >= 0) return 0;
    if (hi < 0) return -simplest_between(-hi, -lo);
    BigInt fl = floor_of(lo);
    if (fl == lo) return lo;
    if (BigRational(fl + 1) <= hi) return BigRational(fl + 1);
    // lo and hi share the integer part; recurse on the reciprocals of the fractional parts.
    BigRational inner = simplest_between(1 / (hi - fl), 1 / (lo - fl));
    return BigRational(fl) + 1 / inner;
}

}  // namespace laxkit
