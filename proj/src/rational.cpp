#include "diffalg/rational.hpp"

#include "diffalg/error.hpp"

namespace diffalg {

std::string to_string(const Rational& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

Rational pow_integer(const Rational& base, const Integer& exp) {
    if (exp == 0) return 1;
    if (base == 0) {
        if (exp < 0) throw DivisionByZero("0 raised to a negative power");
        return 0;
    }
    Integer n = exp < 0 ? Integer(-exp) : exp;
    Rational acc = 1;
    Rational sq = base;
    while (n > 0) {
        if ((n & 1) != 0) acc *= sq;
        n >>= 1;
        if (n > 0) sq *= sq;
    }
    if (exp < 0) acc = Rational(1) / acc;
    return acc;
}

std::optional<Integer> nth_root_exact(const Integer& value, unsigned n) {
    if (n == 0) return std::nullopt;
    if (value < 0) return std::nullopt;
    if (value == 0 || value == 1 || n == 1) return value;
    // Binary search; magnitudes here are tiny, no need for anything smarter.
    Integer lo = 1, hi = value;
    while (lo <= hi) {
        Integer mid = (lo + hi) / 2;
        Integer p = boost::multiprecision::pow(mid, n);
        if (p == value) return mid;
        if (p < value)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    return std::nullopt;
}

std::optional<Rational> pow_rational_exact(const Rational& base, const Rational& exp) {
    // Folding huge powers would materialize astronomically large integers;
    // past this bound the power stays symbolic.
    constexpr long kMaxFoldedExponent = 65536;
    if (numerator(exp) > kMaxFoldedExponent || numerator(exp) < -kMaxFoldedExponent)
        if (base != 0 && base != 1 && base != -1) return std::nullopt;
    if (is_integer(exp)) return pow_integer(base, numerator(exp));
    if (base == 0) {
        if (exp < 0) return std::nullopt;
        return Rational(0);
    }
    const Integer q = denominator(exp);
    if (q > std::numeric_limits<unsigned>::max()) return std::nullopt;
    const auto qi = static_cast<unsigned>(q);
    Integer num = numerator(base);
    const bool neg = num < 0;
    if (neg) {
        if ((qi % 2) == 0) return std::nullopt;  // even root of a negative
        num = -num;
    }
    auto rn = nth_root_exact(num, qi);
    auto rd = nth_root_exact(denominator(base), qi);
    if (!rn || !rd) return std::nullopt;
    Rational root(neg ? Integer(-*rn) : *rn, *rd);
    return pow_integer(root, numerator(exp));
}

}  // namespace diffalg
