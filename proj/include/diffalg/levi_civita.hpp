#pragma once

#include <map>
#include <optional>
#include <string>

#include "diffalg/rational.hpp"

namespace diffalg {

// Default truncation order imposed when inverting an exact series (the
// geometric expansion is infinite, something has to cut it off). Derivative
// checks of order n need intact terms through eps^(n+1), so 8 leaves room.
inline constexpr int kDefaultTruncOrder = 8;

struct PrincipalMonomial {
    Rational coefficient;  // 0 for the zero value
    int exponent = 0;

    bool is_zero() const { return coefficient == 0; }
    std::string to_string() const;
    friend bool operator==(const PrincipalMonomial&, const PrincipalMonomial&) = default;
};

struct StandardPart {
    enum class Kind { finite, plus_infinity, minus_infinity };

    Kind kind = Kind::finite;
    Rational value;  // meaningful only when finite

    static StandardPart finite(Rational v) { return {Kind::finite, std::move(v)}; }
    static StandardPart plus_infinity() { return {Kind::plus_infinity, 0}; }
    static StandardPart minus_infinity() { return {Kind::minus_infinity, 0}; }

    bool is_finite() const { return kind == Kind::finite; }
    std::string to_string() const;
    friend bool operator==(const StandardPart&, const StandardPart&) = default;
};

/**
 * A truncated Levi-Civita number: a finite formal series
 *
 *     sum_k c_k * eps^k,   k an integer, c_k exact rationals,
 *
 * where eps is a fixed positive infinitesimal and omega = eps^-1. Negative
 * exponents are infinite magnitudes, positive ones infinitesimal.
 *
 * Each value carries a truncation window. `trunc_order() == m` means the
 * value is known exactly modulo o(eps^m): coefficients at exponents > m are
 * unknown. An empty optional means the value is exact (all coefficients
 * known, almost all zero). Embeddings of rationals and the eps/omega
 * constructors are exact; finite windows enter through inversion and then
 * propagate pessimistically through arithmetic.
 *
 * Invariants: no stored zero coefficients; every stored exponent is <= the
 * window when the window is finite.
 */
class LeviCivitaNumber {
public:
    using Terms = std::map<int, Rational>;  // exponent -> coefficient, ascending
    using Window = std::optional<int>;      // nullopt = exact

    LeviCivitaNumber() = default;  // exact zero

    static LeviCivitaNumber zero() { return {}; }
    static LeviCivitaNumber from_rational(const Rational& c);
    static LeviCivitaNumber eps();    // eps^1, exact
    static LeviCivitaNumber omega();  // eps^-1, exact
    // c * eps^k with an explicit window (exact by default).
    static LeviCivitaNumber monomial(const Rational& c, int k, Window w = std::nullopt);
    static LeviCivitaNumber from_terms(Terms terms, Window w = std::nullopt);

    const Terms& terms() const { return terms_; }
    Window trunc_order() const { return window_; }
    bool is_exact() const { return !window_.has_value(); }

    // True when no coefficient is known to be nonzero. For a finite window
    // this means "zero modulo o(eps^window)", not necessarily zero.
    bool is_zero_within_window() const { return terms_.empty(); }

    // Least exponent carrying a nonzero coefficient; nullopt for zero
    // (the infinite-valuation sentinel).
    std::optional<int> valuation() const;

    Rational coefficient(int exponent) const;  // 0 when absent and known

    // ---- ring operations --------------------------------------------
    friend LeviCivitaNumber operator+(const LeviCivitaNumber&, const LeviCivitaNumber&);
    friend LeviCivitaNumber operator-(const LeviCivitaNumber&, const LeviCivitaNumber&);
    friend LeviCivitaNumber operator*(const LeviCivitaNumber&, const LeviCivitaNumber&);
    LeviCivitaNumber operator-() const;

    // Multiplicative inverse via leading-monomial factoring and a geometric
    // series. `requested_trunc` bounds the window when the input is exact;
    // the sound bound window - 2*valuation applies when it is not. Throws
    // DivisionByZero on a value with no known nonzero term, and
    // InsufficientTruncation when not even the leading term of the result
    // fits inside the sound window.
    LeviCivitaNumber inverse(int requested_trunc = kDefaultTruncOrder) const;

    // Integer power (negative uses inverse with the given truncation).
    LeviCivitaNumber pow(const Integer& n, int requested_trunc = kDefaultTruncOrder) const;

    // Exact-rational power via binomial series; requires the leading
    // monomial to have a rational root (throws NonRationalPower otherwise).
    LeviCivitaNumber pow(const Rational& r, int requested_trunc = kDefaultTruncOrder) const;

    // Copy restricted to a (possibly) smaller window.
    LeviCivitaNumber truncated(Window w) const;

    // ---- order ------------------------------------------------------
    // a <= b decided by the sign of the leading coefficient of b - a.
    // Throws IndeterminateOrder when b - a vanishes inside a finite window.
    friend bool leq(const LeviCivitaNumber& a, const LeviCivitaNumber& b);
    friend bool lt(const LeviCivitaNumber& a, const LeviCivitaNumber& b);

    LeviCivitaNumber abs_value() const;

    bool is_infinitesimal() const;  // zero or valuation >= 1
    bool is_infinite() const;       // valuation <= -1

    // ---- observers ----------------------------------------------------
    // Signed infinity when the value is infinite, otherwise the coefficient
    // at exponent 0. Throws InsufficientTruncation when the window ends
    // before exponent 0.
    StandardPart standard_part() const;

    // Leading monomial; the zero monomial for zero-within-window.
    PrincipalMonomial principal_part() const;

    // "c*eps^k + ..." / "c*omega^k + ..." with exponents ascending.
    std::string to_string() const;

    // Canonical equality: identical terms and identical window.
    friend bool operator==(const LeviCivitaNumber&, const LeviCivitaNumber&) = default;

private:
    Terms terms_;
    Window window_;

    void drop_beyond_window();
};

// Agreement of known coefficients up to the tighter of the two windows.
// This is the "equal modulo truncation" relation the field laws satisfy.
bool agree_within_common_window(const LeviCivitaNumber& a, const LeviCivitaNumber& b);

}  // namespace diffalg
