#include "diffalg/levi_civita.hpp"

#include <sstream>
#include <utility>

#include "diffalg/error.hpp"

namespace diffalg {

namespace {

using Window = LeviCivitaNumber::Window;

Window window_min(const Window& a, const Window& b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

// window + integer offset, exact stays exact
Window window_shift(const Window& w, int k) {
    if (!w) return w;
    return *w + k;
}

}  // namespace

// ---- construction ---------------------------------------------------------

LeviCivitaNumber LeviCivitaNumber::from_rational(const Rational& c) {
    return monomial(c, 0);
}

LeviCivitaNumber LeviCivitaNumber::eps() { return monomial(1, 1); }

LeviCivitaNumber LeviCivitaNumber::omega() { return monomial(1, -1); }

LeviCivitaNumber LeviCivitaNumber::monomial(const Rational& c, int k, Window w) {
    LeviCivitaNumber out;
    out.window_ = w;
    if (c != 0) out.terms_.emplace(k, c);
    out.drop_beyond_window();
    return out;
}

LeviCivitaNumber LeviCivitaNumber::from_terms(Terms terms, Window w) {
    LeviCivitaNumber out;
    out.terms_ = std::move(terms);
    out.window_ = w;
    for (auto it = out.terms_.begin(); it != out.terms_.end();) {
        if (it->second == 0)
            it = out.terms_.erase(it);
        else
            ++it;
    }
    out.drop_beyond_window();
    return out;
}

void LeviCivitaNumber::drop_beyond_window() {
    if (!window_) return;
    terms_.erase(terms_.upper_bound(*window_), terms_.end());
}

std::optional<int> LeviCivitaNumber::valuation() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
}

Rational LeviCivitaNumber::coefficient(int exponent) const {
    if (window_ && exponent > *window_)
        throw InsufficientTruncation("coefficient at eps^" + std::to_string(exponent) +
                                     " lies beyond the truncation window");
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Rational(0) : it->second;
}

// ---- ring operations -------------------------------------------------------

LeviCivitaNumber operator+(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
    LeviCivitaNumber out;
    out.window_ = window_min(a.window_, b.window_);
    out.terms_ = a.terms_;
    for (const auto& [k, c] : b.terms_) {
        auto [it, fresh] = out.terms_.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) out.terms_.erase(it);
        }
    }
    out.drop_beyond_window();
    return out;
}

LeviCivitaNumber LeviCivitaNumber::operator-() const {
    LeviCivitaNumber out = *this;
    for (auto& [k, c] : out.terms_) c = -c;
    return out;
}

LeviCivitaNumber operator-(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
    return a + (-b);
}

LeviCivitaNumber operator*(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
    // Soundness of the window: with a = A + o(eps^Ma), b = B + o(eps^Mb),
    // the unknown part of ab is Aβ + Bα + αβ, giving
    //   window = min(v(A)+Mb, v(B)+Ma, Ma+Mb+1).
    // For nonzero operands this is the usual min(Ma+v(b), Mb+v(a)).
    const auto va = a.valuation();
    const auto vb = b.valuation();
    Window w;  // exact
    if (b.window_) w = window_min(w, va ? Window(*va + *b.window_) : Window());
    if (a.window_) w = window_min(w, vb ? Window(*vb + *a.window_) : Window());
    if (a.window_ && b.window_) w = window_min(w, Window(*a.window_ + *b.window_ + 1));

    LeviCivitaNumber out;
    out.window_ = w;
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            const int k = ka + kb;
            if (w && k > *w) continue;
            auto [it, fresh] = out.terms_.emplace(k, ca * cb);
            if (!fresh) {
                it->second += ca * cb;
                if (it->second == 0) out.terms_.erase(it);
            }
        }
    }
    return out;
}

LeviCivitaNumber LeviCivitaNumber::inverse(int requested_trunc) const {
    if (terms_.empty()) throw DivisionByZero("inverse of zero (within its window)");
    const int m = terms_.begin()->first;
    const Rational lead = terms_.begin()->second;

    // Sound window of the result: perturbing a by o(eps^Ma) moves 1/a by
    // o(eps^(Ma - 2m)).
    Window sound = window_shift(window_, -2 * m);
    Window w = window_min(sound, Window(requested_trunc));
    if (terms_.size() == 1 && is_exact()) {
        // Exact monomial: the inverse is an exact monomial, no series needed.
        return monomial(Rational(1) / lead, -m);
    }
    if (w && -m > *w)
        throw InsufficientTruncation("inverse's leading exponent eps^" + std::to_string(-m) +
                                     " lies beyond the attainable window");

    // a = lead * eps^m * (1 + u), v(u) >= 1.
    // Work with relative exponents: need (1+u)^-1 modulo o(eps^K).
    const int K = w ? *w + m : requested_trunc + m;
    Terms ut;
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
        const int rel = it->first - m;
        if (rel <= K) ut.emplace(rel, it->second / lead);
    }
    LeviCivitaNumber u = from_terms(std::move(ut), K);
    LeviCivitaNumber geo = from_rational(1).truncated(K);
    LeviCivitaNumber powu = geo;
    while (true) {
        powu = (powu * (-u)).truncated(K);
        if (powu.terms_.empty()) break;
        geo = geo + powu;
    }

    LeviCivitaNumber out;
    out.window_ = w;
    for (const auto& [k, c] : geo.terms_) {
        const int abs_k = k - m;
        if (w && abs_k > *w) continue;
        out.terms_.emplace(abs_k, c / lead);
    }
    return out;
}

LeviCivitaNumber LeviCivitaNumber::pow(const Integer& n, int requested_trunc) const {
    if (n == 0) return from_rational(1);
    const LeviCivitaNumber base = n < 0 ? inverse(requested_trunc) : *this;
    Integer k = n < 0 ? Integer(-n) : n;
    LeviCivitaNumber acc = from_rational(1);
    LeviCivitaNumber sq = base;
    while (k > 0) {
        if ((k & 1) != 0) acc = acc * sq;
        k >>= 1;
        if (k > 0) sq = sq * sq;
    }
    return acc;
}

LeviCivitaNumber LeviCivitaNumber::pow(const Rational& r, int requested_trunc) const {
    if (is_integer(r)) return pow(numerator(r), requested_trunc);
    if (terms_.empty()) {
        if (r < 0) throw DivisionByZero("0 raised to a negative power");
        return *this;  // 0^positive = 0, same window
    }
    const int m = terms_.begin()->first;
    const Rational lead = terms_.begin()->second;

    // (c eps^m (1+u))^r = c^r eps^(m r) (1+u)^r. Exponents must stay integer
    // and c^r rational, otherwise the value leaves the representation.
    const Rational me = r * m;
    if (!is_integer(me))
        throw NonRationalPower("power " + diffalg::to_string(r) + " gives leading exponent " +
                               diffalg::to_string(me) + ", not an integer");
    const int mr = static_cast<int>(numerator(me));
    auto cr = pow_rational_exact(lead, r);
    if (!cr)
        throw NonRationalPower("leading coefficient " + diffalg::to_string(lead) +
                               " has no exact rational power " + diffalg::to_string(r));

    Window sound = window_shift(window_, mr - m);  // relative accuracy is preserved
    Window w = window_min(sound, Window(requested_trunc));
    const int K = w ? *w - mr : requested_trunc;

    Terms ut;
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
        const int rel = it->first - m;
        if (rel <= K) ut.emplace(rel, it->second / lead);
    }
    LeviCivitaNumber u = from_terms(std::move(ut), K);

    // Binomial series: (1+u)^r = sum_j C(r,j) u^j, C(r,j) exact rationals.
    LeviCivitaNumber series = from_rational(1).truncated(K);
    LeviCivitaNumber powu = series;
    Rational binom = 1;
    for (int j = 1;; ++j) {
        powu = (powu * u).truncated(K);
        if (powu.terms_.empty()) break;
        binom *= (r - (j - 1)) / j;
        if (binom == 0) break;
        series = series + from_rational(binom) * powu;
    }

    LeviCivitaNumber out;
    out.window_ = w;
    for (const auto& [k, c] : series.terms_) {
        const int abs_k = k + mr;
        if (w && abs_k > *w) continue;
        out.terms_.emplace(abs_k, c * *cr);
    }
    return out;
}

LeviCivitaNumber LeviCivitaNumber::truncated(Window w) const {
    LeviCivitaNumber out = *this;
    out.window_ = window_min(window_, w);
    out.drop_beyond_window();
    return out;
}

// ---- order -----------------------------------------------------------------

bool leq(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
    const LeviCivitaNumber d = b - a;
    if (d.terms_.empty()) {
        if (d.is_exact()) return true;  // genuinely equal
        throw IndeterminateOrder(
            "difference vanishes within a finite window; order undecidable");
    }
    return d.terms_.begin()->second > 0;
}

bool lt(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
    const LeviCivitaNumber d = b - a;
    if (d.terms_.empty()) {
        if (d.is_exact()) return false;
        throw IndeterminateOrder(
            "difference vanishes within a finite window; order undecidable");
    }
    return d.terms_.begin()->second > 0;
}

LeviCivitaNumber LeviCivitaNumber::abs_value() const {
    if (terms_.empty()) {
        if (is_exact()) return *this;
        throw IndeterminateOrder("sign unknown: value vanishes within a finite window");
    }
    return terms_.begin()->second > 0 ? *this : -*this;
}

bool LeviCivitaNumber::is_infinitesimal() const {
    if (terms_.empty()) {
        // o(eps^w) with w >= 0 is still infinitesimal.
        if (is_exact() || *window_ >= 0) return true;
        throw IndeterminateOrder("window too short to decide infinitesimality");
    }
    return terms_.begin()->first >= 1;
}

bool LeviCivitaNumber::is_infinite() const {
    if (terms_.empty()) {
        if (is_exact() || *window_ >= -1) return false;
        throw IndeterminateOrder("window too short to decide finiteness");
    }
    return terms_.begin()->first <= -1;
}

// ---- observers --------------------------------------------------------------

StandardPart LeviCivitaNumber::standard_part() const {
    if (terms_.empty()) {
        if (is_exact() || *window_ >= 0) return StandardPart::finite(0);
        throw InsufficientTruncation("window ends before eps^0; standard part unknown");
    }
    const auto& [k, c] = *terms_.begin();
    if (k < 0) return c > 0 ? StandardPart::plus_infinity() : StandardPart::minus_infinity();
    auto it = terms_.find(0);
    return StandardPart::finite(it == terms_.end() ? Rational(0) : it->second);
}

PrincipalMonomial LeviCivitaNumber::principal_part() const {
    if (terms_.empty()) return {};
    return {terms_.begin()->second, terms_.begin()->first};
}

// ---- rendering ---------------------------------------------------------------

namespace {

// |k| with the eps/omega name, no exponent marker for |k| == 1.
std::string unit_name(int k) {
    if (k == 0) return "";
    const std::string base = k > 0 ? "eps" : "omega";
    const int mag = k > 0 ? k : -k;
    if (mag == 1) return base;
    return base + "^" + std::to_string(mag);
}

std::string term_string(const Rational& c, int k) {
    const std::string unit = unit_name(k);
    if (unit.empty()) return to_string(c);
    if (c == 1) return unit;
    if (c == -1) return "-" + unit;
    return to_string(c) + "*" + unit;
}

}  // namespace

std::string PrincipalMonomial::to_string() const {
    if (is_zero()) return "0";
    return term_string(coefficient, exponent);
}

std::string StandardPart::to_string() const {
    switch (kind) {
        case Kind::plus_infinity: return "+inf";
        case Kind::minus_infinity: return "-inf";
        case Kind::finite: break;
    }
    return diffalg::to_string(value);
}

std::string LeviCivitaNumber::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (first) {
            out << term_string(c, k);
            first = false;
            continue;
        }
        if (c > 0)
            out << " + " << term_string(c, k);
        else
            out << " - " << term_string(-c, k);
    }
    return out.str();
}

bool agree_within_common_window(const LeviCivitaNumber& a, const LeviCivitaNumber& b) {
    const auto w = [&]() -> LeviCivitaNumber::Window {
        if (a.is_exact()) return b.trunc_order();
        if (b.is_exact()) return a.trunc_order();
        return std::min(*a.trunc_order(), *b.trunc_order());
    }();
    return (a - b).truncated(w).is_zero_within_window();
}

}  // namespace diffalg
