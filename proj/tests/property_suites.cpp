#include "property_suites.hpp"

#include <sstream>

#include <algorithm>

#include "diffalg/differential.hpp"
#include "diffalg/parse.hpp"
#include "diffalg/error.hpp"
#include "diffalg/expr.hpp"
#include "diffalg/levi_civita.hpp"
#include "oracle.hpp"
#include "support.hpp"

namespace testsupport {

using diffalg::agree_within_common_window;
using diffalg::LeviCivitaNumber;
using diffalg::Rational;

namespace {

void fail(SuiteResult& r, const std::string& note) {
    ++r.failures;
    if (r.notes.size() < 10) r.notes.push_back(note);
}

}  // namespace

SuiteResult prop_field_laws(std::uint64_t seed, int cases) {
    SuiteResult r{"hyperreal field laws", cases, 0, {}};
    Rng rng(seed);
    const auto one = LeviCivitaNumber::from_rational(1);
    for (int i = 0; i < cases; ++i) {
        const auto a = rng.lc();
        const auto b = rng.lc();
        const auto c = rng.lc();
        if (!agree_within_common_window((a + b) + c, a + (b + c)))
            fail(r, "add not associative, case " + std::to_string(i));
        if (!agree_within_common_window(a + b, b + a))
            fail(r, "add not commutative, case " + std::to_string(i));
        if (!agree_within_common_window((a * b) * c, a * (b * c)))
            fail(r, "mul not associative, case " + std::to_string(i));
        if (!agree_within_common_window(a * b, b * a))
            fail(r, "mul not commutative, case " + std::to_string(i));
        if (!agree_within_common_window(a * (b + c), a * b + a * c))
            fail(r, "mul does not distribute, case " + std::to_string(i));
        if (!agree_within_common_window(a + (-a), LeviCivitaNumber::zero()))
            fail(r, "additive inverse broken, case " + std::to_string(i));
        if (!agree_within_common_window(a * one, a))
            fail(r, "multiplicative identity broken, case " + std::to_string(i));

        const auto nz = rng.lc_nonzero();
        if (!agree_within_common_window(nz * nz.inverse(), one))
            fail(r, "a * a^-1 != 1 within window, case " + std::to_string(i));
    }
    return r;
}

SuiteResult prop_order_and_valuation(std::uint64_t seed, int cases) {
    SuiteResult r{"hyperreal order and valuation", cases, 0, {}};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        // Exact values so every comparison is decidable.
        const auto a = rng.lc(-4, 6, false);
        const auto b = rng.lc(-4, 6, false);
        const auto c = rng.lc(-4, 6, false);

        const bool ab = lt(a, b), ba = lt(b, a), eq = a == b;
        if ((ab ? 1 : 0) + (ba ? 1 : 0) + (eq ? 1 : 0) != 1)
            fail(r, "trichotomy violated, case " + std::to_string(i));
        if (leq(a, b) && leq(b, c) && !leq(a, c))
            fail(r, "transitivity violated, case " + std::to_string(i));
        if (leq(a, b) && !leq(a + c, b + c))
            fail(r, "order not translation invariant, case " + std::to_string(i));
        const auto zero = LeviCivitaNumber::zero();
        if (leq(zero, a) && leq(zero, b) && !leq(zero, a * b))
            fail(r, "product of nonnegatives negative, case " + std::to_string(i));

        // v(ab) = v(a) + v(b); v(a+b) >= min(v)
        const auto va = a.valuation(), vb = b.valuation();
        const auto vab = (a * b).valuation();
        if (va && vb) {
            if (!vab || *vab != *va + *vb)
                fail(r, "valuation not additive under mul, case " + std::to_string(i));
        } else if (vab) {
            fail(r, "zero factor gave nonzero product, case " + std::to_string(i));
        }
        const auto vsum = (a + b).valuation();
        if (va && vb && vsum && *vsum < std::min(*va, *vb))
            fail(r, "v(a+b) below min of valuations, case " + std::to_string(i));
        if (va && vb && *va != *vb) {
            if (!vsum || *vsum != std::min(*va, *vb))
                fail(r, "v(a+b) != min when leading terms cannot cancel, case " +
                            std::to_string(i));
        }

        // |a| is a or -a and nonnegative
        const auto abs_a = a.abs_value();
        if (!leq(zero, abs_a) || !(abs_a == a || abs_a == -a))
            fail(r, "abs misbehaved, case " + std::to_string(i));
    }
    return r;
}

SuiteResult prop_st_pt_homomorphism(std::uint64_t seed, int cases) {
    SuiteResult r{"standard/principal part homomorphism", cases, 0, {}};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        // Finite values: exponents >= 0, exact windows.
        const auto a = rng.lc(0, 6, false);
        const auto b = rng.lc(0, 6, false);
        const auto sa = a.standard_part(), sb = b.standard_part();
        if (!sa.is_finite() || !sb.is_finite()) {
            fail(r, "finite generator produced infinite value, case " + std::to_string(i));
            continue;
        }
        if ((a + b).standard_part().value != sa.value + sb.value)
            fail(r, "st not additive, case " + std::to_string(i));
        if ((a * b).standard_part().value != sa.value * sb.value)
            fail(r, "st not multiplicative, case " + std::to_string(i));

        // Principal parts multiply as monomials; subtracting pt raises valuation.
        const auto x = rng.lc_nonzero(-4, 6, false);
        const auto y = rng.lc_nonzero(-4, 6, false);
        const auto px = x.principal_part(), py = y.principal_part();
        const auto pxy = (x * y).principal_part();
        if (pxy.coefficient != px.coefficient * py.coefficient ||
            pxy.exponent != px.exponent + py.exponent)
            fail(r, "pt not multiplicative, case " + std::to_string(i));
        const auto rem = x - LeviCivitaNumber::monomial(px.coefficient, px.exponent);
        const auto vrem = rem.valuation();
        if (vrem && *vrem <= *x.valuation())
            fail(r, "x - pt(x) did not raise valuation, case " + std::to_string(i));

        // Finite infinitesimal checks line up with the valuation.
        const auto vx = x.valuation();
        if (x.is_infinitesimal() != (*vx >= 1))
            fail(r, "is_infinitesimal disagrees with valuation, case " + std::to_string(i));
        if (x.is_infinite() != (*vx <= -1))
            fail(r, "is_infinite disagrees with valuation, case " + std::to_string(i));
    }
    return r;
}


namespace {

using diffalg::Expr;
using diffalg::ExprKind;

template <class T>
void shuffle_vec(Rng& rng, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[static_cast<std::size_t>(rng.pick(0, static_cast<long>(i) - 1))]);
}

// Two spellings of one expression; the second permutes every operand list.
struct Spelling {
    Expr plain;
    Expr shuffled;
};

Spelling gen_leaf(Rng& rng) {
    switch (rng.pick(0, 7)) {
        case 0: {
            const Expr c = Expr::constant(rng.rational(4, 3));
            return {c, c};
        }
        case 1:
        case 2: {
            const Expr v = Expr::var(rng.pick(0, 1) ? "x" : "y");
            return {v, v};
        }
        case 3: {
            const Expr d = Expr::diff_atom("x", static_cast<int>(rng.pick(1, 3)));
            return {d, d};
        }
        case 4: {
            const Expr d = Expr::diff_atom("y");
            return {d, d};
        }
        case 5: {
            const Expr f = Expr::func("f", {Expr::var("x")});
            return {f, f};
        }
        case 6: {
            const Expr d = Expr::deriv_atom(Expr::var("y"), "x",
                                            static_cast<int>(rng.pick(1, 2)));
            return {d, d};
        }
        default: {
            const Expr g = Expr::func("g", {Expr::var("x"), Expr::var("y")});
            const Expr p = Expr::partial_atom(g, {rng.pick(0, 1) ? "x" : "y"});
            return {p, p};
        }
    }
}

Spelling gen_expr(Rng& rng, int depth) {
    if (depth <= 0) return gen_leaf(rng);
    switch (rng.pick(0, 3)) {
        case 0: {
            const long n = rng.pick(2, 3);
            std::vector<Expr> a, b;
            for (long i = 0; i < n; ++i) {
                auto s = gen_expr(rng, depth - 1);
                a.push_back(s.plain);
                b.push_back(s.shuffled);
            }
            shuffle_vec(rng, b);
            return {Expr::add(a), Expr::add(b)};
        }
        case 1: {
            const long n = rng.pick(2, 3);
            std::vector<Expr> a, b;
            for (long i = 0; i < n; ++i) {
                auto s = gen_expr(rng, depth - 1);
                a.push_back(s.plain);
                b.push_back(s.shuffled);
            }
            shuffle_vec(rng, b);
            return {Expr::mul(a), Expr::mul(b)};
        }
        case 2: {
            const Expr base = rng.pick(0, 1) ? Expr::var(rng.pick(0, 1) ? "x" : "y")
                                             : Expr::diff_atom("x");
            diffalg::Rational exp;
            switch (rng.pick(0, 4)) {
                case 0: exp = -2; break;
                case 1: exp = -1; break;
                case 2: exp = 2; break;
                case 3: exp = 3; break;
                default:
                    // Fractional exponents stay on grade-zero bases.
                    if (base.kind() == ExprKind::var)
                        exp = diffalg::Rational(1, 2);
                    else
                        exp = 2;
                    break;
            }
            const Expr p = Expr::pow(base, exp);
            return {p, p};
        }
        default:
            return gen_leaf(rng);
    }
}

}  // namespace

SuiteResult prop_normalize_idempotent(std::uint64_t seed, int cases) {
    SuiteResult r{"normal form invariants", cases, 0, {}};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        try {
            const auto s = gen_expr(rng, 3);
            const Expr n1 = normalize(s.plain);
            const Expr n2 = normalize(s.shuffled);
            if (n1 != n2)
                fail(r, "normal form depends on operand order, case " + std::to_string(i));
            if (normalize(n1) != n1)
                fail(r, "normalize not idempotent, case " + std::to_string(i));
            if (!normalize(s.plain - s.plain).is_zero())
                fail(r, "e - e did not normalize to zero, case " + std::to_string(i));

            const auto f = gen_expr(rng, 2).plain;
            const auto g = gen_expr(rng, 1).plain;
            const auto h = gen_expr(rng, 1).plain;
            if (normalize(f * (g + h)) != normalize(f * g + f * h))
                fail(r, "distributivity broken, case " + std::to_string(i));
            const Expr sum = g + h;
            if (normalize(Expr::pow(sum, 2)) != normalize(sum * sum))
                fail(r, "squared sum disagrees with product, case " + std::to_string(i));

            const auto ge = grade(s.plain);
            if (ge && !n1.is_zero()) {
                const auto gn = grade(n1);
                if (!gn || *gn != *ge)
                    fail(r, "grade changed under normalize, case " + std::to_string(i));
            }

            // compare() must stay a strict total order.
            const Expr a = gen_expr(rng, 2).plain, b = gen_expr(rng, 2).plain,
                       c = gen_expr(rng, 2).plain;
            if (compare(a, b) != -compare(b, a))
                fail(r, "compare not antisymmetric, case " + std::to_string(i));
            if (compare(a, a) != 0)
                fail(r, "compare not reflexive, case " + std::to_string(i));
            if (compare(a, b) <= 0 && compare(b, c) <= 0 && compare(a, c) > 0)
                fail(r, "compare not transitive, case " + std::to_string(i));
        } catch (const diffalg::Error& e) {
            fail(r, std::string("unexpected error: ") + e.what());
        }
    }
    return r;
}


namespace {

// Random polynomial expression in x and y: a short sum of rational multiples
// of x^a y^b.
Expr gen_poly(Rng& rng) {
    std::vector<Expr> terms;
    const long n = rng.pick(1, 3);
    for (long i = 0; i < n; ++i) {
        std::vector<Expr> fs{Expr::constant(rng.nonzero_rational(4, 3))};
        const long a = rng.pick(0, 2), b = rng.pick(0, 2);
        if (a > 0) fs.push_back(Expr::pow(Expr::var("x"), diffalg::Rational(a)));
        if (b > 0) fs.push_back(Expr::pow(Expr::var("y"), diffalg::Rational(b)));
        terms.push_back(Expr::mul(std::move(fs)));
    }
    return Expr::add(std::move(terms));
}

std::vector<diffalg::Rational> gen_param_poly(Rng& rng) {
    std::vector<diffalg::Rational> coeffs;
    const long deg = rng.pick(1, 2);
    for (long i = 0; i < deg; ++i) coeffs.push_back(rng.rational(3, 2));
    coeffs.push_back(rng.nonzero_rational(3, 2));  // leading coefficient
    return coeffs;
}

}  // namespace

SuiteResult prop_derivation_rules(std::uint64_t seed, int cases) {
    SuiteResult r{"graded derivation laws", cases, 0, {}};
    Rng rng(seed);
    using diffalg::differential;
    using diffalg::grade;
    using diffalg::normalize;
    using diffalg::nth_differential;
    using diffalg::partial_differential;
    for (int i = 0; i < cases; ++i) {
        try {
            const Expr u = gen_poly(rng);
            const Expr v = gen_poly(rng);

            const diffalg::Rational a = rng.rational(5, 3), b = rng.rational(5, 3);
            if (differential(Expr::constant(a) * u + Expr::constant(b) * v) !=
                normalize(Expr::constant(a) * differential(u) +
                          Expr::constant(b) * differential(v)))
                fail(r, "linearity broken, case " + std::to_string(i));

            if (differential(u * v) !=
                normalize(u * differential(v) + v * differential(u)))
                fail(r, "Leibniz rule broken, case " + std::to_string(i));

            const long k = rng.pick(2, 3);
            if (differential(Expr::pow(u, diffalg::Rational(k))) !=
                normalize(Expr::integer(k) * Expr::pow(u, diffalg::Rational(k - 1)) *
                          differential(u)))
                fail(r, "power chain rule broken, case " + std::to_string(i));

            const int steps = static_cast<int>(rng.pick(0, 2));
            const Expr h = nth_differential(u, steps);
            if (!h.is_zero()) {
                const auto gh = grade(h);
                if (!gh || *gh != steps)
                    fail(r, "derivation does not raise grade by one, case " +
                                std::to_string(i));
                const Expr dh = differential(h);
                if (!dh.is_zero()) {
                    const auto gd = grade(dh);
                    if (!gd || *gd != steps + 1)
                        fail(r, "derivation does not raise grade by one, case " +
                                    std::to_string(i));
                }
            }

            const auto fv = diffalg::free_vars(normalize(u));
            if (fv.count("x") != 0 && fv.count("y") != 0) {
                if (partial_differential(u, {"x", "y"}) !=
                    normalize(partial_differential(u, {"x"}) +
                              partial_differential(u, {"y"})))
                    fail(r, "restricted derivation not additive over a variable "
                            "partition, case " + std::to_string(i));
                if (partial_differential(u, fv) != differential(u))
                    fail(r, "varying every free variable disagrees with the "
                            "differential, case " + std::to_string(i));
            }

            OracleEnv env;
            env.q0 = rng.rational(3, 2);
            env.polys["x"] = gen_param_poly(rng);
            env.polys["y"] = gen_param_poly(rng);
            const int n = static_cast<int>(rng.pick(1, 3));
            const auto lhs = oracle_eval(nth_differential(u, n), env);
            const auto rhs = oracle_forward_difference(u, n, env);
            if (lhs.coefficient(n) != rhs.coefficient(n))
                fail(r, "forward difference oracle disagrees at order " +
                            std::to_string(n) + ", case " + std::to_string(i));
        } catch (const diffalg::Error& e) {
            fail(r, std::string("unexpected error: ") + e.what());
        }
    }
    return r;
}


SuiteResult prop_parser_round_trip(std::uint64_t seed, int cases) {
    SuiteResult r{"parser round trip and fuzz safety", cases, 0, {}};
    Rng rng(seed);
    diffalg::DependencyDecls decls;
    decls.declare_function("f", {"x"});
    decls.declare_function("g", {"x", "y"});
    const std::string charset = "xyfg dD[]();,+-*/^0123456789p";
    for (int i = 0; i < cases; ++i) {
        try {
            const Expr e = normalize(gen_expr(rng, 3).plain);
            const std::string text = render_text(e);
            const Expr back = diffalg::parse_expr(text, decls);
            if (back != e)
                fail(r, "round trip changed \"" + text + "\" into \"" +
                            render_text(back) + "\", case " + std::to_string(i));
        } catch (const diffalg::Error& err) {
            fail(r, std::string("unexpected error: ") + err.what() + ", case " +
                        std::to_string(i));
        }

        // Arbitrary input either parses or raises a positioned library error.
        std::string junk;
        const long len = rng.pick(0, 48);
        for (long j = 0; j < len; ++j)
            junk.push_back(charset[static_cast<std::size_t>(
                rng.pick(0, static_cast<long>(charset.size()) - 1))]);
        try {
            (void)diffalg::parse_expr(junk, decls);
        } catch (const diffalg::ParseError& pe) {
            if (pe.offset > junk.size())
                fail(r, "error position outside the input, case " + std::to_string(i));
        } catch (const diffalg::Error&) {
            // engine or normalizer errors from eager expansion are fine
        } catch (...) {
            fail(r, "non-library exception while parsing \"" + junk + "\", case " +
                        std::to_string(i));
        }
    }
    return r;
}

}  // namespace testsupport
