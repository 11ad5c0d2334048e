#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "diffalg/error.hpp"
#include "diffalg/levi_civita.hpp"
#include "property_suites.hpp"
#include "support.hpp"

using diffalg::DivisionByZero;
using diffalg::IndeterminateOrder;
using diffalg::InsufficientTruncation;
using diffalg::LeviCivitaNumber;
using diffalg::Rational;
using diffalg::StandardPart;

namespace {

using Terms = LeviCivitaNumber::Terms;

LeviCivitaNumber lc(Terms t, LeviCivitaNumber::Window w = std::nullopt) {
    return LeviCivitaNumber::from_terms(std::move(t), w);
}

// Independent oracle: dense polynomial convolution over a small exponent
// range, no sparse-map sharing with the implementation.
Terms convolve_oracle(const Terms& a, const Terms& b) {
    Terms out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) out[ka + kb] += ca * cb;
    for (auto it = out.begin(); it != out.end();) {
        if (it->second == 0)
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

}  // namespace

TEST_CASE("embedding, eps and omega") {
    const auto three = LeviCivitaNumber::from_rational(3);
    CHECK(three.is_exact());
    CHECK(three.to_string() == "3");
    CHECK(LeviCivitaNumber::eps().to_string() == "eps");
    CHECK(LeviCivitaNumber::omega().to_string() == "omega");

    // eps * omega collapses to the real unit
    const auto unit = LeviCivitaNumber::eps() * LeviCivitaNumber::omega();
    CHECK(unit == LeviCivitaNumber::from_rational(1));
}

TEST_CASE("addition merges exponent-aligned terms") {
    const auto a = lc({{-1, 1}, {0, -5}});  // omega - 5
    const auto b = lc({{1, 3}});            // 3 eps
    const auto sum = a + b;
    CHECK(sum.terms() == Terms{{-1, 1}, {0, -5}, {1, 3}});
    CHECK(sum.to_string() == "omega - 5 + 3*eps");

    // cancellation removes the slot entirely
    const auto cancel = lc({{2, Rational(1, 2)}}) + lc({{2, Rational(-1, 2)}});
    CHECK(cancel.is_zero_within_window());
    CHECK(cancel.is_exact());
}

TEST_CASE("multiplication is polynomial convolution") {
    const auto a = lc({{0, 1}, {1, 1}});   // 1 + eps
    const auto b = lc({{0, 1}, {1, -1}});  // 1 - eps
    CHECK((a * b).terms() == Terms{{0, 1}, {2, -1}});  // 1 - eps^2

    // randomized agreement with the dense convolution oracle
    testsupport::Rng rng(41);
    for (int i = 0; i < 300; ++i) {
        const auto x = rng.lc(-3, 5, false);
        const auto y = rng.lc(-3, 5, false);
        CHECK((x * y).terms() == convolve_oracle(x.terms(), y.terms()));
    }
}

TEST_CASE("window propagation follows the pessimistic rules") {
    const auto a = lc({{0, 1}, {1, 1}}, 5);
    const auto b = lc({{2, 3}}, 7);
    CHECK((a + b).trunc_order() == 5);
    // min(Ma + v(b), Mb + v(a)) = min(5+2, 7+0) = 7
    CHECK((a * b).trunc_order() == 7);
    CHECK((a * LeviCivitaNumber::from_rational(2)).trunc_order() == 5);

    // terms beyond the tighter window are dropped
    const auto wide = lc({{0, 1}, {6, 1}});
    const auto narrow = lc({{0, 1}}, 3);
    CHECK((wide + narrow).terms() == Terms{{0, 2}});
    CHECK((wide + narrow).trunc_order() == 3);
}

TEST_CASE("inversion: geometric series against mul-back") {
    const auto one_plus_eps = lc({{0, 1}, {1, 1}});
    const auto inv = one_plus_eps.inverse(3);
    CHECK(inv.terms() == Terms{{0, 1}, {1, -1}, {2, 1}, {3, -1}});  // 1 - eps + eps^2 - eps^3
    CHECK(inv.trunc_order() == 3);
    CHECK(inv.to_string() == "1 - eps + eps^2 - eps^3");

    // mul-back is 1 up to o(eps^3)
    const auto back = one_plus_eps * inv;
    CHECK(back.trunc_order() == 3);
    CHECK((back - LeviCivitaNumber::from_rational(1)).is_zero_within_window());

    // exact monomials invert exactly
    CHECK(LeviCivitaNumber::eps().inverse() == LeviCivitaNumber::omega());
    const auto m = LeviCivitaNumber::monomial(Rational(3, 2), 4);
    CHECK(m.inverse() == LeviCivitaNumber::monomial(Rational(2, 3), -4));

    CHECK_THROWS_AS(LeviCivitaNumber::zero().inverse(), DivisionByZero);
    CHECK_THROWS_AS(lc({}, 4).inverse(), DivisionByZero);

    // randomized mul-back across shapes
    testsupport::Rng rng(42);
    for (int i = 0; i < 300; ++i) {
        const auto x = rng.lc_nonzero();
        const auto prod = x * x.inverse();
        CHECK(agree_within_common_window(prod, LeviCivitaNumber::from_rational(1)));
    }
}

TEST_CASE("rational powers via binomial series") {
    // (1 + eps)^(1/2) squared recovers 1 + eps within the window
    const auto a = lc({{0, 1}, {1, 1}});
    const auto root = a.pow(Rational(1, 2), 6);
    CHECK(agree_within_common_window(root * root, a));

    // (4 eps^2)^(1/2) = 2 eps
    const auto m = LeviCivitaNumber::monomial(4, 2);
    CHECK(m.pow(Rational(1, 2)).terms() == Terms{{1, 2}});

    // eps^(1/2) leaves the integer-exponent lattice
    CHECK_THROWS_AS(LeviCivitaNumber::eps().pow(Rational(1, 2)), diffalg::NonRationalPower);
    // 2^(1/2) is irrational
    CHECK_THROWS_AS(LeviCivitaNumber::from_rational(2).pow(Rational(1, 2)),
                    diffalg::NonRationalPower);
}

TEST_CASE("ordering by leading coefficient of the difference") {
    const auto eps = LeviCivitaNumber::eps();
    const auto omega = LeviCivitaNumber::omega();
    CHECK(leq(eps, LeviCivitaNumber::from_rational(Rational(1, 1000000))));
    CHECK(leq(LeviCivitaNumber::from_rational(5), omega));
    CHECK(leq(LeviCivitaNumber::from_rational(3), LeviCivitaNumber::from_rational(3)));
    CHECK(!lt(LeviCivitaNumber::from_rational(3), LeviCivitaNumber::from_rational(3)));
    CHECK(lt(-omega, -eps));

    // indeterminate when the difference dies inside a finite window
    const auto fuzzy = lc({{0, 1}}, 4);
    CHECK_THROWS_AS((void)leq(fuzzy, lc({{0, 1}}, 6)), IndeterminateOrder);

    const auto abs_case = lc({{-1, 1}, {0, -5}});
    CHECK(abs_case.abs_value() == abs_case);  // omega - 5 is positive
    CHECK((-abs_case).abs_value() == abs_case);
    CHECK(LeviCivitaNumber::zero().abs_value() == LeviCivitaNumber::zero());
}

TEST_CASE("infinitesimal and infinite classification") {
    CHECK(LeviCivitaNumber::eps().is_infinitesimal());
    CHECK(LeviCivitaNumber::zero().is_infinitesimal());
    CHECK(!LeviCivitaNumber::from_rational(3).is_infinitesimal());
    CHECK(LeviCivitaNumber::omega().is_infinite());
    CHECK(lc({{-1, 1}, {0, -1000000}}).is_infinite());  // omega - 1000000
    CHECK(!lc({{0, 3}, {1, 5}}).is_infinite());
}

TEST_CASE("standard and principal parts") {
    // -2 omega^2 + omega - 5 + 3 eps
    const auto v = lc({{-2, -2}, {-1, 1}, {0, -5}, {1, 3}});
    CHECK(v.standard_part() == StandardPart::minus_infinity());
    CHECK(v.principal_part() == diffalg::PrincipalMonomial{-2, -2});
    CHECK(v.principal_part().to_string() == "-2*omega^2");

    const auto w = lc({{2, 5}, {3, 1}});  // 5 eps^2 + eps^3
    CHECK(w.standard_part() == StandardPart::finite(0));
    CHECK(w.principal_part() == diffalg::PrincipalMonomial{5, 2});
    CHECK(w.principal_part().to_string() == "5*eps^2");

    CHECK(lc({{0, 3}, {1, 5}}).standard_part() == StandardPart::finite(3));
    CHECK(LeviCivitaNumber::omega().standard_part() == StandardPart::plus_infinity());
    CHECK(LeviCivitaNumber::zero().standard_part() == StandardPart::finite(0));
    CHECK(LeviCivitaNumber::zero().principal_part().is_zero());
    CHECK(LeviCivitaNumber::zero().principal_part().to_string() == "0");

    // a window that ends before eps^0 cannot answer st
    CHECK_THROWS_AS((void)lc({}, -2).standard_part(), InsufficientTruncation);
}

TEST_CASE("rendering") {
    CHECK(lc({{-2, -2}, {-1, 1}, {0, -5}, {1, 3}}).to_string() ==
          "-2*omega^2 + omega - 5 + 3*eps");
    CHECK(lc({{1, 2}, {2, 1}}).to_string() == "2*eps + eps^2");
    CHECK(lc({{2, Rational(-1, 3)}}).to_string() == "-1/3*eps^2");
    CHECK(LeviCivitaNumber::zero().to_string() == "0");
}

TEST_CASE("property: field laws (300 cases)") {
    const auto r = testsupport::prop_field_laws(2024, 300);
    INFO((r.notes.empty() ? "" : r.notes.front()));
    CHECK(r.failures == 0);
    CHECK(r.cases >= 200);
}

TEST_CASE("property: order and valuation (300 cases)") {
    const auto r = testsupport::prop_order_and_valuation(2025, 300);
    INFO((r.notes.empty() ? "" : r.notes.front()));
    CHECK(r.failures == 0);
    CHECK(r.cases >= 200);
}

TEST_CASE("property: st/pt homomorphism (300 cases)") {
    const auto r = testsupport::prop_st_pt_homomorphism(2026, 300);
    INFO((r.notes.empty() ? "" : r.notes.front()));
    CHECK(r.failures == 0);
    CHECK(r.cases >= 200);
}
